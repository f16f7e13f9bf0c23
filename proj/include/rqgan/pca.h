// Copyright 2026 The rqgan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RQGAN_PCA_H_
#define RQGAN_PCA_H_

#include <filesystem>
#include <span>
#include <vector>

#include "rqgan/linalg.h"

namespace rqgan {

struct PcaModel {
  std::vector<double> mean;
  // k x D, one orthonormal component per row, largest-magnitude entry > 0.
  Matrix components;
  // Descending.
  std::vector<double> explained_variance;
  double total_variance = 0.0;
  // Cumulative explained variance of the retained components, in [0, 1].
  double cev = 0.0;

  std::size_t input_dim() const { return mean.size(); }
  std::size_t num_components() const { return components.rows(); }
};

// Centered PCA of `data` (N samples x D features). Uses the N x N Gram
// matrix when N < D and the covariance otherwise. Throws
// std::invalid_argument unless 1 <= n_components <= min(N - 1, D), or when
// the data has zero total variance.
PcaModel pca_fit(const Matrix& data, int n_components);

std::vector<double> pca_transform(const PcaModel& model,
                                  std::span<const double> sample);

// mean + sum_i coeffs[i] * components[i]; no clipping.
std::vector<double> pca_inverse_transform(const PcaModel& model,
                                          std::span<const double> coeffs);

// Binary layout, all little-endian:
//   char[8] "RQPCA\x01\0\0", u64 D, u64 k, f64 total_variance, f64 cev,
//   f64 mean[D], f64 explained_variance[k], f64 components[k][D].
void save_pca(const PcaModel& model, const std::filesystem::path& path);
PcaModel load_pca(const std::filesystem::path& path);

}  // namespace rqgan

#endif  // RQGAN_PCA_H_
