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

// Inverse stereographic projection between R^d and the unit sphere in
// R^{d+1} minus the north pole (last coordinate = 1).

#ifndef RQGAN_ENCODING_H_
#define RQGAN_ENCODING_H_

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rqgan {

using PlaneVector = std::vector<double>;
using SphereVector = std::vector<double>;

// Minimum distance 1 - v_last allowed when decoding.
inline constexpr double kPoleEpsilon = 1e-9;

class NorthPoleError : public std::domain_error {
 public:
  explicit NorthPoleError(const std::string& what) : std::domain_error(what) {}
};

// v_i = 2 u_i / (|u|^2 + 1), v_last = (|u|^2 - 1) / (|u|^2 + 1), then
// renormalized. Throws std::invalid_argument on empty or non-finite input.
SphereVector si_encode(std::span<const double> u);

// u_i = v_i / (1 - v_last). Throws NorthPoleError when 1 - v_last <=
// kPoleEpsilon and std::invalid_argument on non-finite input.
PlaneVector si_decode(std::span<const double> v);

enum class ScaleStatistic { kMean, kMax, kMedian };

ScaleStatistic parse_scale_statistic(const std::string& name);
std::string to_string(ScaleStatistic statistic);

// s = 1 / stat(|u_k|); the scaled dataset is {s * u_k}. Throws
// std::invalid_argument for an empty dataset or zero statistic.
double fit_scale(std::span<const PlaneVector> dataset,
                 ScaleStatistic statistic = ScaleStatistic::kMean);

// The sets C (scaled plane vectors), C_Q (their sphere images) and the
// scale factor shared by every element.
struct EncodedDataset {
  std::vector<PlaneVector> plane;
  std::vector<SphereVector> sphere;
  double scale = 1.0;
};

EncodedDataset encode_dataset(std::span<const PlaneVector> dataset,
                              ScaleStatistic statistic = ScaleStatistic::kMean);

}  // namespace rqgan

#endif  // RQGAN_ENCODING_H_
