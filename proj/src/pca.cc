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

#include "rqgan/pca.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace rqgan {
namespace {

constexpr std::array<char, 8> kMagic = {'R', 'Q', 'P', 'C', 'A', '\x01', '\0', '\0'};

// Modified Gram-Schmidt over the rows of `basis`; rows that collapse are
// replaced by the first standard basis vector independent of the others.
void orthonormalize_rows(Matrix& basis) {
  const std::size_t dim = basis.cols();
  std::size_t next_unit = 0;
  for (std::size_t r = 0; r < basis.rows(); ++r) {
    auto row = basis.row(r);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < r; ++p) {
        const double proj = dot(row, basis.row(p));
        for (std::size_t j = 0; j < dim; ++j) row[j] -= proj * basis(p, j);
      }
    }
    double nrm = norm(row);
    while (nrm < 1e-8 && next_unit < dim) {
      std::fill(row.begin(), row.end(), 0.0);
      row[next_unit++] = 1.0;
      for (std::size_t p = 0; p < r; ++p) {
        const double proj = dot(row, basis.row(p));
        for (std::size_t j = 0; j < dim; ++j) row[j] -= proj * basis(p, j);
      }
      nrm = norm(row);
    }
    for (double& x : row) x /= nrm;
  }
}

void write_u64(std::ostream& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

void write_f64(std::ostream& out, double v) {
  write_u64(out, std::bit_cast<std::uint64_t>(v));
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
    throw std::runtime_error("load_pca: truncated file");
  }
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

double read_f64(std::istream& in) { return std::bit_cast<double>(read_u64(in)); }

}  // namespace

PcaModel pca_fit(const Matrix& data, int n_components) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  if (n < 2 || d < 1 || n_components < 1 ||
      static_cast<std::size_t>(n_components) > std::min(n - 1, d)) {
    throw std::invalid_argument(
        "pca_fit: n_components must be in 1..min(N-1, D), got " +
        std::to_string(n_components));
  }
  const std::size_t k = static_cast<std::size_t>(n_components);

  PcaModel model;
  model.mean.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) model.mean[j] += data(i, j);
  for (double& m : model.mean) m /= static_cast<double>(n);

  Matrix centered(n, d);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      centered(i, j) = data(i, j) - model.mean[j];
      total += centered(i, j) * centered(i, j);
    }
  }
  const double dof = static_cast<double>(n - 1);
  total /= dof;
  if (!(total > 0.0)) {
    throw std::invalid_argument("pca_fit: data has zero total variance");
  }
  model.total_variance = total;

  model.components = Matrix(k, d);
  model.explained_variance.assign(k, 0.0);
  if (n < d) {
    Matrix gram = centered * centered.transpose();
    for (double& x : gram.data()) x /= dof;
    const SymmetricEigen eig = jacobi_eigen(gram);
    for (std::size_t c = 0; c < k; ++c) {
      const double lambda = std::max(eig.values[c], 0.0);
      model.explained_variance[c] = lambda;
      if (lambda <= 1e-14 * total) continue;  // completed below
      const double inv = 1.0 / std::sqrt(dof * lambda);
      for (std::size_t i = 0; i < n; ++i) {
        const double ui = eig.vectors(i, c) * inv;
        for (std::size_t j = 0; j < d; ++j) model.components(c, j) += ui * centered(i, j);
      }
    }
  } else {
    Matrix cov = centered.transpose() * centered;
    for (double& x : cov.data()) x /= dof;
    const SymmetricEigen eig = jacobi_eigen(cov);
    for (std::size_t c = 0; c < k; ++c) {
      model.explained_variance[c] = std::max(eig.values[c], 0.0);
      for (std::size_t j = 0; j < d; ++j) model.components(c, j) = eig.vectors(j, c);
    }
  }
  orthonormalize_rows(model.components);

  for (std::size_t c = 0; c < k; ++c) {
    auto row = model.components.row(c);
    const auto big = std::max_element(row.begin(), row.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    });
    if (*big < 0.0) {
      for (double& x : row) x = -x;
    }
  }

  double kept = 0.0;
  for (double v : model.explained_variance) kept += v;
  model.cev = std::clamp(kept / total, 0.0, 1.0);
  return model;
}

std::vector<double> pca_transform(const PcaModel& model,
                                  std::span<const double> sample) {
  if (sample.size() != model.input_dim()) {
    throw std::invalid_argument("pca_transform: sample has " +
                                std::to_string(sample.size()) + " entries, model expects " +
                                std::to_string(model.input_dim()));
  }
  std::vector<double> centered(sample.begin(), sample.end());
  for (std::size_t j = 0; j < centered.size(); ++j) centered[j] -= model.mean[j];
  return model.components * std::span<const double>(centered);
}

std::vector<double> pca_inverse_transform(const PcaModel& model,
                                          std::span<const double> coeffs) {
  if (coeffs.size() != model.num_components()) {
    throw std::invalid_argument("pca_inverse_transform: expected " +
                                std::to_string(model.num_components()) + " coefficients");
  }
  std::vector<double> out = model.mean;
  for (std::size_t c = 0; c < coeffs.size(); ++c) {
    const auto row = model.components.row(c);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += coeffs[c] * row[j];
  }
  return out;
}

void save_pca(const PcaModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_pca: cannot open " + path.string());
  out.write(kMagic.data(), kMagic.size());
  write_u64(out, model.input_dim());
  write_u64(out, model.num_components());
  write_f64(out, model.total_variance);
  write_f64(out, model.cev);
  for (double x : model.mean) write_f64(out, x);
  for (double x : model.explained_variance) write_f64(out, x);
  for (double x : model.components.data()) write_f64(out, x);
  if (!out) throw std::runtime_error("save_pca: write failed for " + path.string());
}

PcaModel load_pca(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_pca: cannot open " + path.string());
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error("load_pca: bad magic in " + path.string());
  }
  const std::uint64_t d = read_u64(in);
  const std::uint64_t k = read_u64(in);
  if (d == 0 || k == 0 || k > d || d > (1u << 24)) {
    throw std::runtime_error("load_pca: implausible dimensions");
  }
  PcaModel model;
  model.total_variance = read_f64(in);
  model.cev = read_f64(in);
  model.mean.resize(d);
  for (double& x : model.mean) x = read_f64(in);
  model.explained_variance.resize(k);
  for (double& x : model.explained_variance) x = read_f64(in);
  model.components = Matrix(k, d);
  for (double& x : model.components.data()) x = read_f64(in);
  return model;
}

}  // namespace rqgan
