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

#include "rqgan/cmaes.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rqgan {

int population_size(int dim, double log_base) {
  if (dim < 1) throw std::invalid_argument("population_size: dim must be >= 1");
  double log_m = std::log(static_cast<double>(dim));
  if (log_base > 0.0) log_m /= std::log(log_base);
  // Guard exact powers of the base against rounding just below the integer.
  return 4 + static_cast<int>(std::floor(2.0 * log_m + 1e-12));
}

double reflect_into(double x, double lo, double hi) {
  if (!std::isfinite(x)) return lo;
  const double width = hi - lo;
  double t = std::fmod(x - lo, 2.0 * width);
  if (t < 0.0) t += 2.0 * width;
  if (t > width) t = 2.0 * width - t;
  double out = lo + t;
  if (out >= hi) out = std::nextafter(hi, lo);
  if (out < lo) out = lo;
  return out;
}

Cmaes::Cmaes(std::vector<double> initial_mean, double initial_step,
             std::uint64_t seed, CmaesConfig config)
    : dim_(static_cast<int>(initial_mean.size())),
      config_(std::move(config)),
      mean_(std::move(initial_mean)),
      sigma_(initial_step),
      rng_(seed) {
  if (dim_ < 1) throw std::invalid_argument("Cmaes: empty initial mean");
  if (!(initial_step > 0.0) || !std::isfinite(initial_step)) {
    throw std::invalid_argument("Cmaes: initial step must be positive");
  }
  const Bounds& b = config_.bounds;
  if (b.bounded() && (b.lower.size() != mean_.size() || b.upper.size() != mean_.size())) {
    throw std::invalid_argument("Cmaes: bounds dimension mismatch");
  }

  const double m = dim_;
  lambda_ = rqgan::population_size(dim_, config_.log_base);
  mu_ = lambda_ / 2;
  weights_.resize(mu_);
  for (int i = 0; i < mu_; ++i) weights_[i] = std::log(mu_ + 0.5) - std::log(i + 1.0);
  const double wsum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  double w2 = 0.0;
  for (double& w : weights_) {
    w /= wsum;
    w2 += w * w;
  }
  mu_eff_ = 1.0 / w2;

  c_sigma_ = (mu_eff_ + 2.0) / (m + mu_eff_ + 5.0);
  d_sigma_ = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff_ - 1.0) / (m + 1.0)) - 1.0) +
             c_sigma_;
  c_c_ = (4.0 + mu_eff_ / m) / (m + 4.0 + 2.0 * mu_eff_ / m);
  c_1_ = 2.0 / ((m + 1.3) * (m + 1.3) + mu_eff_);
  c_mu_ = std::min(1.0 - c_1_,
                   2.0 * (mu_eff_ - 2.0 + 1.0 / mu_eff_) / ((m + 2.0) * (m + 2.0) + mu_eff_));
  chi_n_ = std::sqrt(m) * (1.0 - 1.0 / (4.0 * m) + 1.0 / (21.0 * m * m));

  cov_ = Matrix::identity(dim_);
  basis_ = Matrix::identity(dim_);
  scales_.assign(dim_, 1.0);
  path_sigma_.assign(dim_, 0.0);
  path_c_.assign(dim_, 0.0);
}

std::vector<std::vector<double>> Cmaes::ask() {
  std::vector<std::vector<double>> population(lambda_, std::vector<double>(dim_));
  std::vector<double> z(dim_);
  for (auto& x : population) {
    for (double& zi : z) zi = normal_(rng_);
    for (int i = 0; i < dim_; ++i) {
      double y = 0.0;
      for (int j = 0; j < dim_; ++j) y += basis_(i, j) * scales_[j] * z[j];
      x[i] = mean_[i] + sigma_ * y;
    }
    if (config_.bounds.bounded()) {
      for (int i = 0; i < dim_; ++i) {
        x[i] = reflect_into(x[i], config_.bounds.lower[i], config_.bounds.upper[i]);
      }
    }
  }
  return population;
}

void Cmaes::offer(std::span<const double> params, double cost) {
  if (std::isfinite(cost) && cost < best_cost_) {
    best_cost_ = cost;
    best_params_.assign(params.begin(), params.end());
  }
}

void Cmaes::tell(const std::vector<std::vector<double>>& population,
                 std::span<const double> costs) {
  if (static_cast<int>(population.size()) != lambda_ ||
      static_cast<int>(costs.size()) != lambda_) {
    throw std::invalid_argument("Cmaes::tell: expected " + std::to_string(lambda_) +
                                " samples and costs");
  }
  for (const auto& x : population) {
    if (static_cast<int>(x.size()) != dim_) {
      throw std::invalid_argument("Cmaes::tell: sample dimension mismatch");
    }
  }

  std::vector<int> order(lambda_);
  std::iota(order.begin(), order.end(), 0);
  auto rank_key = [&](int i) {
    return std::isfinite(costs[i]) ? costs[i] : std::numeric_limits<double>::infinity();
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return rank_key(a) < rank_key(b); });
  offer(population[order[0]], costs[order[0]]);

  const std::vector<double> old_mean = mean_;
  std::vector<std::vector<double>> steps(mu_, std::vector<double>(dim_));
  std::vector<double> y_w(dim_, 0.0);
  for (int k = 0; k < mu_; ++k) {
    const auto& x = population[order[k]];
    for (int i = 0; i < dim_; ++i) {
      steps[k][i] = (x[i] - old_mean[i]) / sigma_;
      y_w[i] += weights_[k] * steps[k][i];
    }
  }
  for (int i = 0; i < dim_; ++i) mean_[i] = old_mean[i] + sigma_ * y_w[i];

  // C^{-1/2} y_w = B diag(1/scales) B^T y_w.
  std::vector<double> bt_y(dim_, 0.0);
  for (int j = 0; j < dim_; ++j) {
    for (int i = 0; i < dim_; ++i) bt_y[j] += basis_(i, j) * y_w[i];
    bt_y[j] /= scales_[j];
  }
  std::vector<double> whitened(dim_, 0.0);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) whitened[i] += basis_(i, j) * bt_y[j];

  const double ps_coeff = std::sqrt(c_sigma_ * (2.0 - c_sigma_) * mu_eff_);
  for (int i = 0; i < dim_; ++i) {
    path_sigma_[i] = (1.0 - c_sigma_) * path_sigma_[i] + ps_coeff * whitened[i];
  }
  const double ps_norm = norm(path_sigma_);
  const double decay = 1.0 - std::pow(1.0 - c_sigma_, 2.0 * (generation_ + 1));
  const bool h_sigma =
      ps_norm / std::sqrt(decay) < (1.4 + 2.0 / (dim_ + 1.0)) * chi_n_;

  const double pc_coeff = std::sqrt(c_c_ * (2.0 - c_c_) * mu_eff_);
  for (int i = 0; i < dim_; ++i) {
    path_c_[i] = (1.0 - c_c_) * path_c_[i] + (h_sigma ? pc_coeff * y_w[i] : 0.0);
  }
  const double delta = h_sigma ? 0.0 : c_c_ * (2.0 - c_c_);

  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j <= i; ++j) {
      double rank_mu = 0.0;
      for (int k = 0; k < mu_; ++k) rank_mu += weights_[k] * steps[k][i] * steps[k][j];
      const double updated =
          (1.0 - c_1_ - c_mu_) * cov_(i, j) +
          c_1_ * (path_c_[i] * path_c_[j] + delta * cov_(i, j)) + c_mu_ * rank_mu;
      cov_(i, j) = updated;
      cov_(j, i) = updated;
    }
  }

  sigma_ *= std::exp((c_sigma_ / d_sigma_) * (ps_norm / chi_n_ - 1.0));
  ++generation_;
  decompose();
}

void Cmaes::decompose() {
  SymmetricEigen eig = jacobi_eigen(cov_);
  const double top = std::max(eig.values.front(), std::numeric_limits<double>::min());
  const double floor = top * config_.eigen_floor;
  bool floored = false;
  for (double& v : eig.values) {
    if (!(v > floor)) {
      v = floor;
      floored = true;
    }
  }
  basis_ = eig.vectors;
  for (int j = 0; j < dim_; ++j) scales_[j] = std::sqrt(eig.values[j]);
  if (floored) {
    for (int i = 0; i < dim_; ++i) {
      for (int j = 0; j <= i; ++j) {
        double acc = 0.0;
        for (int k = 0; k < dim_; ++k) acc += basis_(i, k) * eig.values[k] * basis_(j, k);
        cov_(i, j) = acc;
        cov_(j, i) = acc;
      }
    }
  }
}

std::pair<double, double> cost_moments(std::span<const double> costs) {
  double sum = 0.0;
  int count = 0;
  for (double c : costs) {
    if (std::isfinite(c)) {
      sum += c;
      ++count;
    }
  }
  if (count == 0) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
  const double mean = sum / count;
  double var = 0.0;
  for (double c : costs) {
    if (std::isfinite(c)) var += (c - mean) * (c - mean);
  }
  return {mean, var / count};
}

MinimizeResult minimize(const ObjectiveSpec& objective,
                        std::vector<double> initial_mean, double initial_step,
                        std::uint64_t seed, const MinimizeOptions& options) {
  Cmaes es(initial_mean, initial_step, seed,
           CmaesConfig{objective.bounds, options.log_base});
  if (options.budget < es.population_size()) {
    throw std::invalid_argument("minimize: budget smaller than the population");
  }
  MinimizeResult result;
  if (options.evaluate_initial_mean) {
    es.offer(initial_mean, objective.evaluate(initial_mean));
    ++result.evaluations;
  }
  std::vector<double> best_trace;
  std::vector<double> costs(es.population_size());
  while (result.evaluations + es.population_size() <= options.budget) {
    const auto population = es.ask();
    for (std::size_t i = 0; i < population.size(); ++i) {
      costs[i] = objective.evaluate(population[i]);
    }
    result.evaluations += es.population_size();
    es.tell(population, costs);

    GenerationRecord record;
    record.generation = es.generation();
    record.best_ever = es.best_cost();
    record.best_in_generation = *std::min_element(costs.begin(), costs.end());
    std::tie(record.mean_cost, record.cost_variance) = cost_moments(costs);
    record.step_size = es.step_size();
    result.history.push_back(record);
    if (options.on_generation) options.on_generation(record);

    best_trace.push_back(es.best_cost());
    const int w = options.stagnation_window;
    if (w > 0 && static_cast<int>(best_trace.size()) > w) {
      const double improvement = best_trace[best_trace.size() - 1 - w] - best_trace.back();
      if (improvement < options.stagnation_tol) break;
    }
  }
  if (es.best_params().empty()) {
    result.best_params.assign(es.mean().begin(), es.mean().end());
  } else {
    result.best_params.assign(es.best_params().begin(), es.best_params().end());
  }
  result.best_cost = es.best_cost();
  return result;
}

}  // namespace rqgan
