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

// (mu/mu_w, lambda) CMA-ES with rank-one and rank-mu covariance updates and
// cumulative step-size adaptation.

#ifndef RQGAN_CMAES_H_
#define RQGAN_CMAES_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "rqgan/linalg.h"

namespace rqgan {

// P = 4 + floor(2 log_b M). `log_base` <= 0 selects the natural log.
int population_size(int dim, double log_base = 0.0);

// Box constraints applied by reflection. Empty vectors mean unbounded.
struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  static Bounds uniform(int dim, double lo, double hi) {
    return {std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
  }
  static Bounds angles(int dim) {
    return uniform(dim, -std::numbers::pi, std::numbers::pi);
  }
  bool bounded() const { return !lower.empty(); }
};

// Maps x into [lo, hi) by mirroring at the interval ends.
double reflect_into(double x, double lo, double hi);

struct CmaesConfig {
  Bounds bounds;
  double log_base = 0.0;
  // Relative floor on covariance eigenvalues.
  double eigen_floor = 1e-14;
};

class Cmaes {
 public:
  // Throws std::invalid_argument for an empty mean, a nonpositive step or
  // bounds of the wrong size.
  Cmaes(std::vector<double> initial_mean, double initial_step, std::uint64_t seed,
        CmaesConfig config = {});

  // P samples from N(mean, step^2 C), reflected into bounds.
  std::vector<std::vector<double>> ask();

  // Ranks `population` by `costs` (non-finite costs rank last) and updates
  // mean, evolution paths, covariance and step size. Throws
  // std::invalid_argument unless both have P entries of the right size.
  void tell(const std::vector<std::vector<double>>& population,
            std::span<const double> costs);

  // Records an externally evaluated point as a best-ever candidate.
  void offer(std::span<const double> params, double cost);

  int dim() const { return dim_; }
  int population_size() const { return lambda_; }
  int parents() const { return mu_; }
  std::span<const double> weights() const { return weights_; }
  int generation() const { return generation_; }
  std::span<const double> mean() const { return mean_; }
  double step_size() const { return sigma_; }
  const Matrix& covariance() const { return cov_; }
  std::span<const double> path_sigma() const { return path_sigma_; }
  std::span<const double> path_c() const { return path_c_; }
  std::span<const double> best_params() const { return best_params_; }
  double best_cost() const { return best_cost_; }

 private:
  void decompose();

  int dim_;
  int lambda_;
  int mu_;
  std::vector<double> weights_;
  double mu_eff_;
  double c_sigma_, d_sigma_, c_c_, c_1_, c_mu_, chi_n_;
  CmaesConfig config_;

  std::vector<double> mean_;
  double sigma_;
  Matrix cov_;
  Matrix basis_;               // eigenvectors of cov_ (columns)
  std::vector<double> scales_;  // sqrt of eigenvalues
  std::vector<double> path_sigma_;
  std::vector<double> path_c_;
  int generation_ = 0;

  std::vector<double> best_params_;
  double best_cost_ = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

struct ObjectiveSpec {
  std::function<double(std::span<const double>)> evaluate;
  Bounds bounds;
};

struct GenerationRecord {
  int generation = 0;
  double best_ever = 0.0;
  double best_in_generation = 0.0;
  double mean_cost = 0.0;
  // Population variance of the generation's costs.
  double cost_variance = 0.0;
  double step_size = 0.0;
};

// Mean and population variance of `costs`, ignoring non-finite entries.
std::pair<double, double> cost_moments(std::span<const double> costs);

struct MinimizeOptions {
  // Maximum objective evaluations; must be >= P.
  long budget = 10000;
  // Stop once best-ever improved by less than this over `window` generations.
  double stagnation_tol = 1e-12;
  int stagnation_window = 100;
  // Evaluate the initial mean first and seed best-ever with it.
  bool evaluate_initial_mean = false;
  double log_base = 0.0;
  std::function<void(const GenerationRecord&)> on_generation;
};

struct MinimizeResult {
  std::vector<double> best_params;
  double best_cost = 0.0;
  long evaluations = 0;
  std::vector<GenerationRecord> history;
};

MinimizeResult minimize(const ObjectiveSpec& objective,
                        std::vector<double> initial_mean, double initial_step,
                        std::uint64_t seed, const MinimizeOptions& options = {});

}  // namespace rqgan

#endif  // RQGAN_CMAES_H_
