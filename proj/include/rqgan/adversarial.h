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

// The adversarial game between the generator G^n and the discriminator D^n.
//
// sigma(s, theta_D) = <Z_ancilla> after D(theta_D) acts on |s> (x) |0>. The
// discriminator minimizes
//   L_D = 1/(2N) sum_l [(1 - sigma(u_l))^2 + (1 + sigma(psi_G(theta_l)))^2]
// and the generator minimizes
//   L_G = 1/N sum_l (1 - sigma(psi_G(theta_l)))^2.

#ifndef RQGAN_ADVERSARIAL_H_
#define RQGAN_ADVERSARIAL_H_

#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "rqgan/encoding.h"
#include "rqgan/pca.h"
#include "rqgan/simulator.h"

namespace rqgan {

// Ancilla-Z expectation for an n-qubit real input (2^n amplitudes).
double sigma(const CircuitTemplate& discriminator, std::span<const double> input,
             std::span<const double> theta_d);
// Convenience overloads that build D^n (and G^n) on each call.
double sigma(std::span<const double> input, std::span<const double> theta_d);
double sigma_generated(std::span<const double> theta_g,
                       std::span<const double> theta_d);

// Losses from precomputed sigma values.
double loss_discriminator(std::span<const double> sigma_real,
                          std::span<const double> sigma_fake);
double loss_generator(std::span<const double> sigma_fake);

// Losses from parameters. Sizes of theta_g_set and real must match.
double loss_discriminator(std::span<const double> theta_d,
                          std::span<const ParamVector> theta_g_set,
                          std::span<const SphereVector> real);
double loss_generator(std::span<const ParamVector> theta_g_set,
                      std::span<const double> theta_d);

enum class GeneratorMode { kPerSample, kJoint };

GeneratorMode parse_generator_mode(const std::string& name);
std::string to_string(GeneratorMode mode);

struct GameConfig {
  int n = 2;
  int epochs = 25;
  // CMA-ES generations per agent per epoch.
  int iters_per_epoch = 500;
  std::uint64_t seed = 7;
  double step_size = 0.3 * std::numbers::pi;
  double log_base = 0.0;
  bool warm_start = true;
  GeneratorMode generator_mode = GeneratorMode::kPerSample;
  double stagnation_tol = 1e-12;
  int stagnation_window = 100;

  // Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

// One optimizer generation.
struct TraceRecord {
  int epoch = 0;
  char agent = 'D';  // 'D' or 'G'
  int generation = 0;
  double best = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

struct EpochSummary {
  int epoch = 0;
  double loss_d = 0.0;  // best L_D reached in the discriminator phase
  double loss_g = 0.0;  // L_G after the generator phase
  double variance_d = 0.0;  // cost variance of the last D generation
  double variance_g = 0.0;
  int generations_d = 0;
  int generations_g = 0;
  double mean_sigma_real = 0.0;
  double mean_sigma_fake = 0.0;
};

struct GameState {
  ParamVector theta_d;
  std::vector<ParamVector> theta_g;
  std::vector<SphereVector> real;
  std::vector<TraceRecord> trace;
  std::vector<EpochSummary> epochs;
};

struct TrainCallbacks {
  std::function<void(const TraceRecord&)> on_generation;
  std::function<void(const EpochSummary&)> on_epoch;
};

// Alternating minimization: each epoch first trains theta_d against the
// frozen generator states, then each theta_g against the new theta_d.
GameState train(const GameConfig& config, std::vector<SphereVector> real,
                const TrainCallbacks& callbacks = {});

struct GeneratedImages {
  std::vector<std::vector<double>> pixels;  // [0, 1] intensities
  std::vector<int> sample_index;            // theta_g index per image
  std::vector<std::string> skipped;         // one message per dropped sample
};

// theta_g -> amplitudes -> si_decode -> unscale -> PCA inverse -> clip.
// Samples at the north pole are skipped and reported.
GeneratedImages generate(std::span<const ParamVector> theta_g,
                         const PcaModel& pca, double scale);

}  // namespace rqgan

#endif  // RQGAN_ADVERSARIAL_H_
