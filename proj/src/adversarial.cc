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

#include "rqgan/adversarial.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "rqgan/circuits.h"
#include "rqgan/cmaes.h"

namespace rqgan {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream per (epoch, agent, sample).
std::uint64_t derive_seed(std::uint64_t base, int epoch, char agent, int sample) {
  std::uint64_t s = splitmix64(base);
  s = splitmix64(s ^ static_cast<std::uint64_t>(epoch));
  s = splitmix64(s ^ static_cast<std::uint64_t>(agent));
  return splitmix64(s ^ static_cast<std::uint64_t>(sample));
}

double uniform_angle(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double x = -std::numbers::pi + u * 2.0 * std::numbers::pi;
  return x < std::numbers::pi ? x : -std::numbers::pi;
}

ParamVector random_angles(std::mt19937_64& rng, int dim) {
  ParamVector out(dim);
  for (double& x : out) x = uniform_angle(rng);
  return out;
}

int generator_dim(int n) { return (1 << n) - 1; }
int discriminator_dim(int n) { return (1 << (n + 1)) + n - 1; }

int qubits_for(std::size_t amplitudes) {
  if (amplitudes < 2 || (amplitudes & (amplitudes - 1)) != 0) {
    throw std::invalid_argument("sigma: input length must be a power of two >= 2");
  }
  int n = 0;
  while ((std::size_t{1} << n) < amplitudes) ++n;
  return n;
}

// Shared state for one training run.
class Game {
 public:
  Game(const GameConfig& config, std::vector<SphereVector> real)
      : config_(config),
        generator_(build_generator(config.n)),
        discriminator_(build_discriminator(config.n)),
        real_(std::move(real)) {}

  double sigma_of(std::span<const double> amps, std::span<const double> theta_d) const {
    return sigma(discriminator_, amps, theta_d);
  }

  std::vector<double> fake_state(std::span<const double> theta_g) const {
    const StateVector s = generator_state(generator_, theta_g);
    return {s.amplitudes().begin(), s.amplitudes().end()};
  }

  double loss_d(std::span<const double> theta_d,
                const std::vector<std::vector<double>>& fakes) const {
    std::vector<double> sr(real_.size());
    std::vector<double> sf(fakes.size());
    for (std::size_t l = 0; l < real_.size(); ++l) sr[l] = sigma_of(real_[l], theta_d);
    for (std::size_t l = 0; l < fakes.size(); ++l) sf[l] = sigma_of(fakes[l], theta_d);
    return loss_discriminator(sr, sf);
  }

  double sample_loss_g(std::span<const double> theta_g,
                       std::span<const double> theta_d) const {
    const double s = sigma_of(fake_state(theta_g), theta_d);
    return (1.0 - s) * (1.0 - s);
  }

  const GameConfig& config() const { return config_; }
  const std::vector<SphereVector>& real() const { return real_; }
  std::vector<SphereVector> take_real() { return std::move(real_); }

 private:
  GameConfig config_;
  CircuitTemplate generator_;
  CircuitTemplate discriminator_;
  std::vector<SphereVector> real_;
};

bool stagnated(const std::vector<double>& best_trace, const GameConfig& config) {
  const int w = config.stagnation_window;
  if (w <= 0 || static_cast<int>(best_trace.size()) <= w) return false;
  return best_trace[best_trace.size() - 1 - w] - best_trace.back() <
         config.stagnation_tol;
}

void train_discriminator(const Game& game, GameState& state, int epoch,
                         std::mt19937_64& init_rng, const TrainCallbacks& cb,
                         EpochSummary& summary) {
  const GameConfig& config = game.config();
  std::vector<std::vector<double>> fakes;
  for (const auto& theta : state.theta_g) fakes.push_back(game.fake_state(theta));

  const int dim = discriminator_dim(config.n);
  ParamVector start = config.warm_start || epoch == 1 ? state.theta_d
                                                      : random_angles(init_rng, dim);
  ObjectiveSpec objective{
      [&](std::span<const double> theta) { return game.loss_d(theta, fakes); },
      Bounds::angles(dim)};
  MinimizeOptions options;
  options.budget = static_cast<long>(config.iters_per_epoch) * population_size(dim, config.log_base);
  options.stagnation_tol = config.stagnation_tol;
  options.stagnation_window = config.stagnation_window;
  options.evaluate_initial_mean = config.warm_start;
  if (options.evaluate_initial_mean) ++options.budget;
  options.log_base = config.log_base;
  options.on_generation = [&](const GenerationRecord& r) {
    TraceRecord t{epoch, 'D', r.generation, r.best_ever, r.mean_cost, r.cost_variance};
    state.trace.push_back(t);
    if (cb.on_generation) cb.on_generation(t);
  };
  const MinimizeResult result = minimize(objective, start, config.step_size,
                                         derive_seed(config.seed, epoch, 'D', 0), options);
  state.theta_d = result.best_params;
  summary.loss_d = result.best_cost;
  summary.generations_d = static_cast<int>(result.history.size());
  summary.variance_d = result.history.empty() ? 0.0 : result.history.back().cost_variance;
}

void train_generator_per_sample(const Game& game, GameState& state, int epoch,
                                std::mt19937_64& init_rng, const TrainCallbacks& cb,
                                EpochSummary& summary) {
  const GameConfig& config = game.config();
  const int dim = generator_dim(config.n);
  const std::size_t count = state.theta_g.size();

  std::vector<Cmaes> runs;
  runs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    ParamVector start = config.warm_start || epoch == 1 ? state.theta_g[k]
                                                        : random_angles(init_rng, dim);
    runs.emplace_back(start, config.step_size,
                      derive_seed(config.seed, epoch, 'G', static_cast<int>(k)),
                      CmaesConfig{Bounds::angles(dim), config.log_base});
    if (config.warm_start) {
      runs.back().offer(start, game.sample_loss_g(start, state.theta_d));
    }
  }
  const int pop = runs.front().population_size();
  std::vector<std::vector<double>> best_traces(count);
  std::vector<bool> stopped(count, false);
  std::vector<double> costs(pop);
  std::vector<double> joint(pop);

  int generation = 0;
  double last_variance = 0.0;
  for (int it = 0; it < config.iters_per_epoch; ++it) {
    if (std::all_of(stopped.begin(), stopped.end(), [](bool s) { return s; })) break;
    std::fill(joint.begin(), joint.end(), 0.0);
    for (std::size_t k = 0; k < count; ++k) {
      Cmaes& es = runs[k];
      if (stopped[k]) {
        for (double& j : joint) j += es.best_cost();
        continue;
      }
      const auto population = es.ask();
      for (int i = 0; i < pop; ++i) {
        costs[i] = game.sample_loss_g(population[i], state.theta_d);
        joint[i] += costs[i];
      }
      es.tell(population, costs);
      best_traces[k].push_back(es.best_cost());
      stopped[k] = stagnated(best_traces[k], config);
    }
    for (double& j : joint) j /= static_cast<double>(count);
    ++generation;
    double best = 0.0;
    for (const Cmaes& es : runs) best += es.best_cost();
    best /= static_cast<double>(count);
    const auto [mean, variance] = cost_moments(joint);
    last_variance = variance;
    TraceRecord t{epoch, 'G', generation, best, mean, variance};
    state.trace.push_back(t);
    if (cb.on_generation) cb.on_generation(t);
  }
  for (std::size_t k = 0; k < count; ++k) {
    const auto best = runs[k].best_params();
    if (!best.empty()) state.theta_g[k].assign(best.begin(), best.end());
  }
  summary.generations_g = generation;
  summary.variance_g = last_variance;
}

void train_generator_joint(const Game& game, GameState& state, int epoch,
                           std::mt19937_64& init_rng, const TrainCallbacks& cb,
                           EpochSummary& summary) {
  const GameConfig& config = game.config();
  const int block = generator_dim(config.n);
  const std::size_t count = state.theta_g.size();
  const int dim = block * static_cast<int>(count);

  ParamVector start;
  for (const auto& theta : state.theta_g) {
    const ParamVector init =
        config.warm_start || epoch == 1 ? theta : random_angles(init_rng, block);
    start.insert(start.end(), init.begin(), init.end());
  }
  ObjectiveSpec objective{[&](std::span<const double> theta) {
                            double acc = 0.0;
                            for (std::size_t k = 0; k < count; ++k) {
                              acc += game.sample_loss_g(theta.subspan(k * block, block),
                                                        state.theta_d);
                            }
                            return acc / static_cast<double>(count);
                          },
                          Bounds::angles(dim)};
  MinimizeOptions options;
  options.budget = static_cast<long>(config.iters_per_epoch) * population_size(dim, config.log_base);
  options.stagnation_tol = config.stagnation_tol;
  options.stagnation_window = config.stagnation_window;
  options.evaluate_initial_mean = config.warm_start;
  if (options.evaluate_initial_mean) ++options.budget;
  options.log_base = config.log_base;
  options.on_generation = [&](const GenerationRecord& r) {
    TraceRecord t{epoch, 'G', r.generation, r.best_ever, r.mean_cost, r.cost_variance};
    state.trace.push_back(t);
    if (cb.on_generation) cb.on_generation(t);
  };
  const MinimizeResult result = minimize(objective, start, config.step_size,
                                         derive_seed(config.seed, epoch, 'G', 0), options);
  for (std::size_t k = 0; k < count; ++k) {
    state.theta_g[k].assign(result.best_params.begin() + k * block,
                            result.best_params.begin() + (k + 1) * block);
  }
  summary.generations_g = static_cast<int>(result.history.size());
  summary.variance_g = result.history.empty() ? 0.0 : result.history.back().cost_variance;
}

}  // namespace

double sigma(const CircuitTemplate& discriminator, std::span<const double> input,
             std::span<const double> theta_d) {
  const int n = discriminator.num_qubits() - 1;
  if (input.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("sigma: input has " + std::to_string(input.size()) +
                                " amplitudes, discriminator expects " +
                                std::to_string(std::size_t{1} << n));
  }
  std::vector<double> amps(std::size_t{2} << n, 0.0);
  for (std::size_t i = 0; i < input.size(); ++i) amps[2 * i] = input[i];
  const StateVector prepared = StateVector::from_amplitudes(std::move(amps), 1e-10);
  return run_circuit(discriminator, theta_d, prepared).expect_z(n);
}

double sigma(std::span<const double> input, std::span<const double> theta_d) {
  return sigma(build_discriminator(qubits_for(input.size())), input, theta_d);
}

double sigma_generated(std::span<const double> theta_g,
                       std::span<const double> theta_d) {
  const int n = qubits_for(theta_g.size() + 1);
  const StateVector s = generator_state(n, theta_g);
  return sigma(build_discriminator(n), s.amplitudes(), theta_d);
}

double loss_discriminator(std::span<const double> sigma_real,
                          std::span<const double> sigma_fake) {
  if (sigma_real.size() != sigma_fake.size() || sigma_real.empty()) {
    throw std::invalid_argument("loss_discriminator: need N real and N fake values");
  }
  double acc = 0.0;
  for (std::size_t l = 0; l < sigma_real.size(); ++l) {
    acc += (1.0 - sigma_real[l]) * (1.0 - sigma_real[l]) +
           (1.0 + sigma_fake[l]) * (1.0 + sigma_fake[l]);
  }
  return acc / (2.0 * static_cast<double>(sigma_real.size()));
}

double loss_generator(std::span<const double> sigma_fake) {
  if (sigma_fake.empty()) throw std::invalid_argument("loss_generator: empty set");
  double acc = 0.0;
  for (double s : sigma_fake) acc += (1.0 - s) * (1.0 - s);
  return acc / static_cast<double>(sigma_fake.size());
}

double loss_discriminator(std::span<const double> theta_d,
                          std::span<const ParamVector> theta_g_set,
                          std::span<const SphereVector> real) {
  if (theta_g_set.size() != real.size()) {
    throw std::invalid_argument("loss_discriminator: set sizes differ");
  }
  if (real.empty()) throw std::invalid_argument("loss_discriminator: empty set");
  const int n = qubits_for(real.front().size());
  const CircuitTemplate disc = build_discriminator(n);
  const CircuitTemplate gen = build_generator(n);
  std::vector<double> sr;
  std::vector<double> sf;
  for (std::size_t l = 0; l < real.size(); ++l) {
    sr.push_back(sigma(disc, real[l], theta_d));
    sf.push_back(sigma(disc, generator_state(gen, theta_g_set[l]).amplitudes(), theta_d));
  }
  return loss_discriminator(sr, sf);
}

double loss_generator(std::span<const ParamVector> theta_g_set,
                      std::span<const double> theta_d) {
  if (theta_g_set.empty()) throw std::invalid_argument("loss_generator: empty set");
  const int n = qubits_for(theta_g_set.front().size() + 1);
  const CircuitTemplate disc = build_discriminator(n);
  const CircuitTemplate gen = build_generator(n);
  std::vector<double> sf;
  for (const auto& theta : theta_g_set) {
    sf.push_back(sigma(disc, generator_state(gen, theta).amplitudes(), theta_d));
  }
  return loss_generator(sf);
}

GeneratorMode parse_generator_mode(const std::string& name) {
  if (name == "per-sample") return GeneratorMode::kPerSample;
  if (name == "joint") return GeneratorMode::kJoint;
  throw std::invalid_argument("unknown generator mode '" + name + "'");
}

std::string to_string(GeneratorMode mode) {
  return mode == GeneratorMode::kJoint ? "joint" : "per-sample";
}

void GameConfig::validate() const {
  if (n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
  if (iters_per_epoch < 1) throw std::invalid_argument("config: iters_per_epoch must be >= 1");
  if (!(step_size > 0.0)) throw std::invalid_argument("config: step_size must be > 0");
}

GameState train(const GameConfig& config, std::vector<SphereVector> real,
                const TrainCallbacks& callbacks) {
  config.validate();
  if (real.empty()) throw std::invalid_argument("train: empty training set");
  for (const auto& v : real) {
    if (v.size() != (std::size_t{1} << config.n)) {
      throw std::invalid_argument("train: training state dimension differs from 2^n");
    }
  }

  std::mt19937_64 init_rng(splitmix64(config.seed));
  GameState state;
  state.theta_d = random_angles(init_rng, discriminator_dim(config.n));
  for (std::size_t k = 0; k < real.size(); ++k) {
    state.theta_g.push_back(random_angles(init_rng, generator_dim(config.n)));
  }
  Game game(config, std::move(real));

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    EpochSummary summary;
    summary.epoch = epoch;
    train_discriminator(game, state, epoch, init_rng, callbacks, summary);
    if (config.generator_mode == GeneratorMode::kJoint) {
      train_generator_joint(game, state, epoch, init_rng, callbacks, summary);
    } else {
      train_generator_per_sample(game, state, epoch, init_rng, callbacks, summary);
    }

    std::vector<double> sr;
    std::vector<double> sf;
    for (const auto& v : game.real()) sr.push_back(game.sigma_of(v, state.theta_d));
    for (const auto& theta : state.theta_g) {
      sf.push_back(game.sigma_of(game.fake_state(theta), state.theta_d));
    }
    summary.loss_g = loss_generator(sf);
    for (double s : sr) summary.mean_sigma_real += s / static_cast<double>(sr.size());
    for (double s : sf) summary.mean_sigma_fake += s / static_cast<double>(sf.size());
    state.epochs.push_back(summary);
    if (callbacks.on_epoch) callbacks.on_epoch(summary);
  }
  state.real = game.take_real();
  return state;
}

GeneratedImages generate(std::span<const ParamVector> theta_g, const PcaModel& pca,
                         double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("generate: scale must be > 0");
  GeneratedImages out;
  if (theta_g.empty()) return out;
  const int n = qubits_for(theta_g.front().size() + 1);
  if (pca.num_components() != theta_g.front().size()) {
    throw std::invalid_argument("generate: PCA has " + std::to_string(pca.num_components()) +
                                " components, generator decodes " +
                                std::to_string(theta_g.front().size()));
  }
  const CircuitTemplate gen = build_generator(n);
  for (std::size_t k = 0; k < theta_g.size(); ++k) {
    const StateVector state = generator_state(gen, theta_g[k]);
    PlaneVector u;
    try {
      u = si_decode(state.amplitudes());
    } catch (const NorthPoleError& e) {
      out.skipped.push_back("sample " + std::to_string(k) + ": " + e.what());
      continue;
    }
    for (double& x : u) x /= scale;
    std::vector<double> pixels = pca_inverse_transform(pca, u);
    for (double& p : pixels) p = std::clamp(p, 0.0, 1.0);
    out.pixels.push_back(std::move(pixels));
    out.sample_index.push_back(static_cast<int>(k));
  }
  return out;
}

}  // namespace rqgan
