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

// Acceptance suite. Each criterion prints one [PASS]/[FAIL] line; the
// process exit code is 0 only if every selected criterion passes.
//
//   acceptance_test                 run AC1..AC8
//   acceptance_test --criterion N   run only ACN

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <string>

#include "oracles.h"
#include "rqgan/adversarial.h"
#include "rqgan/circuits.h"
#include "rqgan/cmaes.h"
#include "rqgan/encoding.h"
#include "rqgan/linalg.h"
#include "rqgan/pipeline.h"

namespace {

namespace fs = std::filesystem;
using namespace rqgan;
using Clock = std::chrono::steady_clock;

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) passed = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::vector<double> random_angles(std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::vector<double> out(count);
  for (double& x : out) x = angle(rng);
  return out;
}

std::vector<double> random_unit(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> v(dim);
  double s = 0.0;
  for (double& x : v) {
    x = normal(rng);
    s += x * x;
  }
  for (double& x : v) x /= std::sqrt(s);
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome ac1_gate_counts() {
  const auto t0 = Clock::now();
  Outcome o;
  const int rows[3][5] = {{2, 3, 1, 9, 4}, {3, 7, 4, 18, 11}, {4, 15, 11, 35, 26}};
  for (const auto& r : rows) {
    const CircuitTemplate g = build_generator(r[0]);
    const CircuitTemplate d = build_discriminator(r[0]);
    const int got[4] = {static_cast<int>(g.count(GateKind::kRotationY)),
                        static_cast<int>(g.count(GateKind::kControlledNot)),
                        static_cast<int>(d.count(GateKind::kRotationY)),
                        static_cast<int>(d.count(GateKind::kControlledNot))};
    char buf[96];
    std::snprintf(buf, sizeof buf, "n=%d G(%d,%d) D(%d,%d)", r[0], got[0], got[1], got[2],
                  got[3]);
    o.require(got[0] == r[1] && got[1] == r[2] && got[2] == r[3] && got[3] == r[4], buf);
  }
  const double secs = seconds_since(t0);
  o.require(secs < 1.0, fmt("%.3f s", secs));
  return o;
}

Outcome ac2_closed_forms() {
  const auto t0 = Clock::now();
  Outcome o;
  std::mt19937_64 rng(2);
  double err2 = 0.0, err3 = 0.0, err4 = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto t2 = random_angles(3, rng);
    err2 = std::max(err2, oracle::max_abs_diff(oracle::two_qubit_printed(t2.data()),
                                               generator_state(2, t2).amplitudes()));
    const auto t3 = random_angles(7, rng);
    err3 = std::max(err3, oracle::max_abs_diff(oracle::three_qubit(t3.data()),
                                               generator_state(3, t3).amplitudes()));
  }
  const CircuitTemplate g4 = build_generator(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto t4 = random_angles(15, rng);
    err4 = std::max(err4,
                    oracle::max_abs_diff(oracle::run(g4, t4), generator_state(g4, t4).amplitudes()));
  }
  o.require(err2 < 1e-12, fmt("n=2 two-qubit closed form max err %.3e", err2));
  o.require(err3 < 1e-12, fmt("n=3 three-qubit closed form max err %.3e", err3));
  o.require(err4 < 1e-12, fmt("n=4 dense oracle max err %.3e", err4));
  const double secs = seconds_since(t0);
  o.require(secs < 10.0, fmt("%.2f s", secs));
  return o;
}

Outcome ac3_encoding() {
  Outcome o;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  double worst_rel = 0.0, worst_norm = 0.0;
  for (std::size_t dim : {3u, 7u, 15u}) {
    for (int trial = 0; trial < 10000; ++trial) {
      PlaneVector u(dim);
      const double r = std::exp(1.5 * normal(rng));
      for (double& x : u) x = r * normal(rng);
      const SphereVector v = si_encode(u);
      worst_norm = std::max(worst_norm, std::abs(norm(v) - 1.0));
      const PlaneVector back = si_decode(v);
      double diff = 0.0;
      for (std::size_t i = 0; i < dim; ++i) diff += (back[i] - u[i]) * (back[i] - u[i]);
      worst_rel = std::max(worst_rel, std::sqrt(diff) / norm(u));
    }
  }
  o.require(worst_rel < 1e-10, fmt("round trip max relative err %.3e", worst_rel));
  o.require(worst_norm < 1e-12, fmt("max | |v| - 1 | %.3e", worst_norm));
  return o;
}

Outcome ac4_state_preparation() {
  Outcome o;
  std::mt19937_64 rng(4);
  for (int n = 1; n <= 4; ++n) {
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const auto v = random_unit(std::size_t{1} << n, rng);
      const StatePreparation prep = state_to_params(StateVector::from_amplitudes(v));
      const StateVector out = generator_state(n, prep.params);
      double plus = 0.0, minus = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        plus = std::max(plus, std::abs(out[i] - v[i]));
        minus = std::max(minus, std::abs(out[i] + v[i]));
      }
      worst = std::max(worst, std::min(plus, minus));
    }
    o.require(worst < 1e-10, "n=" + std::to_string(n) + fmt(" max err %.3e", worst));
  }
  return o;
}

bool monotone(const MinimizeResult& r) {
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    if (r.history[i].best_ever > r.history[i - 1].best_ever) return false;
  }
  return true;
}

Outcome ac5_cmaes() {
  Outcome o;
  bool formula = true;
  for (int m = 1; m <= 100; ++m) {
    formula = formula && population_size(m) == 4 + static_cast<int>(std::floor(2 * std::log(m)));
  }
  o.require(formula, "P = 4 + floor(2 ln M) for M=1..100");

  auto sphere = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  };
  MinimizeOptions opts;
  opts.budget = 10000;
  opts.stagnation_tol = 0.0;
  const MinimizeResult r = minimize({sphere, {}}, std::vector<double>(10, 1.0), 0.5, 5, opts);
  o.require(r.best_cost < 1e-8, fmt("10-D sphere best %.3e", r.best_cost) + " in " +
                                    std::to_string(r.evaluations) + " evaluations");

  bool all_monotone = monotone(r);
  int runs = 1;
  auto rastrigin = [](std::span<const double> x) {
    double s = 10.0 * x.size();
    for (double v : x) s += v * v - 10.0 * std::cos(2 * kPi * v);
    return s;
  };
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    MinimizeOptions ro;
    ro.budget = 5000;
    all_monotone = all_monotone && monotone(minimize({rastrigin, {}}, {2.0, -1.0, 3.0}, 1.0, seed, ro));
    ++runs;
  }
  GameConfig game;
  game.epochs = 2;
  game.iters_per_epoch = 100;
  std::mt19937_64 rng(55);
  std::vector<SphereVector> real;
  for (int k = 0; k < 5; ++k) real.push_back(random_unit(4, rng));
  const GameState state = train(game, real);
  for (std::size_t i = 1; i < state.trace.size(); ++i) {
    const auto& p = state.trace[i - 1];
    const auto& q = state.trace[i];
    if (p.epoch == q.epoch && p.agent == q.agent && q.best > p.best) all_monotone = false;
  }
  o.require(all_monotone, "best-ever nonincreasing over " + std::to_string(runs) +
                              " optimizer runs and a training trace");
  return o;
}

Outcome ac6_sigma() {
  Outcome o;
  std::mt19937_64 rng(6);
  for (int n : {2, 3}) {
    const CircuitTemplate d = build_discriminator(n);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const auto s = random_unit(std::size_t{1} << n, rng);
      const auto theta = random_angles(d.num_params(), rng);
      worst = std::max(worst, std::abs(sigma(d, s, theta) - oracle::sigma(d, s, theta)));
    }
    o.require(worst < 1e-12, "n=" + std::to_string(n) + fmt(" max err %.3e", worst));
  }
  return o;
}

Outcome ac7_end_to_end() {
  Outcome o;
  const fs::path data = RQGAN_DATA_DIR;
  const fs::path root = fs::current_path() / "ac7_runs";
  fs::remove_all(root);
  RunConfig c;
  c.qubits = 2;
  c.digit = 8;
  c.subset_size = 20;
  c.epochs = 25;
  c.iters_per_epoch = 500;
  c.seed = 7;
  c.images_path = (data / "images-idx3-ubyte").string();
  c.labels_path = (data / "labels-idx1-ubyte").string();
  c.out_dir = (root / "first").string();

  const auto t0 = Clock::now();
  const TrainReport a = cmd_train(c);
  const double secs = seconds_since(t0);
  o.require(secs < 900.0, fmt("run time %.1f s", secs));

  const auto& ep = a.state.epochs;
  o.require(ep.size() == 25, std::to_string(ep.size()) + " epochs");
  if (ep.size() == 25) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "(a) L_G final %.3e < epoch 1 %.3e", ep.back().loss_g,
                  ep.front().loss_g);
    o.require(ep.back().loss_g < ep.front().loss_g, buf);
    std::snprintf(buf, sizeof buf, "(b) L_D final %.4f < 4", ep.back().loss_d);
    o.require(ep.back().loss_d < 4.0, buf);
  }

  int valid = 0;
  for (int k = 0; k < 20; ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "gen_%03d.pgm", k);
    const fs::path p = root / "first" / "images" / name;
    if (fs::is_regular_file(p) && fs::file_size(p) == 13 + 784 &&
        slurp(p).rfind("P5\n28 28\n255\n", 0) == 0) {
      ++valid;
    }
  }
  o.require(a.generated == 20 && valid == 20,
            "(c) " + std::to_string(valid) + " valid decoded images");

  RunConfig replay = load_config_file(root / "first" / "manifest.json");
  replay.out_dir = (root / "replay").string();
  cmd_train(replay);
  bool identical = true;
  for (const auto& entry : fs::recursive_directory_iterator(root / "first")) {
    if (!entry.is_regular_file() || entry.path().filename() == "manifest.json") continue;
    const fs::path rel = fs::relative(entry.path(), root / "first");
    if (slurp(entry.path()) != slurp(root / "replay" / rel)) {
      identical = false;
      o.require(false, "replay differs in " + rel.string());
    }
  }
  o.require(identical, "(d) replay byte-identical");

  const InspectReport report = cmd_inspect(root / "first");
  o.detail += "; first epoch with mean generated sigma > 0: " +
              (report.first_undetected_epoch ? std::to_string(*report.first_undetected_epoch)
                                             : std::string("none"));
  return o;
}

Outcome ac8_losses() {
  Outcome o;
  const std::vector<double> plus(6, 1.0), zero(6, 0.0), minus(6, -1.0);
  o.require(loss_discriminator(plus, minus) == 0.0, "L_D perfect = 0");
  o.require(loss_discriminator(zero, zero) == 1.0, "L_D zero = 1");
  o.require(loss_discriminator(minus, plus) == 4.0, "L_D confused = 4");
  o.require(loss_generator(plus) == 0.0, "L_G fooled = 0");
  o.require(loss_generator(zero) == 1.0, "L_G zero = 1");
  o.require(loss_generator(minus) == 4.0, "L_G caught = 4");
  return o;
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const Criterion all[] = {
      {"AC1", "gate counts match the reference table", ac1_gate_counts},
      {"AC2", "generator amplitudes match closed forms", ac2_closed_forms},
      {"AC3", "stereographic encoding is a bijection", ac3_encoding},
      {"AC4", "state preparation round trip", ac4_state_preparation},
      {"AC5", "CMA-ES sanity", ac5_cmaes},
      {"AC6", "discriminator sigma matches dense oracle", ac6_sigma},
      {"AC7", "end-to-end n=2 training run", ac7_end_to_end},
      {"AC8", "loss algebra fixtures", ac8_losses},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > 8) {
    std::fprintf(stderr, "criterion must be 1..8\n");
    return 2;
  }
  bool ok = true;
  for (int k = 0; k < 8; ++k) {
    if (only != 0 && only != k + 1) continue;
    Outcome o;
    try {
      o = all[k].run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("threw: ") + e.what();
    }
    std::printf("[%s] %s %s: %s\n", o.passed ? "PASS" : "FAIL", all[k].id, all[k].title,
                o.detail.c_str());
    std::fflush(stdout);
    ok = ok && o.passed;
  }
  return ok ? 0 : 1;
}
