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

// rqgan: train, generate, inspect and selftest.
//
// Exit codes: 0 ok, 1 runtime failure, 2 usage or config error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rqgan/dataio.h"
#include "rqgan/pipeline.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Flag values that were given explicitly; unset ones leave the config file
// (or default) value alone.
struct TrainFlags {
  std::string config_path;
  std::optional<int> qubits, digit, subset_size, epochs, iters, stagnation_window;
  std::optional<unsigned long long> seed;
  std::optional<std::string> scale_statistic, log_base, generator_mode, images, labels, out;
  std::optional<double> step_size, stagnation_tol;
  bool no_warm_start = false;
  bool quiet = false;
};

rqgan::RunConfig resolve(const TrainFlags& f) {
  rqgan::RunConfig c;
  if (!f.config_path.empty()) c = rqgan::load_config_file(f.config_path, c);
  if (f.qubits) c.qubits = *f.qubits;
  if (f.digit) c.digit = *f.digit;
  if (f.subset_size) c.subset_size = *f.subset_size;
  if (f.epochs) c.epochs = *f.epochs;
  if (f.iters) c.iters_per_epoch = *f.iters;
  if (f.seed) c.seed = *f.seed;
  if (f.scale_statistic) c.scale_statistic = *f.scale_statistic;
  if (f.log_base) c.log_base = *f.log_base;
  if (f.generator_mode) c.generator_mode = *f.generator_mode;
  if (f.images) c.images_path = *f.images;
  if (f.labels) c.labels_path = *f.labels;
  if (f.out) c.out_dir = *f.out;
  if (f.step_size) c.step_size = *f.step_size;
  if (f.stagnation_tol) c.stagnation_tol = *f.stagnation_tol;
  if (f.stagnation_window) c.stagnation_window = *f.stagnation_window;
  if (f.no_warm_start) c.warm_start = false;
  c.apply_data_dir_default();
  return c;
}

int run_train(const TrainFlags& flags) {
  const rqgan::RunConfig config = resolve(flags);
  const rqgan::TrainReport report =
      rqgan::cmd_train(config, flags.quiet ? nullptr : &std::cerr);
  std::cout << "run directory: " << report.run_dir.string() << "\n"
            << "cev: " << report.cev << "  scale: " << report.scale << "\n"
            << "generated images: " << report.generated << "\n";
  for (const auto& msg : report.skipped) std::cout << "skipped: " << msg << "\n";
  return kExitOk;
}

int run_generate(const std::string& run_dir, const std::string& out) {
  std::optional<std::filesystem::path> target;
  if (!out.empty()) target = out;
  const rqgan::GenerateReport report = rqgan::cmd_generate(run_dir, target);
  std::cout << "wrote " << report.generated << " images to " << report.out_dir.string()
            << "\n";
  for (const auto& msg : report.skipped) std::cout << "skipped: " << msg << "\n";
  return kExitOk;
}

int run_inspect(const std::string& run_dir, const std::string& csv_path) {
  const rqgan::InspectReport report = rqgan::cmd_inspect(run_dir);
  const std::string csv = report.csv();
  if (csv_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw rqgan::IoError("cannot write " + csv_path);
    out << csv;
  }
  if (report.first_undetected_epoch) {
    std::cerr << "first epoch with mean generated sigma > 0: "
              << *report.first_undetected_epoch << "\n";
  } else {
    std::cerr << "mean generated sigma stayed <= 0 in every epoch\n";
  }
  return kExitOk;
}

int run_selftest(bool perturb) {
  rqgan::SelftestOptions options;
  options.perturb_counts = perturb;
  const rqgan::SelftestReport report = rqgan::cmd_selftest(options);
  for (const auto& c : report.checks) {
    std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
  }
  return report.passed() ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-amplitude quantum GAN for compressed MNIST digits"};
  app.require_subcommand(1);
  app.footer(std::string("Default MNIST directory: $") + rqgan::kDataDirEnv +
             " (images-idx3-ubyte, labels-idx1-ubyte).\n"
             "Exit codes: 0 ok, 1 runtime failure, 2 usage or config error.");

  TrainFlags tf;
  CLI::App* train = app.add_subcommand("train", "Train on an MNIST digit subset");
  train->add_option("--config", tf.config_path,
                    "JSON config or a previous run's manifest.json; flags override it");
  train->add_option("-n,--qubits", tf.qubits, "Qubits n in 2..8 (n_pca = 2^n - 1)");
  train->add_option("--digit", tf.digit, "Digit class 0..9");
  train->add_option("-N,--subset-size", tf.subset_size, "Training images");
  train->add_option("--epochs", tf.epochs, "Adversarial epochs");
  train->add_option("--iters", tf.iters, "CMA-ES generations per agent per epoch");
  train->add_option("--seed", tf.seed, "Master seed");
  train->add_option("--scale", tf.scale_statistic, "Scale statistic: mean, max or median");
  train->add_option("--log-base", tf.log_base, "Population-size log base: e, 2 or 10");
  train->add_option("--generator-mode", tf.generator_mode,
                    "per-sample (one CMA-ES per theta_G) or joint");
  train->add_option("--step-size", tf.step_size, "Initial CMA-ES step size");
  train->add_option("--stagnation-tol", tf.stagnation_tol, "Early-stop tolerance");
  train->add_option("--stagnation-window", tf.stagnation_window, "Early-stop window");
  train->add_flag("--no-warm-start", tf.no_warm_start,
                  "Restart both agents from random angles every epoch");
  train->add_option("--images", tf.images, "IDX image file");
  train->add_option("--labels", tf.labels, "IDX label file");
  train->add_option("-o,--out", tf.out, "Output run directory");
  train->add_flag("-q,--quiet", tf.quiet, "No per-epoch progress on stderr");

  std::string gen_run, gen_out;
  CLI::App* generate = app.add_subcommand("generate", "Regenerate images from a run");
  generate->add_option("run_dir", gen_run, "Run directory")->required();
  generate->add_option("-o,--out", gen_out, "Output directory (default <run>/regenerated)");

  std::string insp_run, insp_csv;
  CLI::App* inspect = app.add_subcommand("inspect", "Per-epoch loss and variance table");
  inspect->add_option("run_dir", insp_run, "Run directory")->required();
  inspect->add_option("--csv", insp_csv, "Write the table here instead of stdout");

  bool perturb = false;
  CLI::App* selftest = app.add_subcommand("selftest", "Fast invariant checks");
  selftest->add_flag("--perturb-counts", perturb,
                     "Mutation fixture: compare against a wrong CX-count formula");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train) return run_train(tf);
    if (*generate) return run_generate(gen_run, gen_out);
    if (*inspect) return run_inspect(insp_run, insp_csv);
    if (*selftest) return run_selftest(perturb);
  } catch (const rqgan::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
