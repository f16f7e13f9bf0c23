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

// End-to-end runs: MNIST subset -> PCA -> stereographic encoding ->
// adversarial training -> decoded images, plus run inspection and the
// built-in self test.
//
// Run directory layout:
//   manifest.json      config, derived sizes, CEV, scale, file list
//   params.json        n, scale, theta_d, theta_g (exact doubles)
//   pca.bin            PCA model (see pca.h for the byte layout)
//   train_log.jsonl    one JSON object per optimizer generation and epoch
//   generated.csv      one row of 784 [0,1] intensities per generated image
//   images/gen_NNN.pgm generated digits
//   images/ref_NNN.pgm PCA reconstructions of the training subset

#ifndef RQGAN_PIPELINE_H_
#define RQGAN_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rqgan/adversarial.h"

namespace rqgan {

// Bad flags, invalid config values or missing inputs (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Environment variable naming the directory that holds
// images-idx3-ubyte and labels-idx1-ubyte.
inline constexpr const char* kDataDirEnv = "RQGAN_DATA_DIR";

struct RunConfig {
  int qubits = 2;
  int digit = 8;
  int subset_size = 20;
  int epochs = 25;
  int iters_per_epoch = 500;
  std::uint64_t seed = 7;
  std::string scale_statistic = "mean";
  std::string log_base = "e";
  std::string generator_mode = "per-sample";
  bool warm_start = true;
  double step_size = 0.3 * 3.14159265358979323846;
  double stagnation_tol = 1e-12;
  int stagnation_window = 100;
  std::string images_path;
  std::string labels_path;
  std::string out_dir = "run";

  int n_pca() const { return (1 << qubits) - 1; }
  double log_base_value() const;
  GameConfig game_config() const;

  // Throws UsageError.
  void validate() const;

  // Fills empty data paths from RQGAN_DATA_DIR when it is set.
  void apply_data_dir_default();
};

std::string config_to_json(const RunConfig& config);
// Accepts a bare config object or a manifest with a "config" member. Keys
// that are absent keep the values already in `base`.
RunConfig config_from_json(const std::string& text, RunConfig base = {});
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

struct TrainReport {
  std::filesystem::path run_dir;
  GameState state;
  double cev = 0.0;
  double scale = 1.0;
  int generated = 0;
  std::vector<std::string> skipped;
};

TrainReport cmd_train(const RunConfig& config, std::ostream* progress = nullptr);

struct GenerateReport {
  std::filesystem::path out_dir;
  int generated = 0;
  std::vector<std::string> skipped;
};

// Regenerates images from a run's saved parameters into `out_dir`
// (default: <run_dir>/regenerated).
GenerateReport cmd_generate(const std::filesystem::path& run_dir,
                            std::optional<std::filesystem::path> out_dir = {});

struct InspectRow {
  int epoch = 0;
  double loss_d = 0.0;
  double loss_g = 0.0;
  double variance_d = 0.0;
  double variance_g = 0.0;
  double mean_sigma_real = 0.0;
  double mean_sigma_fake = 0.0;
};

struct InspectReport {
  std::vector<InspectRow> rows;
  // First epoch whose mean generated sigma exceeds 0.
  std::optional<int> first_undetected_epoch;
  std::string csv() const;
};

// Throws FormatError for a missing/corrupt manifest or log; log errors name
// the 1-based line number.
InspectReport cmd_inspect(const std::filesystem::path& run_dir);

struct SelftestOptions {
  // Mutation fixture: compares against a deliberately wrong CX formula.
  bool perturb_counts = false;
};

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;
  bool passed() const;
};

SelftestReport cmd_selftest(const SelftestOptions& options = {});

}  // namespace rqgan

#endif  // RQGAN_PIPELINE_H_
