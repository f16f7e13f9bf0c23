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

#include "rqgan/pipeline.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "rqgan/circuits.h"
#include "rqgan/cmaes.h"
#include "rqgan/dataio.h"
#include "rqgan/encoding.h"
#include "rqgan/pca.h"

namespace rqgan {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestFormat = "rqgan-run-1";

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

template <typename T>
void take(const json& obj, const char* key, T& field) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    field = it->get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config key '") + key + "' has the wrong type");
  }
}

std::string image_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "gen_%03d.pgm", index);
  return buf;
}

std::string ref_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "ref_%03d.pgm", index);
  return buf;
}

// Writes PGMs and generated.csv, returns the number of images.
int write_generated(const GeneratedImages& images, const fs::path& dir) {
  fs::create_directories(dir / "images");
  Matrix rows(images.pixels.size(), kImagePixels);
  for (std::size_t i = 0; i < images.pixels.size(); ++i) {
    export_pgm(images.pixels[i], dir / "images" / image_name(images.sample_index[i]));
    std::copy(images.pixels[i].begin(), images.pixels[i].end(), rows.row(i).begin());
  }
  export_csv(rows, dir / "generated.csv");
  return static_cast<int>(images.pixels.size());
}

json trace_json(const TraceRecord& r) {
  return {{"type", "gen"},       {"epoch", r.epoch},
          {"agent", std::string(1, r.agent)},
          {"generation", r.generation},
          {"best", r.best},      {"mean", r.mean},
          {"variance", r.variance}};
}

json epoch_json(const EpochSummary& e) {
  return {{"type", "epoch"},
          {"epoch", e.epoch},
          {"loss_d", e.loss_d},
          {"loss_g", e.loss_g},
          {"variance_d", e.variance_d},
          {"variance_g", e.variance_g},
          {"generations_d", e.generations_d},
          {"generations_g", e.generations_g},
          {"mean_sigma_real", e.mean_sigma_real},
          {"mean_sigma_fake", e.mean_sigma_fake}};
}

}  // namespace

double RunConfig::log_base_value() const {
  if (log_base == "e") return 0.0;
  char* end = nullptr;
  const double value = std::strtod(log_base.c_str(), &end);
  if (log_base.empty() || *end != '\0' || !std::isfinite(value) || value <= 1.0) {
    throw UsageError("log_base must be 'e' or a number > 1, got '" + log_base + "'");
  }
  return value;
}

GameConfig RunConfig::game_config() const {
  GameConfig g;
  g.n = qubits;
  g.epochs = epochs;
  g.iters_per_epoch = iters_per_epoch;
  g.seed = seed;
  g.step_size = step_size;
  g.log_base = log_base_value();
  g.warm_start = warm_start;
  g.generator_mode = parse_generator_mode(generator_mode);
  g.stagnation_tol = stagnation_tol;
  g.stagnation_window = stagnation_window;
  return g;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw UsageError("invalid config: " + msg); };
  if (qubits < 2 || qubits > 8) fail("qubits must be in 2..8");
  if (digit < 0 || digit > 9) fail("digit must be in 0..9");
  if (subset_size < n_pca() + 1) {
    fail("subset_size must be at least 2^qubits = " + std::to_string(n_pca() + 1) +
         " so that n_pca = 2^qubits - 1 components exist");
  }
  if (epochs < 1) fail("epochs must be >= 1");
  if (iters_per_epoch < 1) fail("iters_per_epoch must be >= 1");
  if (!(step_size > 0.0) || !std::isfinite(step_size)) fail("step_size must be > 0");
  if (!(stagnation_tol >= 0.0)) fail("stagnation_tol must be >= 0");
  if (stagnation_window < 1) fail("stagnation_window must be >= 1");
  try {
    parse_scale_statistic(scale_statistic);
    parse_generator_mode(generator_mode);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  log_base_value();
  if (images_path.empty() || labels_path.empty()) {
    fail(std::string("MNIST paths not set; pass --images/--labels or set ") + kDataDirEnv);
  }
  if (out_dir.empty()) fail("out_dir is empty");
}

void RunConfig::apply_data_dir_default() {
  const char* dir = std::getenv(kDataDirEnv);
  if (dir == nullptr || *dir == '\0') return;
  if (images_path.empty()) images_path = (fs::path(dir) / "images-idx3-ubyte").string();
  if (labels_path.empty()) labels_path = (fs::path(dir) / "labels-idx1-ubyte").string();
}

std::string config_to_json(const RunConfig& c) {
  json j = {{"qubits", c.qubits},
            {"digit", c.digit},
            {"subset_size", c.subset_size},
            {"epochs", c.epochs},
            {"iters_per_epoch", c.iters_per_epoch},
            {"seed", c.seed},
            {"scale_statistic", c.scale_statistic},
            {"log_base", c.log_base},
            {"generator_mode", c.generator_mode},
            {"warm_start", c.warm_start},
            {"step_size", c.step_size},
            {"stagnation_tol", c.stagnation_tol},
            {"stagnation_window", c.stagnation_window},
            {"images", c.images_path},
            {"labels", c.labels_path},
            {"out_dir", c.out_dir}};
  return j.dump(2);
}

RunConfig config_from_json(const std::string& text, RunConfig c) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("config")) j = j["config"];
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  static const std::set<std::string> known = {
      "qubits", "digit", "subset_size", "epochs", "iters_per_epoch", "seed",
      "scale_statistic", "log_base", "generator_mode", "warm_start", "step_size",
      "stagnation_tol", "stagnation_window", "images", "labels", "out_dir"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw UsageError("unknown config key '" + item.key() + "'");
  }
  take(j, "qubits", c.qubits);
  take(j, "digit", c.digit);
  take(j, "subset_size", c.subset_size);
  take(j, "epochs", c.epochs);
  take(j, "iters_per_epoch", c.iters_per_epoch);
  take(j, "seed", c.seed);
  take(j, "scale_statistic", c.scale_statistic);
  take(j, "log_base", c.log_base);
  take(j, "generator_mode", c.generator_mode);
  take(j, "warm_start", c.warm_start);
  take(j, "step_size", c.step_size);
  take(j, "stagnation_tol", c.stagnation_tol);
  take(j, "stagnation_window", c.stagnation_window);
  take(j, "images", c.images_path);
  take(j, "labels", c.labels_path);
  take(j, "out_dir", c.out_dir);
  return c;
}

RunConfig load_config_file(const fs::path& path, RunConfig base) {
  if (!fs::exists(path)) throw UsageError("config file not found: " + path.string());
  return config_from_json(read_text(path), std::move(base));
}

TrainReport cmd_train(const RunConfig& config, std::ostream* progress) {
  config.validate();
  for (const auto& p : {config.images_path, config.labels_path}) {
    if (!fs::is_regular_file(p)) throw UsageError("MNIST file not found: " + p);
  }
  const GameConfig game = config.game_config();

  const ImageSet all = load_idx(config.images_path, config.labels_path);
  const ImageSet subset = select_subset(all, config.digit, config.subset_size, config.seed);
  const Matrix pixels = to_unit_matrix(subset);
  const PcaModel pca = pca_fit(pixels, config.n_pca());

  std::vector<PlaneVector> reduced;
  for (std::size_t i = 0; i < pixels.rows(); ++i) {
    reduced.push_back(pca_transform(pca, pixels.row(i)));
  }
  EncodedDataset encoded =
      encode_dataset(reduced, parse_scale_statistic(config.scale_statistic));

  const fs::path dir(config.out_dir);
  fs::create_directories(dir / "images");
  save_pca(pca, dir / "pca.bin");
  for (std::size_t i = 0; i < pixels.rows(); ++i) {
    std::vector<double> back = pca_inverse_transform(pca, reduced[i]);
    export_pgm(back, dir / "images" / ref_name(static_cast<int>(i)));
  }

  std::ofstream log(dir / "train_log.jsonl", std::ios::binary);
  if (!log) throw IoError("cannot write " + (dir / "train_log.jsonl").string());
  TrainCallbacks callbacks;
  callbacks.on_generation = [&](const TraceRecord& r) { log << trace_json(r).dump() << '\n'; };
  callbacks.on_epoch = [&](const EpochSummary& e) {
    log << epoch_json(e).dump() << '\n';
    log.flush();
    if (progress) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "epoch %3d  L_D=%.6f  L_G=%.6f  sigma_real=%+.4f  sigma_fake=%+.4f\n",
                    e.epoch, e.loss_d, e.loss_g, e.mean_sigma_real, e.mean_sigma_fake);
      *progress << buf << std::flush;
    }
  };

  TrainReport report;
  report.run_dir = dir;
  report.cev = pca.cev;
  report.scale = encoded.scale;
  report.state = train(game, encoded.sphere, callbacks);
  log.close();
  if (!log) throw IoError("write failed: " + (dir / "train_log.jsonl").string());

  json params = {{"n", config.qubits},
                 {"scale", encoded.scale},
                 {"theta_d", report.state.theta_d},
                 {"theta_g", report.state.theta_g}};
  write_text(dir / "params.json", params.dump(2) + "\n");

  const GeneratedImages images = generate(report.state.theta_g, pca, encoded.scale);
  report.generated = write_generated(images, dir);
  report.skipped = images.skipped;

  json manifest = {{"format", kManifestFormat},
                   {"config", json::parse(config_to_json(config))},
                   {"n_pca", config.n_pca()},
                   {"cev", pca.cev},
                   {"scale", encoded.scale},
                   {"subset_size", subset.size()},
                   {"epochs_completed", report.state.epochs.size()},
                   {"generated", report.generated},
                   {"skipped", images.skipped},
                   {"files",
                    {{"pca", "pca.bin"},
                     {"params", "params.json"},
                     {"log", "train_log.jsonl"},
                     {"generated_csv", "generated.csv"},
                     {"images", "images"}}}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  return report;
}

namespace {

json load_json_file(const fs::path& path, const char* what) {
  if (!fs::is_regular_file(path)) throw FormatError(std::string(what) + " missing: " + path.string());
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + " is corrupt (" + path.string() + "): " + e.what());
  }
}

void check_manifest(const json& m, const fs::path& path) {
  if (!m.is_object() || m.value("format", "") != kManifestFormat || !m.contains("config")) {
    throw FormatError("not an rqgan manifest: " + path.string());
  }
}

}  // namespace

GenerateReport cmd_generate(const fs::path& run_dir, std::optional<fs::path> out_dir) {
  check_manifest(load_json_file(run_dir / "manifest.json", "manifest"),
                 run_dir / "manifest.json");
  const json params = load_json_file(run_dir / "params.json", "params");
  std::vector<ParamVector> theta_g;
  double scale = 0.0;
  try {
    theta_g = params.at("theta_g").get<std::vector<ParamVector>>();
    scale = params.at("scale").get<double>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("params.json: ") + e.what());
  }
  const PcaModel pca = load_pca(run_dir / "pca.bin");
  GenerateReport report;
  report.out_dir = out_dir.value_or(run_dir / "regenerated");
  const GeneratedImages images = generate(theta_g, pca, scale);
  report.generated = write_generated(images, report.out_dir);
  report.skipped = images.skipped;
  return report;
}

std::string InspectReport::csv() const {
  std::string out =
      "epoch,loss_d,loss_g,variance_d,variance_g,mean_sigma_real,mean_sigma_fake,"
      "undetected\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d\n", r.epoch,
                  r.loss_d, r.loss_g, r.variance_d, r.variance_g, r.mean_sigma_real,
                  r.mean_sigma_fake, r.mean_sigma_fake > 0.0 ? 1 : 0);
    out += buf;
  }
  return out;
}

InspectReport cmd_inspect(const fs::path& run_dir) {
  check_manifest(load_json_file(run_dir / "manifest.json", "manifest"),
                 run_dir / "manifest.json");
  const fs::path log_path = run_dir / "train_log.jsonl";
  std::ifstream in(log_path, std::ios::binary);
  if (!in) throw FormatError("training log missing: " + log_path.string());

  InspectReport report;
  std::string line;
  int line_no = 0;
  int last_epoch = 0;
  auto bad = [&](const std::string& why) {
    throw FormatError("train_log.jsonl line " + std::to_string(line_no) + ": " + why);
  };
  auto number = [&](const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) bad(std::string("missing numeric '") + key + "'");
    return it->get<double>();
  };
  auto integer = [&](const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number_integer()) {
      bad(std::string("missing integer '") + key + "'");
    }
    return it->get<int>();
  };
  while (std::getline(in, line)) {
    ++line_no;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      bad("not valid JSON");
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
      bad("missing record type");
    }
    const std::string type = j["type"];
    const int epoch = integer(j, "epoch");
    if (epoch < 1 || epoch < last_epoch) bad("epoch out of order");
    if (type == "gen") {
      if (epoch != last_epoch + 1) bad("generation record outside an open epoch");
      if (!j.contains("agent") || !j["agent"].is_string() ||
          (j["agent"] != "D" && j["agent"] != "G")) {
        bad("agent must be \"D\" or \"G\"");
      }
      integer(j, "generation");
      number(j, "best");
      number(j, "mean");
      number(j, "variance");
    } else if (type == "epoch") {
      if (epoch != last_epoch + 1) bad("epoch summary out of sequence");
      InspectRow row;
      row.epoch = epoch;
      row.loss_d = number(j, "loss_d");
      row.loss_g = number(j, "loss_g");
      row.variance_d = number(j, "variance_d");
      row.variance_g = number(j, "variance_g");
      row.mean_sigma_real = number(j, "mean_sigma_real");
      row.mean_sigma_fake = number(j, "mean_sigma_fake");
      if (!report.first_undetected_epoch && row.mean_sigma_fake > 0.0) {
        report.first_undetected_epoch = epoch;
      }
      report.rows.push_back(row);
      last_epoch = epoch;
    } else {
      bad("unknown record type '" + type + "'");
    }
  }
  return report;
}

bool SelftestReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return !checks.empty();
}

namespace {

double cos_half(double t) { return std::cos(0.5 * t); }
double sin_half(double t) { return std::sin(0.5 * t); }

SelftestCheck check_counts(bool perturb) {
  SelftestCheck c{"gate counts", true, ""};
  struct Row { int n, g_ry, g_cx, d_ry, d_cx; };
  const Row table[] = {{2, 3, 1, 9, 4}, {3, 7, 4, 18, 11}, {4, 15, 11, 35, 26}};
  std::ostringstream detail;
  for (int n = 2; n <= 8; ++n) {
    const CircuitTemplate g = build_generator(n);
    const CircuitTemplate d = build_discriminator(n);
    const long g_ry = (1L << n) - 1;
    long g_cx = (1L << n) - n - 1;
    if (perturb) g_cx += 1;
    const long d_ry = (1L << (n + 1)) + n - 1;
    const long d_cx = (1L << (n + 1)) - n - 2;
    const bool ok = g.num_params() == g_ry &&
                    static_cast<long>(g.count(GateKind::kControlledNot)) == g_cx &&
                    d.num_params() == d_ry &&
                    static_cast<long>(d.count(GateKind::kControlledNot)) == d_cx;
    if (!ok) {
      c.passed = false;
      detail << "n=" << n << " mismatch; ";
    }
  }
  for (const Row& r : table) {
    const CircuitTemplate g = build_generator(r.n);
    const CircuitTemplate d = build_discriminator(r.n);
    if (g.num_params() != r.g_ry || static_cast<int>(g.count(GateKind::kControlledNot)) != r.g_cx ||
        d.num_params() != r.d_ry || static_cast<int>(d.count(GateKind::kControlledNot)) != r.d_cx) {
      c.passed = false;
      detail << "table row n=" << r.n << " mismatch; ";
    }
  }
  c.detail = c.passed ? "n=2..8 closed forms and reference table agree" : detail.str();
  return c;
}

SelftestCheck check_amplitude_forms() {
  SelftestCheck c{"amplitude closed forms", true, ""};
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    double t[8];
    for (int k = 1; k <= 7; ++k) t[k] = angle(rng);
    const double p1 = t[2] + t[3], p2 = t[2] - t[3];
    const double q1 = t[4] + t[5] + t[6] + t[7];
    const double q2 = t[4] - t[5] + t[6] - t[7];
    const double q3 = t[4] + t[5] - t[6] - t[7];
    const double q4 = t[4] - t[5] - t[6] + t[7];
    const double c1 = cos_half(t[1]), s1 = sin_half(t[1]);
    const double x3[8] = {c1 * cos_half(p1) * cos_half(q1), c1 * cos_half(p1) * sin_half(q1),
                          c1 * sin_half(p1) * cos_half(q4), c1 * sin_half(p1) * sin_half(q4),
                          s1 * sin_half(p2) * sin_half(q2), s1 * sin_half(p2) * cos_half(q2),
                          s1 * cos_half(p2) * sin_half(q3), s1 * cos_half(p2) * cos_half(q3)};
    const std::vector<double> th3(t + 1, t + 8);
    const StateVector s3 = generator_state(3, th3);
    const auto& a3 = s3.amplitudes();
    for (int i = 0; i < 8; ++i) worst = std::max(worst, std::abs(a3[i] - x3[i]));

    const double x2[4] = {c1 * cos_half(p1), c1 * sin_half(p1), s1 * sin_half(p2),
                          s1 * cos_half(p2)};
    const std::vector<double> th2(t + 1, t + 4);
    const StateVector s2 = generator_state(2, th2);
    const auto& a2 = s2.amplitudes();
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a2[i] - x2[i]));
  }
  c.passed = worst <= 1e-12;
  c.detail = "max |error| = " + std::to_string(worst) + " over 1000 draws";
  return c;
}

SelftestCheck check_round_trip() {
  SelftestCheck c{"encode/decode round trip", true, ""};
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    PlaneVector u(1 + trial % 15);
    const double r = std::exp(normal(rng));
    for (double& x : u) x = r * normal(rng);
    const PlaneVector back = si_decode(si_encode(u));
    for (std::size_t i = 0; i < u.size(); ++i) {
      worst = std::max(worst, std::abs(back[i] - u[i]) / (1.0 + std::abs(u[i])));
    }
  }
  c.passed = worst <= 1e-9;
  c.detail = "max relative error = " + std::to_string(worst);
  return c;
}

SelftestCheck check_sphere() {
  SelftestCheck c{"CMA-ES sphere benchmark", true, ""};
  ObjectiveSpec sphere;
  sphere.evaluate = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  };
  MinimizeOptions opts;
  opts.budget = 10000;
  opts.stagnation_tol = 0.0;
  std::vector<double> x0(10, 1.0);
  const MinimizeResult r = minimize(sphere, x0, 0.5, 3, opts);
  c.passed = r.best_cost < 1e-8;
  char buf[128];
  std::snprintf(buf, sizeof buf, "10-D best %.3e after %ld evaluations", r.best_cost,
                r.evaluations);
  c.detail = buf;
  return c;
}

}  // namespace

SelftestReport cmd_selftest(const SelftestOptions& options) {
  SelftestReport report;
  auto guarded = [&](const char* name, auto fn) {
    try {
      report.checks.push_back(fn());
    } catch (const std::exception& e) {
      report.checks.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  guarded("gate counts", [&] { return check_counts(options.perturb_counts); });
  guarded("amplitude closed forms", check_amplitude_forms);
  guarded("encode/decode round trip", check_round_trip);
  guarded("CMA-ES sphere benchmark", check_sphere);
  return report;
}

}  // namespace rqgan
