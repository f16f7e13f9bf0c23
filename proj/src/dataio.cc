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

#include "rqgan/dataio.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

namespace rqgan {
namespace {

std::uint32_t read_be32(std::istream& in, const std::filesystem::path& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw IoError("truncated IDX header in " + path.string());
  }
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
         (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

void write_be32(std::ostream& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.put(static_cast<char>((v >> shift) & 0xff));
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

ImageSet load_idx(const std::filesystem::path& images_path,
                  const std::filesystem::path& labels_path) {
  std::ifstream img = open_input(images_path);
  if (const auto magic = read_be32(img, images_path); magic != kIdxImageMagic) {
    throw FormatError("bad image magic in " + images_path.string());
  }
  const std::uint32_t count = read_be32(img, images_path);
  const std::uint32_t rows = read_be32(img, images_path);
  const std::uint32_t cols = read_be32(img, images_path);
  if (rows != kImageSide || cols != kImageSide) {
    throw FormatError("expected 28x28 images in " + images_path.string());
  }

  std::ifstream lab = open_input(labels_path);
  if (const auto magic = read_be32(lab, labels_path); magic != kIdxLabelMagic) {
    throw FormatError("bad label magic in " + labels_path.string());
  }
  const std::uint32_t label_count = read_be32(lab, labels_path);
  if (label_count != count) {
    throw ConsistencyError("image count " + std::to_string(count) +
                           " differs from label count " + std::to_string(label_count));
  }

  ImageSet set;
  set.source = images_path.string();
  set.images.resize(count);
  set.labels.resize(count);
  for (auto& image : set.images) {
    if (!img.read(reinterpret_cast<char*>(image.data()), image.size())) {
      throw IoError("truncated image data in " + images_path.string());
    }
  }
  std::vector<std::uint8_t> raw(count);
  if (count > 0 && !lab.read(reinterpret_cast<char*>(raw.data()), count)) {
    throw IoError("truncated label data in " + labels_path.string());
  }
  for (std::uint32_t i = 0; i < count; ++i) {
    if (raw[i] > 9) throw FormatError("label out of range in " + labels_path.string());
    set.labels[i] = raw[i];
  }
  return set;
}

void write_idx(const ImageSet& set, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path) {
  if (set.images.size() != set.labels.size()) {
    throw ConsistencyError("write_idx: image and label counts differ");
  }
  std::ofstream img(images_path, std::ios::binary);
  std::ofstream lab(labels_path, std::ios::binary);
  if (!img || !lab) throw IoError("write_idx: cannot open output files");
  const auto count = static_cast<std::uint32_t>(set.size());
  write_be32(img, kIdxImageMagic);
  write_be32(img, count);
  write_be32(img, kImageSide);
  write_be32(img, kImageSide);
  for (const auto& image : set.images) {
    img.write(reinterpret_cast<const char*>(image.data()), image.size());
  }
  write_be32(lab, kIdxLabelMagic);
  write_be32(lab, count);
  for (int label : set.labels) lab.put(static_cast<char>(label));
  if (!img || !lab) throw IoError("write_idx: write failed");
}

ImageSet select_subset(const ImageSet& set, int digit, int count,
                       std::uint64_t seed) {
  if (digit < 0 || digit > 9) throw std::invalid_argument("select_subset: digit not in 0..9");
  if (count < 0) throw std::invalid_argument("select_subset: negative count");
  std::vector<std::size_t> matches;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set.labels[i] == digit) matches.push_back(i);
  }
  if (matches.size() < static_cast<std::size_t>(count)) {
    throw std::invalid_argument("select_subset: only " + std::to_string(matches.size()) +
                                " images of digit " + std::to_string(digit) +
                                ", requested " + std::to_string(count));
  }
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates with explicit modulo draws so the choice does not
  // depend on the standard library's distribution implementation.
  for (int i = 0; i < count; ++i) {
    const std::size_t span = matches.size() - i;
    const std::size_t j = i + static_cast<std::size_t>(rng() % span);
    std::swap(matches[i], matches[j]);
  }
  matches.resize(count);
  std::sort(matches.begin(), matches.end());

  ImageSet out;
  out.source = set.source;
  for (std::size_t i : matches) {
    out.images.push_back(set.images[i]);
    out.labels.push_back(set.labels[i]);
  }
  return out;
}

Matrix to_unit_matrix(const ImageSet& set) {
  Matrix m(set.size(), kImagePixels);
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (int j = 0; j < kImagePixels; ++j) m(i, j) = set.images[i][j] / 255.0;
  }
  return m;
}

std::uint8_t to_byte(double intensity) {
  if (!std::isfinite(intensity)) return 0;
  const double v = std::clamp(intensity, 0.0, 1.0) * 255.0;
  return static_cast<std::uint8_t>(std::lround(v));
}

void export_pgm(std::span<const double> pixels, const std::filesystem::path& path) {
  if (pixels.size() != static_cast<std::size_t>(kImagePixels)) {
    throw std::invalid_argument("export_pgm: expected 784 pixels");
  }
  for (double p : pixels) {
    if (!std::isfinite(p)) throw std::invalid_argument("export_pgm: non-finite pixel");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << kImageSide << ' ' << kImageSide << "\n255\n";
  for (double p : pixels) out.put(static_cast<char>(to_byte(p)));
  if (!out) throw IoError("write failed for " + path.string());
}

void export_csv(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  char buf[32];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
      if (c) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace rqgan
