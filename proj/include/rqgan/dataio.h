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

// MNIST IDX ingestion and image/matrix export.

#ifndef RQGAN_DATAIO_H_
#define RQGAN_DATAIO_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rqgan/linalg.h"

namespace rqgan {

inline constexpr int kImageSide = 28;
inline constexpr int kImagePixels = kImageSide * kImageSide;
inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

// Bad magic or header fields.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing, unreadable, unwritable or truncated files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Image and label files disagree.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Image = std::array<std::uint8_t, kImagePixels>;

struct ImageSet {
  std::vector<Image> images;
  std::vector<int> labels;
  std::string source;

  std::size_t size() const { return images.size(); }
};

ImageSet load_idx(const std::filesystem::path& images_path,
                  const std::filesystem::path& labels_path);

void write_idx(const ImageSet& set, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path);

// `count` images labeled `digit`, chosen by a seeded shuffle of the matching
// indices and returned in their original order. Throws std::invalid_argument
// if fewer than `count` exist or digit is outside 0..9.
ImageSet select_subset(const ImageSet& set, int digit, int count,
                       std::uint64_t seed);

// N x 784 matrix with intensities scaled to [0, 1].
Matrix to_unit_matrix(const ImageSet& set);

// [0, 1] intensity -> clipped and rounded byte.
std::uint8_t to_byte(double intensity);

// 28x28 binary PGM (P5, maxval 255) from [0, 1] intensities.
void export_pgm(std::span<const double> pixels, const std::filesystem::path& path);

// Comma-separated rows, newline-terminated, no header, %.17g values.
void export_csv(const Matrix& m, const std::filesystem::path& path);

}  // namespace rqgan

#endif  // RQGAN_DATAIO_H_
