#!/usr/bin/env python3
# Copyright 2026 The rqgan Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes IDX fixtures.

  make_mnist_fixture.py subset <mnist_5k.csv.gz> <out_dir> [per_digit]
      Converts the mlxtend 5k MNIST sample (784 pixels + label per row) into
      IDX image/label files holding the first `per_digit` images of each digit.

  make_mnist_fixture.py tiny <out_dir>
      Writes the 3-image synthetic fixture used by the loader tests. Pixel
      (k, r, c) = (k * 71 + r * 28 + c) % 256, labels (3, 1, 4).
"""
import gzip
import os
import struct
import sys


def write_idx(out_dir, prefix, images, labels):
    with open(os.path.join(out_dir, prefix + "images-idx3-ubyte"), "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(images), 28, 28))
        for img in images:
            f.write(bytes(img))
    with open(os.path.join(out_dir, prefix + "labels-idx1-ubyte"), "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(labels)))
        f.write(bytes(labels))


def subset(csv_path, out_dir, per_digit):
    opener = gzip.open if csv_path.endswith(".gz") else open
    counts = [0] * 10
    images, labels = [], []
    with opener(csv_path, "rt") as f:
        for line in f:
            row = [int(float(x)) for x in line.strip().split(",")]
            pixels, label = row[:-1], row[-1]
            assert len(pixels) == 784 and 0 <= label <= 9
            if counts[label] < per_digit:
                counts[label] += 1
                images.append(pixels)
                labels.append(label)
    write_idx(out_dir, "", images, labels)
    print("wrote", len(images), "images", counts)


def tiny(out_dir):
    images = [[(k * 71 + r * 28 + c) % 256 for r in range(28) for c in range(28)]
              for k in range(3)]
    write_idx(out_dir, "tiny-", images, [3, 1, 4])


if __name__ == "__main__":
    if sys.argv[1] == "subset":
        subset(sys.argv[2], sys.argv[3], int(sys.argv[4]) if len(sys.argv) > 4 else 50)
    elif sys.argv[1] == "tiny":
        tiny(sys.argv[2])
    else:
        sys.exit(__doc__)
