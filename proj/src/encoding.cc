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

#include "rqgan/encoding.h"

#include <algorithm>
#include <cmath>

#include "rqgan/linalg.h"

namespace rqgan {
namespace {

void require_finite(std::span<const double> x, const char* who) {
  if (x.empty()) throw std::invalid_argument(std::string(who) + ": empty vector");
  for (double value : x) {
    if (!std::isfinite(value)) {
      throw std::invalid_argument(std::string(who) + ": non-finite entry");
    }
  }
}

}  // namespace

SphereVector si_encode(std::span<const double> u) {
  require_finite(u, "si_encode");
  const double r2 = dot(u, u);
  if (!std::isfinite(r2)) throw std::invalid_argument("si_encode: |u|^2 overflows");
  SphereVector v(u.size() + 1);
  for (std::size_t i = 0; i < u.size(); ++i) v[i] = 2.0 * u[i] / (r2 + 1.0);
  v.back() = (r2 - 1.0) / (r2 + 1.0);
  const double nrm = norm(v);
  for (double& x : v) x /= nrm;
  return v;
}

PlaneVector si_decode(std::span<const double> v) {
  require_finite(v, "si_decode");
  if (v.size() < 2) throw std::invalid_argument("si_decode: need at least 2 entries");
  // On the sphere 1 - v_last = sum(v_i^2) / (1 + v_last); the quotient form
  // avoids cancellation in the upper hemisphere where v_last -> 1.
  double gap = 1.0 - v.back();
  if (v.back() > 0.0) {
    const double rest = dot(v.first(v.size() - 1), v.first(v.size() - 1));
    gap = rest / (1.0 + v.back());
  }
  if (gap <= kPoleEpsilon) {
    throw NorthPoleError("si_decode: point within " + std::to_string(kPoleEpsilon) +
                         " of the north pole");
  }
  PlaneVector u(v.size() - 1);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = v[i] / gap;
  return u;
}

ScaleStatistic parse_scale_statistic(const std::string& name) {
  if (name == "mean") return ScaleStatistic::kMean;
  if (name == "max") return ScaleStatistic::kMax;
  if (name == "median") return ScaleStatistic::kMedian;
  throw std::invalid_argument("unknown scale statistic '" + name + "'");
}

std::string to_string(ScaleStatistic statistic) {
  switch (statistic) {
    case ScaleStatistic::kMean: return "mean";
    case ScaleStatistic::kMax: return "max";
    case ScaleStatistic::kMedian: return "median";
  }
  return "mean";
}

double fit_scale(std::span<const PlaneVector> dataset, ScaleStatistic statistic) {
  if (dataset.empty()) throw std::invalid_argument("fit_scale: empty dataset");
  std::vector<double> norms;
  norms.reserve(dataset.size());
  for (const auto& u : dataset) norms.push_back(norm(u));
  double stat = 0.0;
  switch (statistic) {
    case ScaleStatistic::kMean:
      for (double x : norms) stat += x;
      stat /= static_cast<double>(norms.size());
      break;
    case ScaleStatistic::kMax:
      stat = *std::max_element(norms.begin(), norms.end());
      break;
    case ScaleStatistic::kMedian: {
      std::sort(norms.begin(), norms.end());
      const std::size_t mid = norms.size() / 2;
      stat = norms.size() % 2 ? norms[mid] : 0.5 * (norms[mid - 1] + norms[mid]);
      break;
    }
  }
  if (!(stat > 0.0) || !std::isfinite(stat)) {
    throw std::invalid_argument("fit_scale: dataset norms are all zero");
  }
  return 1.0 / stat;
}

EncodedDataset encode_dataset(std::span<const PlaneVector> dataset,
                              ScaleStatistic statistic) {
  EncodedDataset out;
  out.scale = fit_scale(dataset, statistic);
  for (const auto& u : dataset) {
    PlaneVector scaled(u);
    for (double& x : scaled) x *= out.scale;
    out.sphere.push_back(si_encode(scaled));
    out.plane.push_back(std::move(scaled));
  }
  return out;
}

}  // namespace rqgan
