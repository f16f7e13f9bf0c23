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

#include "rqgan/circuits.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rqgan {
namespace {

void append_ucr(std::span<const int> controls, int target,
                std::span<const int> slots, std::vector<Gate>& out) {
  if (controls.size() == 1) {
    out.push_back(Gate::ry(target, slots[0]));
    out.push_back(Gate::cx(controls[0], target));
    out.push_back(Gate::ry(target, slots[1]));
    return;
  }
  std::vector<int> even;
  std::vector<int> odd;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    (k % 2 == 0 ? even : odd).push_back(slots[k]);
  }
  append_ucr(controls.subspan(1), target, even, out);
  out.push_back(Gate::cx(controls[0], target));
  append_ucr(controls.subspan(1), target, odd, out);
}

// Gates of generator level `level`: Ry on q0 for level 0, otherwise the UCR
// on q_level controlled by q0..q_{level-1}.
std::vector<Gate> level_gates(int level, std::span<const int> controls) {
  if (level == 0) return {Gate::ry(0, 0)};
  return build_ucr(controls.first(level), level, (1 << level) - 1);
}

void append_generator_layout(int n, std::vector<Gate>& out) {
  std::vector<int> qubits(n);
  for (int q = 0; q < n; ++q) qubits[q] = q;
  for (int level = 0; level < n; ++level) {
    auto gates = level_gates(level, qubits);
    out.insert(out.end(), gates.begin(), gates.end());
  }
}

double wrap_angle(double angle, int& sign) {
  constexpr double kPi = std::numbers::pi;
  const double turns = std::floor((angle + kPi) / (2.0 * kPi));
  double wrapped = angle - 2.0 * kPi * turns;
  if (wrapped >= kPi) wrapped -= 2.0 * kPi;
  if (wrapped < -kPi) wrapped = -kPi;
  // Ry(a + 2pi) = -Ry(a): each odd turn flips the global sign.
  if (static_cast<long long>(turns) % 2 != 0) sign = -sign;
  return wrapped;
}

}  // namespace

Matrix hadamard(int k) {
  if (k < 1 || (k & (k - 1)) != 0) {
    throw std::invalid_argument("hadamard: order must be a power of two");
  }
  Matrix h(k, k);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      h(r, c) = (std::popcount(static_cast<unsigned>(r & c)) % 2) ? -1.0 : 1.0;
    }
  }
  return h;
}

std::vector<Gate> build_ucr(std::span<const int> controls, int target,
                            int slot_base) {
  if (controls.empty()) {
    throw std::invalid_argument("build_ucr: need at least one control");
  }
  std::vector<int> seen(controls.begin(), controls.end());
  seen.push_back(target);
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw std::invalid_argument("build_ucr: duplicate qubit among controls/target");
  }
  const int num_slots = 1 << controls.size();
  std::vector<int> slots(num_slots);
  for (int k = 0; k < num_slots; ++k) slots[k] = slot_base + k;
  std::vector<Gate> out;
  out.reserve(2 * num_slots - 1);
  append_ucr(controls, target, slots, out);
  return out;
}

std::vector<UcrBranch> ucr_branches(std::span<const Gate> fragment,
                                    std::span<const int> controls,
                                    int slot_base, int num_slots) {
  const int m = static_cast<int>(controls.size());
  std::vector<UcrBranch> branches(std::size_t{1} << m);
  for (std::size_t l = 0; l < branches.size(); ++l) {
    auto control_set = [&](int qubit) {
      for (int i = 0; i < m; ++i) {
        if (controls[i] == qubit) return ((l >> (m - 1 - i)) & 1) != 0;
      }
      return false;
    };
    UcrBranch& b = branches[l];
    b.coeffs.assign(num_slots, 0);
    int flips = 0;
    // X Ry(a) = Ry(-a) X: a rotation's sign is set by the flips after it.
    for (auto it = fragment.rbegin(); it != fragment.rend(); ++it) {
      if (it->kind == GateKind::kControlledNot) {
        if (control_set(it->control)) ++flips;
      } else {
        b.coeffs[it->slot - slot_base] = (flips % 2 == 0) ? 1 : -1;
      }
    }
    b.flipped = (flips % 2) != 0;
  }
  return branches;
}

CircuitTemplate build_generator(int n) {
  if (n < 1) throw std::invalid_argument("build_generator: n must be >= 1");
  std::vector<Gate> gates;
  append_generator_layout(n, gates);
  return CircuitTemplate(n, std::move(gates));
}

CircuitTemplate build_discriminator(int n) {
  if (n < 1) throw std::invalid_argument("build_discriminator: n must be >= 1");
  std::vector<Gate> gates;
  append_generator_layout(n + 1, gates);
  const int base = (1 << (n + 1)) - 1;
  for (int q = 0; q < n; ++q) gates.push_back(Gate::ry(q, base + q));
  return CircuitTemplate(n + 1, std::move(gates));
}

StateVector generator_state(const CircuitTemplate& generator,
                            std::span<const double> theta) {
  return run_circuit(generator, theta, StateVector(generator.num_qubits()));
}

StateVector generator_state(int n, std::span<const double> theta) {
  if (n < 1 || theta.size() != (std::size_t{1} << n) - 1) {
    throw std::invalid_argument("generator_state: expected 2^n - 1 angles");
  }
  return generator_state(build_generator(n), theta);
}

StatePreparation state_to_params(const StateVector& target) {
  const int n = target.num_qubits();
  const auto amps = target.amplitudes();
  std::vector<int> qubits(n);
  for (int q = 0; q < n; ++q) qubits[q] = q;

  StatePreparation prep;
  prep.params.assign((std::size_t{1} << n) - 1, 0.0);
  for (int level = 0; level < n; ++level) {
    const int num_slots = 1 << level;
    const int slot_base = num_slots - 1;
    const auto gates = level_gates(level, qubits);
    std::vector<UcrBranch> branches;
    if (level == 0) {
      branches = {UcrBranch{{1}, false}};
    } else {
      branches = ucr_branches(gates, std::span(qubits).first(level), slot_base,
                              num_slots);
    }

    const std::size_t block = std::size_t{1} << (n - level);
    const std::size_t half = block / 2;
    const bool last = (level == n - 1);
    std::vector<double> phi(num_slots, 0.0);
    for (int l = 0; l < num_slots; ++l) {
      const auto lower = amps.subspan(l * block, half);
      const auto upper = amps.subspan(l * block + half, half);
      const double a0 = last ? lower[0] : norm(lower);
      const double a1 = last ? upper[0] : norm(upper);
      if (a0 == 0.0 && a1 == 0.0) continue;
      // Target qubit must end up proportional to (a0, a1):
      // Ry(phi)|0> = (c, s) and Ry(phi)|1> = (-s, c).
      phi[l] = branches[l].flipped ? 2.0 * std::atan2(-a0, a1)
                                   : 2.0 * std::atan2(a1, a0);
    }
    // Branch coefficient rows are orthogonal with squared norm num_slots.
    for (int k = 0; k < num_slots; ++k) {
      double acc = 0.0;
      for (int l = 0; l < num_slots; ++l) acc += branches[l].coeffs[k] * phi[l];
      prep.params[slot_base + k] = acc / num_slots;
    }
  }
  for (double& p : prep.params) p = wrap_angle(p, prep.sign);
  return prep;
}

}  // namespace rqgan
