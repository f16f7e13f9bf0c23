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

// Generator and discriminator ansatz construction.
//
// The generator on n qubits is Ry(theta_0) on q0 followed by uniformly
// controlled rotations (UCRs) targeting q1, q2, ..., q_{n-1}, each controlled
// by every earlier qubit. It has 2^n - 1 angles and 2^n - n - 1 CX gates and
// reaches every real unit vector in R^{2^n} (up to a global sign).
//
// An m-fold UCR is built recursively in time order:
//
//   U[c0..c_{m-1}](slots) = U[c1..](even slots) ; CX(c0, t) ; U[c1..](odd slots)
//   U[c](s0, s1)          = Ry(s0) ; CX(c, t) ; Ry(s1)
//
// so rotations appear in bit-reversed slot order. For the 2-fold case this is
// Ry(s0) CX(c1) Ry(s2) CX(c0) Ry(s1) CX(c1) Ry(s3). Every control basis state
// l then sees Ry(h_l . s) X^{f_l} on the target, where h_l is a signed row of
// the Hadamard matrix H_{2^m} and f_l is the parity of CX flips.

#ifndef RQGAN_CIRCUITS_H_
#define RQGAN_CIRCUITS_H_

#include <span>
#include <vector>

#include "rqgan/linalg.h"
#include "rqgan/simulator.h"

namespace rqgan {

// Unnormalized Sylvester Hadamard matrix of order k (a power of two >= 1).
Matrix hadamard(int k);

// Gates of an m-fold UCR (m = controls.size() >= 1) with angle slots
// slot_base .. slot_base + 2^m - 1. Throws std::invalid_argument for an empty
// control list, duplicate qubits or a target among the controls.
std::vector<Gate> build_ucr(std::span<const int> controls, int target,
                            int slot_base);

// Action of a UCR fragment on one control basis state.
struct UcrBranch {
  // Effective target angle = sum_k coeffs[k] * params[slot_base + k].
  std::vector<int> coeffs;
  // True when an odd number of CX flips reach the target on this branch.
  bool flipped = false;
};

// Branch map of a UCR fragment. Branch index l encodes the control values
// with controls[0] as the most significant bit.
std::vector<UcrBranch> ucr_branches(std::span<const Gate> fragment,
                                    std::span<const int> controls,
                                    int slot_base, int num_slots);

// Throws std::invalid_argument for n < 1.
CircuitTemplate build_generator(int n);

// n input qubits plus an ancilla at index n: the generator layout on n + 1
// qubits followed by Ry on each input qubit. 2^{n+1} + n - 1 angles.
CircuitTemplate build_discriminator(int n);

// G^n(theta)|0...0>. Throws std::invalid_argument on a length mismatch.
StateVector generator_state(int n, std::span<const double> theta);
StateVector generator_state(const CircuitTemplate& generator,
                            std::span<const double> theta);

struct StatePreparation {
  // Angles in [-pi, pi).
  ParamVector params;
  // generator_state(n, params) == sign * target.
  int sign = 1;
};

// Inverse of generator_state: hyperspherical extraction of the per-branch
// target rotations level by level, then the inverse Hadamard map of each
// UCR level. Zero-norm branches get effective angle 0.
StatePreparation state_to_params(const StateVector& target);

}  // namespace rqgan

#endif  // RQGAN_CIRCUITS_H_
