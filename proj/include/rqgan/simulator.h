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

// Real-amplitude statevector simulation for the Ry/CX gate set.
//
// Basis convention: amplitude index i labels |q_0 q_1 ... q_{n-1}> with q_0
// the most significant bit, so qubit q is bit (n - 1 - q) of the index.

#ifndef RQGAN_SIMULATOR_H_
#define RQGAN_SIMULATOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rqgan {

using ParamVector = std::vector<double>;

class StateVector {
 public:
  // |0...0> on `num_qubits` qubits.
  explicit StateVector(int num_qubits);

  // Throws std::invalid_argument unless the length is a power of two >= 2
  // and the Euclidean norm is 1 within `norm_tol`.
  static StateVector from_amplitudes(std::vector<double> amplitudes,
                                     double norm_tol = 1e-12);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const double> amplitudes() const { return amps_; }
  double operator[](std::size_t i) const { return amps_[i]; }

  // In-place gate application. Out-of-range qubits throw std::out_of_range;
  // control == target throws std::invalid_argument.
  void apply_ry(int target, double angle);
  void apply_cx(int control, int target);

  // <Z> on `qubit`: sum of amps^2 with + where the qubit bit is 0.
  double expect_z(int qubit) const;

  double norm() const;

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  StateVector(int num_qubits, std::vector<double> amps)
      : num_qubits_(num_qubits), amps_(std::move(amps)) {}
  std::size_t bit_of(int qubit) const;

  int num_qubits_;
  std::vector<double> amps_;
};

enum class GateKind { kRotationY, kControlledNot };

struct Gate {
  GateKind kind;
  int target;
  int control = -1;  // kControlledNot only
  int slot = -1;     // kRotationY only: index into the parameter vector

  static Gate ry(int target, int slot) {
    return {GateKind::kRotationY, target, -1, slot};
  }
  static Gate cx(int control, int target) {
    return {GateKind::kControlledNot, target, control, -1};
  }
  friend bool operator==(const Gate&, const Gate&) = default;
};

// Ordered gate list in circuit time order (gates[0] acts first).
class CircuitTemplate {
 public:
  CircuitTemplate(int num_qubits, std::vector<Gate> gates);

  int num_qubits() const { return num_qubits_; }
  int num_params() const { return num_params_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t count(GateKind kind) const;

  // One gate per line: "RY q<target> slot=<k>" or "CX q<control> q<target>".
  std::string dump() const;

 private:
  int num_qubits_;
  int num_params_;
  std::vector<Gate> gates_;
};

// Applies `circuit` to `initial` with angles taken from `params` by slot.
// Throws std::invalid_argument on a parameter-count or qubit-count mismatch.
StateVector run_circuit(const CircuitTemplate& circuit,
                        std::span<const double> params,
                        const StateVector& initial);

}  // namespace rqgan

#endif  // RQGAN_SIMULATOR_H_
