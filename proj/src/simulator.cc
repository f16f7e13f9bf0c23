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

#include "rqgan/simulator.h"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rqgan/linalg.h"

namespace rqgan {

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > 30) {
    throw std::invalid_argument("StateVector: qubit count must be in 1..30");
  }
  amps_.assign(std::size_t{1} << num_qubits, 0.0);
  amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<double> amplitudes,
                                         double norm_tol) {
  const std::size_t n = amplitudes.size();
  if (n < 2 || (n & (n - 1)) != 0) {
    throw std::invalid_argument(
        "StateVector: amplitude count must be a power of two >= 2");
  }
  const double nrm = rqgan::norm(amplitudes);
  if (!std::isfinite(nrm) || std::abs(nrm - 1.0) > norm_tol) {
    throw std::invalid_argument("StateVector: amplitudes are not unit norm");
  }
  int q = 0;
  while ((std::size_t{1} << q) < n) ++q;
  return StateVector(q, std::move(amplitudes));
}

std::size_t StateVector::bit_of(int qubit) const {
  if (qubit < 0 || qubit >= num_qubits_) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) +
                            " out of range for " + std::to_string(num_qubits_) +
                            " qubits");
  }
  return std::size_t{1} << (num_qubits_ - 1 - qubit);
}

void StateVector::apply_ry(int target, double angle) {
  const std::size_t stride = bit_of(target);
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const std::size_t dim = amps_.size();
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const double a0 = amps_[i];
      const double a1 = amps_[i + stride];
      amps_[i] = c * a0 - s * a1;
      amps_[i + stride] = s * a0 + c * a1;
    }
  }
}

void StateVector::apply_cx(int control, int target) {
  const std::size_t cbit = bit_of(control);
  const std::size_t tbit = bit_of(target);
  if (cbit == tbit) {
    throw std::invalid_argument("apply_cx: control equals target");
  }
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
  }
}

double StateVector::expect_z(int qubit) const {
  const std::size_t bit = bit_of(qubit);
  double acc = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    const double p = amps_[i] * amps_[i];
    acc += (i & bit) ? -p : p;
  }
  return acc;
}

double StateVector::norm() const { return rqgan::norm(amps_); }

CircuitTemplate::CircuitTemplate(int num_qubits, std::vector<Gate> gates)
    : num_qubits_(num_qubits), num_params_(0), gates_(std::move(gates)) {
  if (num_qubits < 1) {
    throw std::invalid_argument("CircuitTemplate: need at least one qubit");
  }
  std::set<int> slots;
  for (const Gate& g : gates_) {
    if (g.target < 0 || g.target >= num_qubits) {
      throw std::out_of_range("CircuitTemplate: gate target out of range");
    }
    if (g.kind == GateKind::kControlledNot) {
      if (g.control < 0 || g.control >= num_qubits) {
        throw std::out_of_range("CircuitTemplate: gate control out of range");
      }
      if (g.control == g.target) {
        throw std::invalid_argument("CircuitTemplate: CX control equals target");
      }
    } else {
      if (g.slot < 0) {
        throw std::invalid_argument("CircuitTemplate: negative angle slot");
      }
      slots.insert(g.slot);
    }
  }
  // Slots must be exactly 0..k-1 so that num_params counts distinct slots.
  if (!slots.empty() && *slots.rbegin() != static_cast<int>(slots.size()) - 1) {
    throw std::invalid_argument("CircuitTemplate: angle slots are not dense");
  }
  num_params_ = static_cast<int>(slots.size());
}

std::size_t CircuitTemplate::count(GateKind kind) const {
  std::size_t n = 0;
  for (const Gate& g : gates_) n += (g.kind == kind);
  return n;
}

std::string CircuitTemplate::dump() const {
  std::ostringstream out;
  for (const Gate& g : gates_) {
    if (g.kind == GateKind::kRotationY) {
      out << "RY q" << g.target << " slot=" << g.slot << '\n';
    } else {
      out << "CX q" << g.control << " q" << g.target << '\n';
    }
  }
  return out.str();
}

StateVector run_circuit(const CircuitTemplate& circuit,
                        std::span<const double> params,
                        const StateVector& initial) {
  if (static_cast<int>(params.size()) != circuit.num_params()) {
    throw std::invalid_argument(
        "run_circuit: expected " + std::to_string(circuit.num_params()) +
        " parameters, got " + std::to_string(params.size()));
  }
  if (initial.num_qubits() != circuit.num_qubits()) {
    throw std::invalid_argument("run_circuit: qubit count mismatch");
  }
  StateVector state = initial;
  for (const Gate& g : circuit.gates()) {
    if (g.kind == GateKind::kRotationY) {
      state.apply_ry(g.target, params[g.slot]);
    } else {
      state.apply_cx(g.control, g.target);
    }
  }
  return state;
}

}  // namespace rqgan
