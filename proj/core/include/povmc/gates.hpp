// Copyright 2026 The povmc Authors
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

#pragma once

#include <array>
#include <vector>

#include "povmc/linalg.hpp"

namespace povmc {

/// The two wires of a measurement circuit. In every 4×4 matrix the ancilla is
/// the most significant bit: basis order b_ancilla b_system = 00, 01, 10, 11.
enum class Wire { Ancilla, System };

enum class GateKind {
  Rx,
  Ry,
  Rz,
  Phase,  // diag(1, e^{iθ})
  X,
  H,
  GenericU2,     // arbitrary single-qubit matrix
  Cnot,
  CRz,           // Rz(θ) on the target when the control is |1⟩
  ControlledU2,  // arbitrary single-qubit matrix on the target when control=|1⟩
};

struct Gate {
  GateKind kind = GateKind::GenericU2;
  Wire target = Wire::System;   // acted-on wire (also the 1-qubit wire)
  Wire control = Wire::Ancilla; // meaningful for Cnot/CRz/ControlledU2 only
  double angle = 0.0;           // Rx/Ry/Rz/Phase/CRz
  Mat2 matrix;                  // GenericU2/ControlledU2 payload

  static Gate rx(Wire w, double a);
  static Gate ry(Wire w, double a);
  static Gate rz(Wire w, double a);
  static Gate phase(Wire w, double a);
  static Gate x(Wire w);
  static Gate h(Wire w);
  static Gate u2(Wire w, const Mat2& m);
  static Gate cnot(Wire control, Wire target);
  static Gate crz(Wire control, Wire target, double a);
  static Gate cu2(Wire control, Wire target, const Mat2& m);
};

/// True for Cnot/CRz/ControlledU2.
bool two_qubit(const Gate& g);

/// The 2×2 matrix of a single-qubit gate. Throws Error for two-qubit kinds.
Mat2 single_qubit_matrix(const Gate& g);

/// Any gate expanded onto the two-wire space.
Mat4 gate_unitary(const Gate& g);

/// Gate list in time order: gates[0] acts first.
struct Circuit {
  std::vector<Gate> gates;

  /// Number of Cnot gates (CRz/ControlledU2 are not counted).
  int cnots() const;
};

/// Product of the expanded gates, time order rightmost-first:
/// U = G_n ··· G_2 · G_1.
Mat4 unitary_of(const Circuit& circuit);

enum class EulerBasis { Zyz, Zxz, Xzx };

/// U = e^{iα}·R_a(θ1)·R_b(θ2)·R_a(θ3) for the axis pair named by the basis,
/// with θ2 ∈ [0, π] and θ3 = 0 on the gimbal-locked boundaries.
struct EulerAngles {
  double alpha = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
};

EulerAngles decompose_1q(const Mat2& u, EulerBasis basis = EulerBasis::Zyz);

/// Factors of the standard controlled-U construction:
/// A·X·B·X·C = e^{−iα}·U and A·B·C = I, so a controlled-U is two CNOTs, the
/// three single-qubit factors, and a Phase(α) on the control.
struct ControlledFactors {
  Mat2 a;
  Mat2 b;
  Mat2 c;
  double alpha = 0.0;
};

ControlledFactors decompose_controlled_u(const Mat2& u);

/// Rewrites the circuit by repeatedly commuting Rz gates forward across a
/// following Cnot on their wire when that wire is the control, and Rx gates
/// forward when that wire is the target, until no move applies. Preserves the
/// circuit unitary exactly.
Circuit commute_rz_rx_through_cnot(const Circuit& circuit);

/// Minimal-CNOT realization of a two-qubit unitary: cnot_count(u) Cnot gates
/// wrapped in single-qubit gates, matching u exactly (global phase included).
/// Throws SynthesisMismatch if the assembled circuit misses u by more than
/// 1e−8.
Circuit synthesize(const Mat4& u);

/// Hardware-friendly measurement circuit for a SIC dilation: U_S and a fixed
/// ancilla rotation in parallel, one Cnot (system control), then H on the
/// system. Outcome b of this circuit corresponds to element
/// practical_outcome_map(c)[b] of the measured SIC set.
Circuit practical_circuit(const Mat2& u_s, int c);

/// Outcome relabeling of the practical circuit: identity for c = 1,
/// (0, 1, 3, 2) for c = 0.
std::array<int, 4> practical_outcome_map(int c);

/// Exact circuit for a dilation written in the gauge-normal form
/// U = R(c)·P(β)·U_bell·(I⊗u_s)·diag(I₂, q): controlled-q, the local layer,
/// Cnot, H, the outcome-phase gates, and for c = 0 a final ancilla-controlled
/// Cnot.
Circuit general_circuit(const Mat2& u_s, int c, double beta1, double beta2,
                        double beta3, const Mat2& q);

}  // namespace povmc
