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

#include "povmc/linalg.hpp"
#include "povmc/povm.hpp"

namespace povmc {

/// Two-qubit measurement unitary realizing a four-outcome POVM on the system
/// qubit: with the ancilla prepared in |0⟩ and both qubits measured in the
/// computational basis, outcome b = (b_ancilla, b_system) occurs with Born
/// probability ⟨φ_b|ρ|φ_b⟩ where |φ_b⟩ is row b of the first column block,
/// conjugated. Basis order is b_ancilla b_system = 00, 01, 10, 11 (ancilla is
/// the most significant bit).
struct DilationUnitary {
  Mat4 u;

  /// First column block u[:, 0:2] — the isometry fixed by the POVM.
  Mat42 v_block() const;

  /// Second column block u[:, 2:4] — the completion, free up to the residual
  /// gauge freedom.
  Mat42 w_block() const;
};

/// The residual gauge freedom of a dilation: right-multiplication of the
/// completion block by a single-qubit unitary Q = e^{iγ0}R_x(γ1)R_z(γ2)R_x(γ3)
/// together with left-multiplication by the outcome-phase diagonal
/// diag(1, e^{iβ1}, e^{iβ2}, e^{i(β1+β2+β3)}) — neither changes the measured
/// POVM. Angles are stored in (−π, π]. beta0 is a bookkeeping global phase
/// that never enters any transformation or comparison.
struct ThetaDelta {
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta3 = 0.0;
  double beta0 = 0.0;  // metadata only

  /// The seven transformation angles in the order
  /// [γ0, γ1, γ2, γ3, β1, β2, β3] (beta0 excluded).
  std::array<double, 7> as_array() const;
  static ThetaDelta from_array(const std::array<double, 7>& a);
};

/// Wraps an angle into the canonical range (−π, π].
double wrap_angle(double a);

/// Isometry block of the dilation of a four-outcome rank-1 POVM:
/// V[b][i] = conj(φ_b[i]). Satisfies V†V = I exactly when the POVM is
/// complete; throws IncompletePovm when the completeness residual is ≥ 1e−9.
Mat42 build_v(const QubitPovm4& povm);

/// Extends build_v(povm) to a full 4×4 unitary by Gram–Schmidt completion of
/// the remaining two columns.
DilationUnitary build_dilation(const QubitPovm4& povm);

/// Reads the measured POVM back off a dilation unitary: ket b is the
/// conjugated row b of the first column block. Throws NotUnitary if u is not
/// unitary within 1e−10.
QubitPovm4 extract_povm(const DilationUnitary& dilation);

/// Applies the gauge transformation: U ↦ P(β)·U·diag(I₂, Q(γ)) with
/// P(β) = diag(1, e^{iβ2}, e^{iβ1}, e^{i(β1+β2+β3)}) and
/// Q(γ) = e^{iγ0}R_x(γ1)R_z(γ2)R_x(γ3). Preserves the extracted POVM.
DilationUnitary apply_theta(const DilationUnitary& dilation,
                            const ThetaDelta& delta);

/// Closed-form dilation of the builtin Set 1 whose general decomposition uses
/// three entangling gates. c = 0 extracts Set 1 in its builtin element order;
/// c = 1 swaps the last two outcomes.
DilationUnitary set1_dilation(int c);

/// Bell-form dilation of the builtin Set 2:
/// (I ⊗ H) · CNOT(system→ancilla) · (U_A ⊗ I) with
/// U_A = unitary_from_first_column(conj(set2_fiducial())).
DilationUnitary set2_dilation();

/// The unitary [v | v⊥] whose first column is the given unit vector and whose
/// second column is (−conj v₁, conj v₀). Throws NonIsometry if ‖v‖ deviates
/// from 1 by more than 1e−10.
Mat2 unitary_from_first_column(const CVec2& v);

}  // namespace povmc
