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

namespace povmc {

/// Single-qubit four-element rank-1 POVM, stored as subnormalized kets:
/// element i is Π_i = |φ_i⟩⟨φ_i|. A valid instance satisfies Σ_i Π_i = I.
struct QubitPovm4 {
  std::array<CVec2, 4> kets;

  /// The rank-1 element |φ_i⟩⟨φ_i|.
  Mat2 element(int i) const;
};

/// Common pairwise Bloch-sphere angle of any four-element SIC set,
/// arccos(−1/3).
inline const double kSicPairwiseAngle = std::acos(-1.0 / 3.0);

/// Weighted Bloch-cone coordinates of one POVM element: the components are
/// a²·(cosθ, sinθ·cosφ, sinθ·sinφ) — axis order (z, x, y) — where a² is the
/// element weight and (θ, φ) the Bloch direction of its ket.
struct EtaVector {
  std::array<double, 3> v{};

  double weight() const;  // ‖v‖ = a²
};

/// Parameters selecting a SIC set: Bloch direction (theta1, phi1) and spin
/// delta of the frame rotation R_z(phi1)·R_y(theta1)·R_z(delta), plus the
/// element-ordering bit c.
struct SicParams {
  double theta1 = 0.0;  // [0, π]
  double phi1 = 0.0;    // [0, 2π)
  double delta = 0.0;   // [0, 2π)
  int c = 0;            // {0, 1}
};

/// Completeness residual ‖Σ_i |φ_i⟩⟨φ_i| − I‖_max. Valid POVMs score < 1e−9.
double completeness_residual(const QubitPovm4& povm);

/// True iff the four elements span the full 2×2 operator space (the 4×4 frame
/// Gram matrix has full rank; singular-value threshold 1e−8).
bool is_ic(const QubitPovm4& povm);

/// True iff all pairwise overlaps satisfy tr(Π_iΠ_j) = (2δ_ij + 1)/12 within
/// 1e−9.
bool is_sic(const QubitPovm4& povm);

/// Largest deviation of tr(Π_iΠ_j) from the symmetric-overlap pattern
/// (2δ_ij + 1)/12; the residual that is_sic compares against 1e−9.
double sic_residual(const QubitPovm4& povm);

/// Builds the unique minimal rank-1 POVM whose first three elements point
/// along the given cone vectors. The fourth vector is the closing sum
/// η₄ = −(η₁+η₂+η₃) and all weights are rescaled so the element weights sum
/// to 2, which makes completeness exact. Ket phases are fixed so the |0⟩
/// amplitude is real non-negative. Throws DegenerateElement if any rescaled
/// weight falls below 1e−12.
QubitPovm4 construct_from_eta(const std::array<EtaVector, 3>& etas);

/// SIC set with kets R_z(phi1)·R_y(theta1)·R_z(delta) applied to the builtin
/// Set-1 kets, taken in the element order selected by c (c = 0 keeps the
/// builtin order, c = 1 swaps the last two elements).
QubitPovm4 construct_sic(const SicParams& params);

/// Orbit of a normalized fiducial ket under the single-qubit displacement
/// operators D_kl = (−i)^{kl}·X^k·Z^l: kets (1/√2)·D_kl|f⟩ in the outcome
/// order (k,l) = (0,0),(0,1),(1,0),(1,1). Throws NotFiducial (reporting the
/// overlap residual) if the resulting set is not a SIC.
QubitPovm4 wh_covariant_sic(const CVec2& fiducial);

/// Fiducial ket generating the builtin Set 2 via wh_covariant_sic:
/// diag(1, e^{i3π/4})·R_x(arccos(1/√3))·|0⟩.
CVec2 set2_fiducial();

enum class ReferenceSet { Set1, Set2 };

/// The two builtin SIC sets. Set 1: |φ₁⟩ = (1/√2)|0⟩ and
/// |φ_j⟩ = (1/√6)(|0⟩ + √2·e^{iθ_j}|1⟩) with θ ∈ {0, −2π/3, +2π/3}.
/// Set 2: the displacement orbit of set2_fiducial().
QubitPovm4 reference_set(ReferenceSet which);

/// SIC set tuned for estimating |ψ₁⟩⟨ψ₁|-type observables: one ket is made
/// proportional to the state orthogonal to psi1 (construct_sic with the
/// orthogonal state's Bloch angles, delta = 0, c = 0).
QubitPovm4 optimal_sic_for_state(const CVec2& psi1);

}  // namespace povmc
