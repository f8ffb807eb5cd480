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

/// Local-equivalence invariants of a two-qubit unitary, built from
/// γ(U) = U·(σ_y⊗σ_y)·Uᵀ·(σ_y⊗σ_y). tr γ and tr γ² are unchanged by
/// single-qubit unitaries with unit determinant on either side of U; under a
/// global phase U → e^{iα}U they pick up e^{2iα} and e^{4iα}, so their
/// magnitudes — and |tr γ² + 4 det U| — are full local-equivalence
/// invariants.
struct GammaInvariant {
  Mat4 gamma;
  cplx tr_gamma;
  cplx tr_gamma_sq;
  cplx det_u;
};

GammaInvariant gamma_of(const Mat4& u);

/// Coefficients of the characteristic polynomial of γ(U) for U ∈ SU(4),
/// in descending powers: x⁴ − trγ·x³ + ½(tr²γ − trγ²)·x² − conj(trγ)·x + 1.
std::array<cplx, 5> chi_coefficients(const GammaInvariant& g);

/// Interaction content of a two-qubit unitary: the Weyl-chamber point
/// satisfying π/4 ≥ k1 ≥ k2 ≥ |k3| ≥ 0, with k3 ≥ 0 whenever k1 = π/4
/// (within 1e−10).
struct CanonicalVector {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
};

/// Full interaction decomposition U = e^{iδ}·L·N(k)·R with L and R tensor
/// products of single-qubit unitaries, N(k) = Π_i (cos k_i·I + i sin k_i·
/// σ_i⊗σ_i), and k in the canonical chamber.
struct KakDecomposition {
  double delta = 0.0;
  Mat4 l;
  Mat4 r;
  std::array<double, 3> k{};
};

/// The entangling kernel N(k) = exp(i(k1·XX + k2·YY + k3·ZZ)).
Mat4 canonical_gate(const std::array<double, 3>& k);

/// Decomposes a two-qubit unitary into local factors and its canonical
/// entangling kernel. Throws NotUnitary for non-unitary input and
/// NoConvergence if the decomposition cannot be completed or fails its final
/// reconstruction check (residual ≥ 1e−9).
KakDecomposition kak_decompose(const Mat4& u);

/// The Weyl-chamber point of a two-qubit unitary.
CanonicalVector canonical_vector(const Mat4& u);

/// Minimal number of CNOT gates needed to realize the unitary up to local
/// operations: 0 for tensor products, 1 for the CNOT class (|tr γ| < 1e−8 and
/// |tr γ² + 4 det U| < 1e−8), 2 when k3 vanishes (|k3| < 1e−8), else 3.
int cnot_count(const Mat4& u);

/// Single-qubit tensor factors of a two-qubit unitary K = A⊗B (A on the
/// ancilla, B on the system). Throws SynthesisMismatch if K is not a tensor
/// product within 1e−8.
struct LocalFactors {
  Mat2 a;
  Mat2 b;
};

LocalFactors factor_local(const Mat4& u);

}  // namespace povmc
