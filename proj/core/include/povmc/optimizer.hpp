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

#include "povmc/dilation.hpp"
#include "povmc/linalg.hpp"
#include "povmc/povm.hpp"

namespace povmc {

/// One of the 24 outcome relabelings of a two-qubit measurement: a bit-flip
/// layer (digit 1..4: I, X on the system, X on the ancilla, X on both)
/// followed by a CNOT layer (letter 'a'..'f': I, CNOT ancilla-control, CNOT
/// system-control, and their three nontrivial products).
struct RelabelCode {
  int digit = 1;
  char letter = 'a';
};

/// The permutation unitary letter·digit.
Mat4 relabel_unitary(const RelabelCode& code);

/// Outcome permutation realized by the code: entry b is the index carrying
/// the 1 in row b of relabel_unitary(code).
std::array<int, 4> relabel_permutation(const RelabelCode& code);

/// Local parameters aligning a SIC dilation with the builtin Bell-form
/// reference: the system rotation u_s, the ordering bit c, the four frame
/// angles (frame 1 = target, frame 2 = reference), and the residual
/// completion mismatch u_pr on which c was decided.
struct PracticalParams {
  Mat2 u_s;
  int c = 0;
  double alpha11 = 0.0;
  double alpha12 = 0.0;
  double alpha21 = 0.0;
  double alpha22 = 0.0;
  Mat2 u_pr;
};

/// Recovers (u_s, c) such that the target's measured SIC equals the Bell-form
/// circuit's SIC after the system rotation u_s, deciding c = 1 exactly when
/// the completion mismatch is diagonal (off-diagonal magnitudes < 1e−8).
/// Throws NotSic if the dilation does not measure a SIC set.
PracticalParams practical_params(const DilationUnitary& target);

/// Phase and completion-gauge parameters finishing the normal form
/// U = R(c)·P(β)·U_bell·(I⊗u_s)·diag(I₂, q).
struct GeneralParams {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta3 = 0.0;
  Mat2 q;
};

/// Solves for the outcome phases β and the completion rotation q of the
/// normal form, given the alignment parameters. Throws RankDeficient if the
/// completion block loses rank.
GeneralParams general_params(const DilationUnitary& target,
                             const PracticalParams& practical);

/// Gauge angles turning the closed-form Set-1 dilation into a one-CNOT
/// circuit: γ = (0, π, 0, 0), β = (0, 0, (−1)^c·π/2).
ThetaDelta sic_1cnot_theta(int c);

/// Result of the entangling-power search: the gauge angles and the
/// transformed dilation, whose third interaction coefficient vanishes.
struct TwoCnotSearch {
  ThetaDelta theta;
  DilationUnitary optimized;
};

/// Finds gauge angles that bring any minimal IC-POVM dilation into the
/// two-CNOT class (|k3| < 1e−8). Scans γ2, then γ1, then γ3 over 64 points of
/// (−π, π] for a sign change of the odd interaction invariant
/// Im tr γ(·) and bisects to width 1e−12. Throws SearchFailed (reporting the
/// invariant's scanned range) if no crossing yields a valid chamber point.
TwoCnotSearch find_2cnot_theta(const DilationUnitary& base);

}  // namespace povmc
