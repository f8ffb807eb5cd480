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
#include <cstdint>
#include <random>
#include <vector>

#include "povmc/gates.hpp"
#include "povmc/linalg.hpp"
#include "povmc/povm.hpp"

namespace povmc {

/// Dense row-major density matrix on `qubits` qubits (dimension 2^qubits).
/// Qubit 0 is the most significant bit of the basis index.
struct DensityState {
  int qubits = 0;
  std::vector<cplx> rho;

  int dim() const { return 1 << qubits; }

  cplx& at(int r, int c) {
    return rho[static_cast<std::size_t>(r) * dim() + c];
  }
  const cplx& at(int r, int c) const {
    return rho[static_cast<std::size_t>(r) * dim() + c];
  }

  /// Checks trace = 1 within 1e-9, Hermiticity within 1e-10, and — for
  /// dimensions up to 4, where a dense eigensolve is available — eigenvalues
  /// ≥ −1e-9.  Larger registers get a diagonal non-negativity check instead.
  /// Throws Error describing the first violated condition.
  void validate() const;
};

/// Deterministic random stream: a mersenne-twister engine seeded from a
/// (seed, stream) pair so that independent substreams — one per shot — can be
/// derived reproducibly.  Uniforms take the top 53 bits of the raw draw;
/// normals use a cached Box–Muller transform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Uniform double in [0, 1).
  double uniform();

  /// Normal deviate with the given mean and standard deviation.
  double normal(double mean, double stddev);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Per-qubit relaxation times plus gate/reset/measure durations used to build
/// thermal-relaxation channels.  Entries 0..n-1 of t1/t2 belong to the system
/// qubits in register order; the last entry belongs to the measurement
/// ancilla.  All times are in seconds.
struct NoiseModel {
  std::vector<double> t1;
  std::vector<double> t2;
  double gate_time_1q = 100e-9;
  double gate_time_2q = 300e-9;
  double measure_reset_time = 1000e-9;
  std::uint64_t seed = 0;

  int ancilla_index() const { return static_cast<int>(t1.size()) - 1; }

  /// Draws per-qubit T1/T2 (system qubits plus one ancilla) from a normal
  /// distribution with the given mean and relative standard deviation,
  /// resampling each qubit until 0 < T2 ≤ T1.
  static NoiseModel sample(int system_qubits, std::uint64_t seed,
                           double mean_seconds = 50e-6,
                           double relative_sigma = 0.1);
};

/// Operator-sum (Kraus) representation of a single-qubit channel.
struct KrausChannel {
  std::vector<Mat2> ops;
};

/// Amplitude damping toward |0⟩ with probability 1 − e^{−t/T1} combined with
/// pure dephasing tuned so coherences decay by e^{−t/T2}.  Requires 0 < t and
/// 0 < T2 ≤ T1 (throws InvalidTimes otherwise); the returned Kraus set is
/// trace-preserving to better than 1e-12 by construction.
KrausChannel thermal_relaxation_channel(double duration, double t1, double t2);

/// One shot of a POVM measurement on every system qubit: outcomes[q] ∈
/// {0,1,2,3} is the four-outcome result for qubit q.
struct ShadowRecord {
  std::vector<int> outcomes;
};

/// Lexicographic index of a record's outcome string (qubit 0 is the most
/// significant base-4 digit).
std::uint32_t outcome_index(const ShadowRecord& record);

/// Exact GHZ projector (|0…0⟩ + |1…1⟩)/√2 on 1 ≤ qubits ≤ 12.
/// Throws TooLarge outside that range.
DensityState prepare_ghz(int qubits);

/// GHZ preparation through its H + CNOT-chain circuit with a
/// thermal-relaxation channel applied to each gate's wires after the gate,
/// using that gate's duration and each wire's own T1/T2.
DensityState prepare_ghz(int qubits, const NoiseModel& noise);

/// Noiseless product state (u1|0⟩)^⊗qubits.
DensityState prepare_product(int qubits, const Mat2& u1);

/// ρ ← p·I/2^n + (1−p)·ρ.
DensityState depolarize(const DensityState& state, double p);

/// Measures every system qubit in index order with the given two-wire
/// measurement circuit: adjoin an ancilla in |0⟩⟨0| as the most significant
/// bit, apply the (noisy) circuit, sample the joint computational outcome
/// (b_A, b_S) from the diagonal, project, renormalize, and drop the measured
/// pair from the register.  The outcome index is b = 2·b_A + b_S.  Pass
/// noise = nullptr for the ideal circuit.  One uniform is consumed per system
/// qubit.  Throws ZeroProbabilityBranch if the outcome mass vanishes.
ShadowRecord measure_povm_sequential(const DensityState& state,
                                     const Circuit& circuit,
                                     const NoiseModel* noise, Rng& rng);

/// The four effective single-qubit effects of the (noisy) measurement circuit
/// acting on system qubit `qubit`: the two-wire circuit and its per-gate
/// noise channels are pushed in the Heisenberg picture onto the computational
/// projectors and the ancilla is contracted with |0⟩.  The effects sum to the
/// identity and reproduce the sequential measurement statistics exactly.
std::array<Mat2, 4> effective_effects(const Circuit& circuit,
                                      const NoiseModel* noise, int qubit);

/// tr(ρ · E^(0)_{b_0} ⊗ … ⊗ E^(n−1)_{b_{n−1}}) for every outcome string,
/// returned as a 4^n array indexed lexicographically (qubit 0 major).
std::vector<double> contract_all(
    const DensityState& state,
    const std::vector<std::array<Mat2, 4>>& per_qubit);

/// Outcome distribution of the sequential measurement, computed through the
/// per-qubit effective effects.  Matches the per-shot sequential simulation.
std::vector<double> joint_distribution(const DensityState& state,
                                       const Circuit& circuit,
                                       const NoiseModel* noise);

/// Draws `shots` outcome strings from the distribution, one substream per
/// shot, consuming one uniform per qubit exactly as the sequential path does.
/// Returns lexicographic outcome indices.  Throws ZeroProbabilityBranch if a
/// conditional block carries no mass.
std::vector<std::uint32_t> sample_outcome_indices(
    const std::vector<double>& probabilities, int qubits, std::int64_t shots,
    std::uint64_t seed);

/// Snapshot lookup table: table[b] is the inverse measurement channel applied
/// to element b, so that Σ_b tr(ρΠ_b)·table[b] = ρ for every ρ.  SIC inputs
/// take the closed form 3·Π_b/tr(Π_b) − I; any other informationally complete
/// POVM inverts the 4×4 frame superoperator.  Throws NotIC.
std::array<Mat2, 4> snapshot_table(const QubitPovm4& povm);

/// Closed-form SIC snapshot table (3·Π_b/tr(Π_b) − I); exposed so the two
/// construction routes can be compared directly.
std::array<Mat2, 4> sic_snapshot_table(const QubitPovm4& povm);

/// General dual-frame snapshot table through the Gram-matrix inverse;
/// valid for any informationally complete POVM.  Throws NotIC.
std::array<Mat2, 4> frame_inverse_table(const QubitPovm4& povm);

/// Per-outcome estimator values tr(target · ⊗_q table[b_q]) for all 4^n
/// outcome strings; a shot with outcome index i contributes values[i].
std::vector<double> outcome_values(const DensityState& target, int qubits,
                                   const std::array<Mat2, 4>& table);

struct FidelityEstimate {
  double mean = 0.0;
  double variance = 0.0;  // sample variance of per-shot estimates
  double std_error = 0.0;
};

/// Mean fidelity estimate over the recorded shots: each shot contributes
/// tr(target · ⊗_q table[b_q]).  The target must be pure (Frobenius purity
/// within 1e-6; throws Error otherwise).
FidelityEstimate estimate_fidelity(const DensityState& target,
                                   const std::vector<std::uint32_t>& indices,
                                   int qubits,
                                   const std::array<Mat2, 4>& table);

/// Record-stream overload of estimate_fidelity.
FidelityEstimate estimate_fidelity(const DensityState& target,
                                   const std::vector<ShadowRecord>& records,
                                   const std::array<Mat2, 4>& table);

/// Statistics of the n_d-shot estimator for one batch size.
struct DecadeRow {
  std::int64_t shots = 0;       // batch size n_d
  double mean = 0.0;            // mean of the batch means
  double std_error = 0.0;       // standard error of that mean
  double variance = 0.0;        // sample variance of the batch means
  double mse_vs_ideal = 0.0;    // mean of (batch mean − ideal)²
};

/// Splits the shot stream into consecutive batches of size 10^d for every
/// decade with at least ten full batches, plus a final row covering all
/// shots at once (whose variance and MSE are extrapolated from the per-shot
/// spread).  Rows are ordered by ascending batch size.
std::vector<DecadeRow> decade_summary(
    const std::vector<std::uint32_t>& indices,
    const std::vector<double>& values, double ideal);

/// tr(a·b) — real part; with a pure `a` this is the fidelity ⟨ψ|b|ψ⟩.
double state_overlap(const DensityState& a, const DensityState& b);

}  // namespace povmc
