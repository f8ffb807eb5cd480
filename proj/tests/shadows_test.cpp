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

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "povmc/dilation.hpp"
#include "povmc/errors.hpp"
#include "povmc/gates.hpp"
#include "povmc/linalg.hpp"
#include "povmc/povm.hpp"
#include "povmc/shadows.hpp"
#include "test_helpers.hpp"

namespace {

using povmc::cplx;
using povmc::DensityState;
using povmc::Mat2;
using povmc::QubitPovm4;

povmc::Circuit set1_circuit() {
  return povmc::synthesize(povmc::set1_dilation(0).u);
}

TEST_CASE("thermal relaxation channel is trace preserving", "[shadows]") {
  const povmc::KrausChannel channel =
      povmc::thermal_relaxation_channel(150e-9, 48e-6, 37e-6);
  Mat2 sum = Mat2::zero();
  for (const Mat2& k : channel.ops) sum = sum + k.adjoint() * k;
  REQUIRE((sum - Mat2::identity()).max_abs() < 1e-12);
}

TEST_CASE("thermal relaxation has the closed-form decay rates", "[shadows]") {
  const double t1 = 52e-6;
  const double t2 = 31e-6;
  const double duration = 4.2e-6;
  const povmc::KrausChannel channel = povmc::thermal_relaxation_channel(duration, t1, t2);

  auto apply = [&](const Mat2& rho) {
    Mat2 out = Mat2::zero();
    for (const Mat2& k : channel.ops) out = out + k * rho * k.adjoint();
    return out;
  };

  // Excited-state population decays exactly as e^{-t/T1}.
  Mat2 excited = Mat2::zero();
  excited(1, 1) = 1.0;
  const Mat2 relaxed = apply(excited);
  REQUIRE(std::abs(relaxed(1, 1).real() - std::exp(-duration / t1)) < 1e-12);
  REQUIRE(std::abs(relaxed(0, 0).real() - (1.0 - std::exp(-duration / t1))) < 1e-12);
  REQUIRE(std::abs(relaxed(0, 1)) < 1e-15);

  // Coherences decay exactly as e^{-t/T2}.
  Mat2 plus;
  plus(0, 0) = 0.5;
  plus(0, 1) = 0.5;
  plus(1, 0) = 0.5;
  plus(1, 1) = 0.5;
  const Mat2 dephased = apply(plus);
  REQUIRE(std::abs(dephased(0, 1) - 0.5 * std::exp(-duration / t2)) < 1e-12);

  // Vanishing duration acts as the identity channel.
  const povmc::KrausChannel tiny = povmc::thermal_relaxation_channel(1e-15, t1, t2);
  Mat2 moved = Mat2::zero();
  for (const Mat2& k : tiny.ops) moved = moved + k * plus * k.adjoint();
  REQUIRE((moved - plus).max_abs() < 1e-9);
}

TEST_CASE("thermal relaxation rejects unphysical parameters", "[shadows]") {
  REQUIRE_THROWS_AS(povmc::thermal_relaxation_channel(-1e-9, 50e-6, 40e-6),
                    povmc::InvalidTimes);
  REQUIRE_THROWS_AS(povmc::thermal_relaxation_channel(1e-7, 50e-6, 60e-6),
                    povmc::InvalidTimes);
  REQUIRE_THROWS_AS(povmc::thermal_relaxation_channel(1e-7, 50e-6, 0.0),
                    povmc::InvalidTimes);
}

TEST_CASE("random stream is deterministic and substreamed", "[shadows]") {
  povmc::Rng a(1234, 7);
  povmc::Rng b(1234, 7);
  povmc::Rng c(1234, 8);
  bool diverged = false;
  for (int i = 0; i < 100; ++i) {
    const double ua = a.uniform();
    REQUIRE(ua == b.uniform());
    REQUIRE(ua >= 0.0);
    REQUIRE(ua < 1.0);
    diverged = diverged || ua != c.uniform();
  }
  REQUIRE(diverged);

  povmc::Rng d(555);
  double sum = 0.0;
  double sum_sq = 0.0;
  const int samples = 20000;
  for (int i = 0; i < samples; ++i) {
    const double x = d.normal(50e-6, 5e-6);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / samples;
  const double sd = std::sqrt(sum_sq / samples - mean * mean);
  REQUIRE(std::abs(mean - 50e-6) < 0.5e-6);
  REQUIRE(std::abs(sd - 5e-6) < 0.5e-6);
}

TEST_CASE("sampled noise models are well formed", "[shadows]") {
  const povmc::NoiseModel noise = povmc::NoiseModel::sample(6, 99);
  REQUIRE(noise.t1.size() == 7);
  REQUIRE(noise.t2.size() == 7);
  REQUIRE(noise.ancilla_index() == 6);
  for (std::size_t i = 0; i < noise.t1.size(); ++i) {
    REQUIRE(noise.t1[i] > 0.0);
    REQUIRE(noise.t2[i] > 0.0);
    REQUIRE(noise.t2[i] <= noise.t1[i]);
    // Draws concentrate near the 50 µs default mean.
    REQUIRE(noise.t1[i] > 20e-6);
    REQUIRE(noise.t1[i] < 80e-6);
  }
  REQUIRE(noise.gate_time_1q == 100e-9);
  REQUIRE(noise.gate_time_2q == 300e-9);
  REQUIRE(noise.measure_reset_time == 1000e-9);

  const povmc::NoiseModel again = povmc::NoiseModel::sample(6, 99);
  REQUIRE(noise.t1 == again.t1);
  REQUIRE(noise.t2 == again.t2);

  const povmc::NoiseModel other = povmc::NoiseModel::sample(6, 100);
  REQUIRE(noise.t1 != other.t1);
}

TEST_CASE("prepared states are valid density operators", "[shadows]") {
  const DensityState ghz = povmc::prepare_ghz(3);
  ghz.validate();
  REQUIRE(std::abs(ghz.rho[0] - 0.5) < 1e-14);
  REQUIRE(std::abs(ghz.rho[7] - 0.5) < 1e-14);
  REQUIRE(std::abs(ghz.rho[7 * 8] - 0.5) < 1e-14);
  REQUIRE(std::abs(ghz.rho[7 * 8 + 7] - 0.5) < 1e-14);
  REQUIRE(std::abs(ghz.rho[1]) < 1e-15);

  REQUIRE_THROWS_AS(povmc::prepare_ghz(0), povmc::TooLarge);
  REQUIRE_THROWS_AS(povmc::prepare_ghz(13), povmc::TooLarge);

  const DensityState zeros = povmc::prepare_product(2, Mat2::identity());
  zeros.validate();
  REQUIRE(std::abs(zeros.rho[0] - 1.0) < 1e-14);

  const DensityState plus = povmc::prepare_product(2, povmc::hadamard());
  plus.validate();
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      REQUIRE(std::abs(plus.rho[static_cast<std::size_t>(4 * r + c)] - 0.25) < 1e-13);
    }
  }
}

TEST_CASE("noisy preparation degrades the GHZ state", "[shadows]") {
  const povmc::NoiseModel noise = povmc::NoiseModel::sample(4, 3);
  const DensityState noisy = povmc::prepare_ghz(4, noise);
  noisy.validate();
  const DensityState ideal = povmc::prepare_ghz(4);
  const double overlap = povmc::state_overlap(ideal, noisy);
  REQUIRE(overlap < 1.0 - 1e-4);
  REQUIRE(overlap > 0.5);
}

TEST_CASE("depolarize mixes toward the maximally mixed state", "[shadows]") {
  const DensityState ghz = povmc::prepare_ghz(2);
  const double p = 0.3;
  const DensityState mixed = povmc::depolarize(ghz, p);
  mixed.validate();
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const cplx want = (1.0 - p) * ghz.rho[static_cast<std::size_t>(4 * r + c)] +
                        (r == c ? cplx(p / 4.0, 0.0) : cplx(0.0, 0.0));
      REQUIRE(std::abs(mixed.rho[static_cast<std::size_t>(4 * r + c)] - want) < 1e-14);
    }
  }
}

TEST_CASE("single-qubit outcome probabilities are the Born values", "[shadows]") {
  const povmc::Circuit circuit = set1_circuit();

  const DensityState zero = povmc::prepare_product(1, Mat2::identity());
  const std::vector<double> probs = povmc::joint_distribution(zero, circuit, nullptr);
  REQUIRE(probs.size() == 4);
  REQUIRE(std::abs(probs[0] - 0.5) < 1e-9);
  for (int b = 1; b < 4; ++b) REQUIRE(std::abs(probs[static_cast<std::size_t>(b)] - 1.0 / 6.0) < 1e-9);

  DensityState mixed = zero;
  mixed.rho = {cplx(0.5, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(0.5, 0.0)};
  const std::vector<double> uniform = povmc::joint_distribution(mixed, circuit, nullptr);
  for (double q : uniform) REQUIRE(std::abs(q - 0.25) < 1e-12);

  // The probabilities are the traces against the extracted POVM elements.
  const QubitPovm4 measured = povmc::extract_povm(
      povmc::DilationUnitary{povmc::unitary_of(circuit)});
  std::mt19937_64 gen(71);
  const Mat2 u = povmc_test::random_u2(gen);
  const DensityState psi = povmc::prepare_product(1, u);
  const std::vector<double> born = povmc::joint_distribution(psi, circuit, nullptr);
  Mat2 rho;
  rho(0, 0) = psi.rho[0];
  rho(0, 1) = psi.rho[1];
  rho(1, 0) = psi.rho[2];
  rho(1, 1) = psi.rho[3];
  for (int b = 0; b < 4; ++b) {
    const double want = (measured.element(b) * rho).trace().real();
    REQUIRE(std::abs(born[static_cast<std::size_t>(b)] - want) < 1e-12);
  }
}

TEST_CASE("joint distribution factorizes over qubits", "[shadows]") {
  const povmc::Circuit circuit = set1_circuit();
  const DensityState product = povmc::prepare_product(2, povmc::hadamard());
  const std::vector<double> joint = povmc::joint_distribution(product, circuit, nullptr);

  const DensityState single = povmc::prepare_product(1, povmc::hadamard());
  const std::vector<double> marginal = povmc::joint_distribution(single, circuit, nullptr);

  double total = 0.0;
  for (int b0 = 0; b0 < 4; ++b0) {
    for (int b1 = 0; b1 < 4; ++b1) {
      const double want = marginal[static_cast<std::size_t>(b0)] *
                          marginal[static_cast<std::size_t>(b1)];
      REQUIRE(std::abs(joint[static_cast<std::size_t>(4 * b0 + b1)] - want) < 1e-12);
      total += joint[static_cast<std::size_t>(4 * b0 + b1)];
    }
  }
  REQUIRE(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("sequential measurement agrees with the joint distribution", "[shadows]") {
  const povmc::Circuit circuit = set1_circuit();
  const int qubits = 2;
  const DensityState state = povmc::prepare_ghz(qubits);

  for (const bool with_noise : {false, true}) {
    const povmc::NoiseModel noise = povmc::NoiseModel::sample(qubits, 17);
    const povmc::NoiseModel* noise_ptr = with_noise ? &noise : nullptr;

    const std::vector<double> probs = povmc::joint_distribution(state, circuit, noise_ptr);

    const int shots = 4000;
    const std::vector<std::uint32_t> fast =
        povmc::sample_outcome_indices(probs, qubits, shots, 2024);

    std::vector<int> counts(16, 0);
    for (int shot = 0; shot < shots; ++shot) {
      povmc::Rng rng(2024, static_cast<std::uint64_t>(shot));
      const povmc::ShadowRecord record =
          povmc::measure_povm_sequential(state, circuit, noise_ptr, rng);
      const std::uint32_t index = povmc::outcome_index(record);
      // Bit-identical agreement between the two samplers, shot by shot.
      REQUIRE(index == fast[static_cast<std::size_t>(shot)]);
      counts[index] += 1;
    }

    // Frequencies agree with the distribution within five standard errors.
    for (int b = 0; b < 16; ++b) {
      const double p = probs[static_cast<std::size_t>(b)];
      const double se = std::sqrt(std::max(p * (1.0 - p) / shots, 1e-12));
      REQUIRE(std::abs(counts[static_cast<std::size_t>(b)] / double(shots) - p) < 5.0 * se + 1e-3);
    }
  }
}

TEST_CASE("snapshot tables invert the measurement channel", "[shadows]") {
  std::mt19937_64 gen(72);
  std::vector<QubitPovm4> povms = {
      povmc::reference_set(povmc::ReferenceSet::Set1),
      povmc::reference_set(povmc::ReferenceSet::Set2),
      povmc_test::random_eta_povm(gen),
      povmc_test::random_eta_povm(gen),
  };
  const std::array<Mat2, 4> paulis{Mat2::identity(), povmc::pauli_x(), povmc::pauli_y(),
                                   povmc::pauli_z()};
  for (const QubitPovm4& povm : povms) {
    const std::array<Mat2, 4> table = povmc::snapshot_table(povm);
    // Σ_b tr(Π_b ρ)·T_b = ρ on a spanning operator set.
    for (const Mat2& op : paulis) {
      const Mat2 rho = (Mat2::identity() + op) * 0.5;
      Mat2 recon = Mat2::zero();
      for (int b = 0; b < 4; ++b) {
        const double weight = (povm.element(b) * rho).trace().real();
        recon = recon + table[static_cast<std::size_t>(b)] * weight;
      }
      REQUIRE((recon - rho).max_abs() < 1e-9);
    }
  }
}

TEST_CASE("the SIC fast path equals the general inversion", "[shadows]") {
  std::mt19937_64 gen(73);
  std::vector<QubitPovm4> sics = {
      povmc::reference_set(povmc::ReferenceSet::Set1),
      povmc::reference_set(povmc::ReferenceSet::Set2),
  };
  for (int trial = 0; trial < 5; ++trial) {
    sics.push_back(povmc::construct_sic(povmc_test::random_sic_params(gen)));
  }
  for (const QubitPovm4& povm : sics) {
    const std::array<Mat2, 4> closed = povmc::sic_snapshot_table(povm);
    const std::array<Mat2, 4> general = povmc::frame_inverse_table(povm);
    for (int b = 0; b < 4; ++b) {
      REQUIRE((closed[static_cast<std::size_t>(b)] - general[static_cast<std::size_t>(b)])
                  .max_abs() < 1e-10);
      // The closed form for equal-weight SIC elements is 6Π − I.
      const Mat2 direct = povm.element(b) * 6.0 - Mat2::identity();
      REQUIRE((closed[static_cast<std::size_t>(b)] - direct).max_abs() < 1e-9);
    }
  }
}

TEST_CASE("snapshot_table rejects informationally incomplete sets", "[shadows]") {
  QubitPovm4 povm;
  const double s2 = 1.0 / std::sqrt(2.0);
  povm.kets[0] = {cplx(s2, 0.0), cplx(0.0, 0.0)};
  povm.kets[1] = {cplx(s2, 0.0), cplx(0.0, 0.0)};
  povm.kets[2] = {cplx(0.0, 0.0), cplx(s2, 0.0)};
  povm.kets[3] = {cplx(0.0, 0.0), cplx(s2, 0.0)};
  REQUIRE_THROWS_AS(povmc::snapshot_table(povm), povmc::NotIC);
}

TEST_CASE("fidelity estimation is unbiased", "[shadows]") {
  const povmc::Circuit circuit = set1_circuit();
  const int qubits = 2;

  // Prepared |00⟩, targeting the GHZ state: true overlap 1/2.
  const DensityState target = povmc::prepare_ghz(qubits);
  const DensityState rho = povmc::prepare_product(qubits, Mat2::identity());

  const QubitPovm4 measured =
      povmc::extract_povm(povmc::DilationUnitary{povmc::unitary_of(circuit)});
  const std::array<Mat2, 4> table = povmc::snapshot_table(measured);

  const std::vector<double> probs = povmc::joint_distribution(rho, circuit, nullptr);
  const std::int64_t shots = 1000000;
  const std::vector<std::uint32_t> indices =
      povmc::sample_outcome_indices(probs, qubits, shots, 5150);
  const std::vector<double> values = povmc::outcome_values(target, qubits, table);

  const povmc::FidelityEstimate estimate =
      povmc::estimate_fidelity(target, indices, qubits, table);
  REQUIRE(std::abs(estimate.mean - 0.5) < 5.0 * estimate.std_error);

  // The exact mean of the estimator equals the overlap.
  double exact = 0.0;
  for (std::size_t b = 0; b < probs.size(); ++b) exact += probs[b] * values[b];
  REQUIRE(std::abs(exact - 0.5) < 1e-9);
}

TEST_CASE("decade summary reports shrinking variance", "[shadows]") {
  const povmc::Circuit circuit = set1_circuit();
  const int qubits = 2;
  const DensityState target = povmc::prepare_ghz(qubits);

  const QubitPovm4 measured =
      povmc::extract_povm(povmc::DilationUnitary{povmc::unitary_of(circuit)});
  const std::array<Mat2, 4> table = povmc::snapshot_table(measured);
  const std::vector<double> probs = povmc::joint_distribution(target, circuit, nullptr);
  const std::vector<std::uint32_t> indices =
      povmc::sample_outcome_indices(probs, qubits, 100000, 31);
  const std::vector<double> values = povmc::outcome_values(target, qubits, table);

  const std::vector<povmc::DecadeRow> rows = povmc::decade_summary(indices, values, 1.0);
  REQUIRE(rows.size() == 6);
  REQUIRE(rows.front().shots == 1);
  REQUIRE(rows.back().shots == 100000);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double ratio = rows[i].variance / rows[i + 1].variance;
    REQUIRE(ratio > 5.0);
    REQUIRE(ratio < 20.0);
  }

  // All rows describe the same underlying sample mean.
  for (const povmc::DecadeRow& row : rows) {
    REQUIRE(std::abs(row.mean - rows.back().mean) < 1e-9);
  }
}

TEST_CASE("state_overlap is the trace inner product", "[shadows]") {
  const DensityState ghz = povmc::prepare_ghz(2);
  REQUIRE(std::abs(povmc::state_overlap(ghz, ghz) - 1.0) < 1e-12);

  const DensityState mixed = povmc::depolarize(ghz, 1.0);
  REQUIRE(std::abs(povmc::state_overlap(ghz, mixed) - 0.25) < 1e-12);

  const DensityState zero = povmc::prepare_product(2, Mat2::identity());
  REQUIRE(std::abs(povmc::state_overlap(ghz, zero) - 0.5) < 1e-12);
}

TEST_CASE("validate rejects corrupted density operators", "[shadows]") {
  DensityState state = povmc::prepare_ghz(2);
  state.rho[0] = cplx(0.9, 0.0);
  REQUIRE_THROWS_AS(state.validate(), povmc::Error);

  DensityState herm = povmc::prepare_ghz(2);
  herm.rho[1] = cplx(0.3, 0.0);
  REQUIRE_THROWS_AS(herm.validate(), povmc::Error);
}

TEST_CASE("degenerate distributions raise ZeroProbabilityBranch", "[shadows]") {
  const std::vector<double> zeros(16, 0.0);
  REQUIRE_THROWS_AS(povmc::sample_outcome_indices(zeros, 2, 10, 5),
                    povmc::ZeroProbabilityBranch);
}

}  // namespace
