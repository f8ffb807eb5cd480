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

#include "povmc/shadows.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "povmc/errors.hpp"

namespace povmc {

namespace {

constexpr int kMaxQubits = 12;
constexpr double kMassFloor = 1e-15;

std::uint64_t splitmix_round(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  x = splitmix_round(x);
  x = splitmix_round(x + 0x9E3779B97F4A7C15ULL);
  return x;
}

// ρ ← (U on one bit)·ρ, where `stride` is the bit's place value.
void left_apply_bit(std::vector<cplx>& m, int dim, int stride, const Mat2& u) {
  for (int r0 = 0; r0 < dim; ++r0) {
    if (r0 & stride) continue;
    const int r1 = r0 | stride;
    cplx* row0 = m.data() + static_cast<std::size_t>(r0) * dim;
    cplx* row1 = m.data() + static_cast<std::size_t>(r1) * dim;
    for (int c = 0; c < dim; ++c) {
      const cplx x0 = row0[c];
      const cplx x1 = row1[c];
      row0[c] = u(0, 0) * x0 + u(0, 1) * x1;
      row1[c] = u(1, 0) * x0 + u(1, 1) * x1;
    }
  }
}

// ρ ← ρ·(U on one bit)†.
void right_apply_bit_dagger(std::vector<cplx>& m, int dim, int stride,
                            const Mat2& u) {
  for (int r = 0; r < dim; ++r) {
    cplx* row = m.data() + static_cast<std::size_t>(r) * dim;
    for (int c0 = 0; c0 < dim; ++c0) {
      if (c0 & stride) continue;
      const int c1 = c0 | stride;
      const cplx y0 = row[c0];
      const cplx y1 = row[c1];
      row[c0] = y0 * std::conj(u(0, 0)) + y1 * std::conj(u(0, 1));
      row[c1] = y0 * std::conj(u(1, 0)) + y1 * std::conj(u(1, 1));
    }
  }
}

// ρ ← AρA† for a 2×2 operator A acting on one bit (A need not be unitary).
void conjugate_bit(std::vector<cplx>& m, int dim, int stride, const Mat2& a) {
  left_apply_bit(m, dim, stride, a);
  right_apply_bit_dagger(m, dim, stride, a);
}

// ρ ← Σ_k KρK† on one bit.
void channel_bit(std::vector<cplx>& m, int dim, int stride,
                 const KrausChannel& ch) {
  std::vector<cplx> acc(m.size(), cplx(0.0));
  std::vector<cplx> term;
  for (const Mat2& k : ch.ops) {
    term = m;
    conjugate_bit(term, dim, stride, k);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += term[i];
  }
  m = std::move(acc);
}

// ρ ← (U⊗I)ρ(U⊗I)† where the 4×4 U acts on the two most significant bits.
void conjugate_top_pair(std::vector<cplx>& m, int dim, const Mat4& u) {
  const int q = dim / 4;
  for (int j = 0; j < q; ++j) {
    for (int c = 0; c < dim; ++c) {
      cplx x[4];
      for (int a = 0; a < 4; ++a)
        x[a] = m[static_cast<std::size_t>(a * q + j) * dim + c];
      for (int a = 0; a < 4; ++a) {
        cplx s = 0.0;
        for (int b = 0; b < 4; ++b) s += u(a, b) * x[b];
        m[static_cast<std::size_t>(a * q + j) * dim + c] = s;
      }
    }
  }
  for (int r = 0; r < dim; ++r) {
    cplx* row = m.data() + static_cast<std::size_t>(r) * dim;
    for (int j = 0; j < q; ++j) {
      cplx y[4];
      for (int b = 0; b < 4; ++b) y[b] = row[b * q + j];
      for (int b = 0; b < 4; ++b) {
        cplx s = 0.0;
        for (int a = 0; a < 4; ++a) s += y[a] * std::conj(u(b, a));
        row[b * q + j] = s;
      }
    }
  }
}

// In-place CNOT conjugation given the control and target place values.
void apply_cnot_bits(std::vector<cplx>& m, int dim, int control_stride,
                     int target_stride) {
  for (int i = 0; i < dim; ++i) {
    if ((i & control_stride) && !(i & target_stride)) {
      cplx* a = m.data() + static_cast<std::size_t>(i) * dim;
      cplx* b = m.data() + static_cast<std::size_t>(i | target_stride) * dim;
      std::swap_ranges(a, a + dim, b);
    }
  }
  for (int r = 0; r < dim; ++r) {
    cplx* row = m.data() + static_cast<std::size_t>(r) * dim;
    for (int i = 0; i < dim; ++i) {
      if ((i & control_stride) && !(i & target_stride))
        std::swap(row[i], row[i | target_stride]);
    }
  }
}

void check_noise_register(const NoiseModel& noise, int system_qubits) {
  if (noise.t1.size() != noise.t2.size())
    throw Error("noise model T1/T2 lists differ in length (" +
                std::to_string(noise.t1.size()) + " vs " +
                std::to_string(noise.t2.size()) + ")");
  if (static_cast<int>(noise.t1.size()) < system_qubits + 1)
    throw Error("noise model covers " + std::to_string(noise.t1.size()) +
                " qubits but the register needs " +
                std::to_string(system_qubits) + " plus an ancilla");
}

// One entry of the flattened measurement pipeline in forward time order:
// either a two-wire gate or a single-wire noise channel.
struct PipelineStep {
  bool is_gate = false;
  Mat4 gate;
  KrausChannel channel;
  Wire wire = Wire::Ancilla;
};

// The forward-time sequence the sequential simulator executes for one system
// qubit: ancilla reset noise, each gate followed by per-wire channels with
// that gate's duration, then measure-duration channels on both wires.
std::vector<PipelineStep> measurement_pipeline(const Circuit& circuit,
                                               const NoiseModel* noise,
                                               int qubit) {
  std::vector<PipelineStep> steps;
  const auto push_gate = [&steps](const Mat4& g) {
    PipelineStep s;
    s.is_gate = true;
    s.gate = g;
    steps.push_back(std::move(s));
  };
  const auto push_channel = [&steps, noise, qubit](double duration, Wire w) {
    const int idx =
        w == Wire::Ancilla ? noise->ancilla_index() : qubit;
    PipelineStep s;
    s.channel =
        thermal_relaxation_channel(duration, noise->t1[idx], noise->t2[idx]);
    s.wire = w;
    steps.push_back(std::move(s));
  };
  if (noise) push_channel(noise->measure_reset_time, Wire::Ancilla);
  for (const Gate& g : circuit.gates) {
    push_gate(gate_unitary(g));
    if (!noise) continue;
    if (two_qubit(g)) {
      push_channel(noise->gate_time_2q, Wire::Ancilla);
      push_channel(noise->gate_time_2q, Wire::System);
    } else {
      push_channel(noise->gate_time_1q, g.target);
    }
  }
  if (noise) {
    push_channel(noise->measure_reset_time, Wire::Ancilla);
    push_channel(noise->measure_reset_time, Wire::System);
  }
  return steps;
}

// Eigenvalues of a 4x4 Hermitian matrix by cyclic Jacobi rotations. Robust to
// repeated eigenvalues, unlike the phase-sorted general eigensolver.
std::array<double, 4> hermitian_eigenvalues(Mat4 a) {
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off < 1e-15) break;
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        const double r = std::abs(a(p, q));
        if (r < 1e-18) continue;
        // Absorb the phase of a(p,q), then zero the pair with a real
        // symmetric Jacobi rotation.
        const double phi = std::arg(a(p, q));
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        Mat4 v = Mat4::identity();
        v(p, p) = c;
        v(p, q) = s;
        v(q, p) = -s * std::polar(1.0, -phi);
        v(q, q) = c * std::polar(1.0, -phi);
        a = v.adjoint() * a * v;
      }
    }
  }
  return {a(0, 0).real(), a(1, 1).real(), a(2, 2).real(), a(3, 3).real()};
}

}  // namespace

void DensityState::validate() const {
  if (qubits < 1 || qubits > kMaxQubits)
    throw TooLarge("density state has " + std::to_string(qubits) +
                   " qubits; supported range is 1.." +
                   std::to_string(kMaxQubits));
  const int d = dim();
  if (rho.size() != static_cast<std::size_t>(d) * d)
    throw Error("density storage holds " + std::to_string(rho.size()) +
                " entries; expected " + std::to_string(d) + "x" +
                std::to_string(d));
  cplx tr = 0.0;
  for (int i = 0; i < d; ++i) tr += at(i, i);
  if (std::abs(tr - 1.0) > 1e-9)
    throw Error("density trace deviates from one by " +
                std::to_string(std::abs(tr - 1.0)));
  double herm = 0.0;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      herm = std::max(herm, std::abs(at(r, c) - std::conj(at(c, r))));
  if (herm > 1e-10)
    throw Error("density is not Hermitian; worst asymmetry " +
                std::to_string(herm));
  double min_eig = 0.0;
  if (d == 2) {
    const double h = 0.5 * (at(0, 0) + at(1, 1)).real();
    const double det = (at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0)).real();
    min_eig = h - std::sqrt(std::max(0.0, h * h - det));
  } else if (d == 4) {
    Mat4 m;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) m(r, c) = at(r, c);
    const std::array<double, 4> eigs = hermitian_eigenvalues(m);
    min_eig = *std::min_element(eigs.begin(), eigs.end());
  } else {
    // Dense eigensolves stop at dimension 4; fall back to the necessary
    // condition that every diagonal entry is non-negative.
    for (int i = 0; i < d; ++i) min_eig = std::min(min_eig, at(i, i).real());
  }
  if (min_eig < -1e-9)
    throw Error("density has negative weight " + std::to_string(min_eig));
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : engine_(mix_seed(seed, stream)) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal(double mean, double stddev) {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return mean + stddev * cached_normal_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return mean + stddev * radius * std::cos(angle);
}

NoiseModel NoiseModel::sample(int system_qubits, std::uint64_t seed,
                              double mean_seconds, double relative_sigma) {
  if (system_qubits < 1 || system_qubits > kMaxQubits)
    throw TooLarge("noise model requested for " +
                   std::to_string(system_qubits) + " system qubits");
  if (!(mean_seconds > 0.0))
    throw InvalidTimes("relaxation-time mean must be positive");
  NoiseModel model;
  model.seed = seed;
  Rng rng(seed);
  const double sigma = relative_sigma * mean_seconds;
  for (int q = 0; q <= system_qubits; ++q) {
    double t1 = 0.0;
    double t2 = 0.0;
    do {
      t1 = rng.normal(mean_seconds, sigma);
      t2 = rng.normal(mean_seconds, sigma);
    } while (!(t2 > 0.0 && t2 <= t1));
    model.t1.push_back(t1);
    model.t2.push_back(t2);
  }
  return model;
}

KrausChannel thermal_relaxation_channel(double duration, double t1,
                                        double t2) {
  if (!(duration > 0.0))
    throw InvalidTimes("channel duration must be positive, got " +
                       std::to_string(duration));
  if (!(t1 > 0.0 && t2 > 0.0 && t2 <= t1))
    throw InvalidTimes("relaxation times need 0 < T2 <= T1, got T1=" +
                       std::to_string(t1) + " T2=" + std::to_string(t2));
  const double p_relax = 1.0 - std::exp(-duration / t1);
  // Coherences decay by e^{−t/T2}: amplitude damping alone contributes
  // e^{−t/(2T1)}, and a phase flip with probability p_z supplies the rest
  // through the factor 1 − 2p_z.
  const double residual = std::exp(-duration / t2 + duration / (2.0 * t1));
  const double p_z = 0.5 * (1.0 - residual);
  Mat2 damp0;
  damp0(0, 0) = 1.0;
  damp0(1, 1) = std::sqrt(1.0 - p_relax);
  Mat2 damp1;
  damp1(0, 1) = std::sqrt(p_relax);
  const double keep = std::sqrt(1.0 - p_z);
  const double flip = std::sqrt(p_z);
  KrausChannel ch;
  ch.ops.push_back(damp0 * cplx(keep));
  ch.ops.push_back(damp1 * cplx(keep));
  ch.ops.push_back(pauli_z() * damp0 * cplx(flip));
  ch.ops.push_back(pauli_z() * damp1 * cplx(flip));
  return ch;
}

std::uint32_t outcome_index(const ShadowRecord& record) {
  const int n = static_cast<int>(record.outcomes.size());
  if (n < 1 || n > kMaxQubits)
    throw TooLarge("outcome record covers " + std::to_string(n) + " qubits");
  std::uint32_t idx = 0;
  for (const int b : record.outcomes) {
    if (b < 0 || b > 3)
      throw Error("outcome index " + std::to_string(b) + " out of range");
    idx = idx * 4 + static_cast<std::uint32_t>(b);
  }
  return idx;
}

namespace {

DensityState ghz_impl(int qubits, const NoiseModel* noise) {
  if (qubits < 1 || qubits > kMaxQubits)
    throw TooLarge("GHZ preparation supports 1.." +
                   std::to_string(kMaxQubits) + " qubits, got " +
                   std::to_string(qubits));
  if (noise) check_noise_register(*noise, qubits);
  DensityState state;
  state.qubits = qubits;
  const int d = 1 << qubits;
  state.rho.assign(static_cast<std::size_t>(d) * d, cplx(0.0));
  state.rho[0] = 1.0;
  const int top = d / 2;
  conjugate_bit(state.rho, d, top, hadamard());
  if (noise)
    channel_bit(state.rho, d, top,
                thermal_relaxation_channel(noise->gate_time_1q, noise->t1[0],
                                           noise->t2[0]));
  for (int i = 0; i + 1 < qubits; ++i) {
    const int control = 1 << (qubits - 1 - i);
    const int target = control >> 1;
    apply_cnot_bits(state.rho, d, control, target);
    if (noise) {
      channel_bit(state.rho, d, control,
                  thermal_relaxation_channel(noise->gate_time_2q,
                                             noise->t1[i], noise->t2[i]));
      channel_bit(state.rho, d, target,
                  thermal_relaxation_channel(noise->gate_time_2q,
                                             noise->t1[i + 1],
                                             noise->t2[i + 1]));
    }
  }
  return state;
}

}  // namespace

DensityState prepare_ghz(int qubits) { return ghz_impl(qubits, nullptr); }

DensityState prepare_ghz(int qubits, const NoiseModel& noise) {
  return ghz_impl(qubits, &noise);
}

DensityState prepare_product(int qubits, const Mat2& u1) {
  if (qubits < 1 || qubits > kMaxQubits)
    throw TooLarge("product preparation supports 1.." +
                   std::to_string(kMaxQubits) + " qubits, got " +
                   std::to_string(qubits));
  const int d = 1 << qubits;
  std::vector<cplx> amp(static_cast<std::size_t>(d));
  amp[0] = 1.0;
  int filled = 1;
  for (int q = 0; q < qubits; ++q) {
    for (int i = filled - 1; i >= 0; --i) {
      const cplx base = amp[i];
      amp[static_cast<std::size_t>(2 * i)] = base * u1(0, 0);
      amp[static_cast<std::size_t>(2 * i + 1)] = base * u1(1, 0);
    }
    filled *= 2;
  }
  DensityState state;
  state.qubits = qubits;
  state.rho.resize(static_cast<std::size_t>(d) * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      state.rho[static_cast<std::size_t>(r) * d + c] =
          amp[r] * std::conj(amp[c]);
  return state;
}

DensityState depolarize(const DensityState& state, double p) {
  DensityState out = state;
  const int d = out.dim();
  const cplx keep(1.0 - p);
  for (cplx& x : out.rho) x *= keep;
  const double floor = p / d;
  for (int i = 0; i < d; ++i) out.at(i, i) += floor;
  return out;
}

ShadowRecord measure_povm_sequential(const DensityState& state,
                                     const Circuit& circuit,
                                     const NoiseModel* noise, Rng& rng) {
  const int n = state.qubits;
  if (n < 1 || n > kMaxQubits)
    throw TooLarge("sequential measurement supports 1.." +
                   std::to_string(kMaxQubits) + " qubits, got " +
                   std::to_string(n));
  if (noise) check_noise_register(*noise, n);
  std::vector<cplx> cur = state.rho;
  int d = state.dim();
  ShadowRecord record;
  record.outcomes.resize(n);
  for (int q = 0; q < n; ++q) {
    // Measured qubit q is the current register MSB; the ancilla is adjoined
    // above it.
    const int jd = 2 * d;
    std::vector<cplx> joint(static_cast<std::size_t>(jd) * jd, cplx(0.0));
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        joint[static_cast<std::size_t>(r) * jd + c] =
            cur[static_cast<std::size_t>(r) * d + c];
    const int anc_stride = d;
    const int sys_stride = d / 2;
    const std::vector<PipelineStep> steps =
        measurement_pipeline(circuit, noise, q);
    for (const PipelineStep& s : steps) {
      if (s.is_gate) {
        conjugate_top_pair(joint, jd, s.gate);
      } else {
        const int stride = s.wire == Wire::Ancilla ? anc_stride : sys_stride;
        channel_bit(joint, jd, stride, s.channel);
      }
    }
    const int quarter = jd / 4;
    double mass[4];
    double total = 0.0;
    for (int b = 0; b < 4; ++b) {
      double w = 0.0;
      for (int j = 0; j < quarter; ++j) {
        const int idx = b * quarter + j;
        w += joint[static_cast<std::size_t>(idx) * jd + idx].real();
      }
      mass[b] = std::max(0.0, w);
      total += mass[b];
    }
    if (total < kMassFloor)
      throw ZeroProbabilityBranch(
          "outcome mass " + std::to_string(total) + " at qubit " +
          std::to_string(q) + " — state corrupted");
    const double target = rng.uniform() * total;
    int b = -1;
    double cum = 0.0;
    for (int v = 0; v < 4; ++v) {
      cum += mass[v];
      if (cum > target) {
        b = v;
        break;
      }
    }
    if (b < 0) {
      for (int v = 3; v >= 0; --v) {
        if (mass[v] > 0.0) {
          b = v;
          break;
        }
      }
    }
    std::vector<cplx> next(static_cast<std::size_t>(quarter) * quarter);
    for (int j = 0; j < quarter; ++j)
      for (int k = 0; k < quarter; ++k)
        next[static_cast<std::size_t>(j) * quarter + k] =
            joint[static_cast<std::size_t>(b * quarter + j) * jd +
                  (b * quarter + k)] /
            mass[b];
    cur = std::move(next);
    d = quarter;
    record.outcomes[q] = b;
  }
  return record;
}

std::array<Mat2, 4> effective_effects(const Circuit& circuit,
                                      const NoiseModel* noise, int qubit) {
  if (noise) {
    check_noise_register(*noise, qubit + 1);
    if (qubit < 0 || qubit >= noise->ancilla_index())
      throw Error("qubit index " + std::to_string(qubit) +
                  " outside the noise model's system range");
  }
  const std::vector<PipelineStep> steps =
      measurement_pipeline(circuit, noise, qubit);
  // Expand each channel's Kraus set onto the two-wire space once.
  std::vector<std::vector<Mat4>> kraus4(steps.size());
  const Mat2 id2 = Mat2::identity();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].is_gate) continue;
    for (const Mat2& k : steps[i].channel.ops)
      kraus4[i].push_back(steps[i].wire == Wire::Ancilla ? kron(k, id2)
                                                         : kron(id2, k));
  }
  std::array<Mat2, 4> effects;
  for (int b = 0; b < 4; ++b) {
    Mat4 e;
    e(b, b) = 1.0;
    for (std::size_t i = steps.size(); i-- > 0;) {
      if (steps[i].is_gate) {
        e = steps[i].gate.adjoint() * e * steps[i].gate;
      } else {
        Mat4 acc;
        for (const Mat4& k : kraus4[i]) acc = acc + k.adjoint() * e * k;
        e = acc;
      }
    }
    Mat2 reduced;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) reduced(r, c) = e(r, c);
    effects[b] = reduced;
  }
  return effects;
}

std::vector<double> contract_all(
    const DensityState& state,
    const std::vector<std::array<Mat2, 4>>& per_qubit) {
  const int n = state.qubits;
  if (n < 1 || n > kMaxQubits)
    throw TooLarge("contraction supports 1.." + std::to_string(kMaxQubits) +
                   " qubits, got " + std::to_string(n));
  if (static_cast<int>(per_qubit.size()) != n)
    throw Error("contraction got " + std::to_string(per_qubit.size()) +
                " per-qubit operator sets for " + std::to_string(n) +
                " qubits");
  std::vector<double> out(std::size_t(1) << (2 * n));
  std::vector<std::vector<cplx>> scratch(n);
  for (int level = 0; level < n; ++level) {
    const std::size_t half = std::size_t(1) << (n - 1 - level);
    scratch[level].resize(half * half);
  }
  const auto recurse = [&](const auto& self, const cplx* m, int dim,
                           int level, std::size_t offset) -> void {
    if (level == n) {
      out[offset] = m[0].real();
      return;
    }
    const int half = dim / 2;
    const std::size_t block = std::size_t(1) << (2 * (n - 1 - level));
    for (int b = 0; b < 4; ++b) {
      const Mat2& e = per_qubit[level][b];
      std::vector<cplx>& tgt = scratch[level];
      for (int j = 0; j < half; ++j) {
        const cplx* row_low = m + static_cast<std::size_t>(j) * dim;
        const cplx* row_high = m + static_cast<std::size_t>(half + j) * dim;
        cplx* trow = tgt.data() + static_cast<std::size_t>(j) * half;
        for (int k = 0; k < half; ++k) {
          trow[k] = e(0, 0) * row_low[k] + e(1, 0) * row_low[half + k] +
                    e(0, 1) * row_high[k] + e(1, 1) * row_high[half + k];
        }
      }
      self(self, tgt.data(), half, level + 1, offset + b * block);
    }
  };
  recurse(recurse, state.rho.data(), state.dim(), 0, 0);
  return out;
}

std::vector<double> joint_distribution(const DensityState& state,
                                       const Circuit& circuit,
                                       const NoiseModel* noise) {
  std::vector<std::array<Mat2, 4>> effects;
  effects.reserve(state.qubits);
  if (noise) {
    check_noise_register(*noise, state.qubits);
    for (int q = 0; q < state.qubits; ++q)
      effects.push_back(effective_effects(circuit, noise, q));
  } else {
    const std::array<Mat2, 4> ideal = effective_effects(circuit, nullptr, 0);
    for (int q = 0; q < state.qubits; ++q) effects.push_back(ideal);
  }
  return contract_all(state, effects);
}

std::vector<std::uint32_t> sample_outcome_indices(
    const std::vector<double>& probabilities, int qubits, std::int64_t shots,
    std::uint64_t seed) {
  if (qubits < 1 || qubits > kMaxQubits)
    throw TooLarge("sampling supports 1.." + std::to_string(kMaxQubits) +
                   " qubits, got " + std::to_string(qubits));
  const std::size_t size = std::size_t(1) << (2 * qubits);
  if (probabilities.size() != size)
    throw Error("distribution holds " + std::to_string(probabilities.size()) +
                " entries; expected " + std::to_string(size));
  if (shots < 0) throw Error("shot count must be non-negative");
  std::vector<double> prefix(size + 1, 0.0);
  for (std::size_t i = 0; i < size; ++i)
    prefix[i + 1] = prefix[i] + std::max(0.0, probabilities[i]);
  std::vector<std::uint32_t> out;
  out.reserve(static_cast<std::size_t>(shots));
  for (std::int64_t shot = 0; shot < shots; ++shot) {
    Rng rng(seed, static_cast<std::uint64_t>(shot));
    std::size_t lo = 0;
    std::size_t len = size;
    double prev_mass = 1.0;
    for (int q = 0; q < qubits; ++q) {
      const double mass = prefix[lo + len] - prefix[lo];
      // The conditional outcome mass mirrors the renormalized per-qubit
      // total of the sequential path.
      if (mass / prev_mass < kMassFloor)
        throw ZeroProbabilityBranch("conditional outcome mass " +
                                    std::to_string(mass / prev_mass) +
                                    " at qubit " + std::to_string(q) +
                                    " — state corrupted");
      const std::size_t block = len / 4;
      const double target = prefix[lo] + rng.uniform() * mass;
      int b = 0;
      while (b < 3 && prefix[lo + (b + 1) * block] <= target) ++b;
      while (b > 0 &&
             !(prefix[lo + (b + 1) * block] - prefix[lo + b * block] > 0.0))
        --b;
      lo += static_cast<std::size_t>(b) * block;
      len = block;
      prev_mass = mass;
    }
    out.push_back(static_cast<std::uint32_t>(lo));
  }
  return out;
}

std::array<Mat2, 4> sic_snapshot_table(const QubitPovm4& povm) {
  std::array<Mat2, 4> table;
  const Mat2 id = Mat2::identity();
  for (int b = 0; b < 4; ++b) {
    const Mat2 pi = povm.element(b);
    const double weight = pi.trace().real();
    if (weight < 1e-12)
      throw DegenerateElement("snapshot closed form needs nonvanishing "
                              "element weights; element " +
                              std::to_string(b) + " has trace " +
                              std::to_string(weight));
    table[b] = pi * cplx(3.0 / weight) - id;
  }
  return table;
}

std::array<Mat2, 4> frame_inverse_table(const QubitPovm4& povm) {
  if (!is_ic(povm))
    throw NotIC("POVM is not informationally complete; "
                "its frame superoperator is singular");
  Mat4 gram;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      gram(a, b) = (povm.element(a) * povm.element(b)).trace();
  const Mat4 inv = inverse4(gram);
  std::array<Mat2, 4> table;
  for (int b = 0; b < 4; ++b) {
    Mat2 acc;
    for (int a = 0; a < 4; ++a) acc = acc + povm.element(a) * inv(a, b);
    table[b] = acc;
  }
  return table;
}

std::array<Mat2, 4> snapshot_table(const QubitPovm4& povm) {
  if (!is_ic(povm))
    throw NotIC("POVM is not informationally complete; "
                "snapshots cannot reconstruct states from it");
  if (is_sic(povm)) return sic_snapshot_table(povm);
  return frame_inverse_table(povm);
}

std::vector<double> outcome_values(const DensityState& target, int qubits,
                                   const std::array<Mat2, 4>& table) {
  if (target.qubits != qubits)
    throw Error("target covers " + std::to_string(target.qubits) +
                " qubits; expected " + std::to_string(qubits));
  const std::vector<std::array<Mat2, 4>> per_qubit(
      static_cast<std::size_t>(qubits), table);
  return contract_all(target, per_qubit);
}

namespace {

void check_pure(const DensityState& target) {
  double frob_sq = 0.0;
  for (const cplx& x : target.rho) frob_sq += std::norm(x);
  if (std::abs(frob_sq - 1.0) > 1e-6)
    throw Error("fidelity target must be pure; tr(rho^2) = " +
                std::to_string(frob_sq));
}

}  // namespace

FidelityEstimate estimate_fidelity(const DensityState& target,
                                   const std::vector<std::uint32_t>& indices,
                                   int qubits,
                                   const std::array<Mat2, 4>& table) {
  if (indices.empty()) throw Error("fidelity estimate needs at least one shot");
  check_pure(target);
  const std::vector<double> values = outcome_values(target, qubits, table);
  double mean = 0.0;
  double m2 = 0.0;
  std::int64_t count = 0;
  for (const std::uint32_t idx : indices) {
    if (idx >= values.size())
      throw Error("outcome index " + std::to_string(idx) +
                  " outside the 4^n outcome range");
    const double x = values[idx];
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
  FidelityEstimate est;
  est.mean = mean;
  est.variance = count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  est.std_error = std::sqrt(est.variance / static_cast<double>(count));
  return est;
}

FidelityEstimate estimate_fidelity(const DensityState& target,
                                   const std::vector<ShadowRecord>& records,
                                   const std::array<Mat2, 4>& table) {
  if (records.empty()) throw Error("fidelity estimate needs at least one shot");
  const int qubits = static_cast<int>(records.front().outcomes.size());
  std::vector<std::uint32_t> indices;
  indices.reserve(records.size());
  for (const ShadowRecord& r : records) {
    if (static_cast<int>(r.outcomes.size()) != qubits)
      throw Error("shadow records disagree on qubit count");
    indices.push_back(outcome_index(r));
  }
  return estimate_fidelity(target, indices, qubits, table);
}

std::vector<DecadeRow> decade_summary(
    const std::vector<std::uint32_t>& indices,
    const std::vector<double>& values, double ideal) {
  const std::int64_t total = static_cast<std::int64_t>(indices.size());
  if (total == 0) return {};
  const auto value_at = [&](std::int64_t i) -> double {
    const std::uint32_t idx = indices[static_cast<std::size_t>(i)];
    if (idx >= values.size())
      throw Error("outcome index " + std::to_string(idx) +
                  " outside the 4^n outcome range");
    return values[idx];
  };
  double shot_mean = 0.0;
  double shot_m2 = 0.0;
  for (std::int64_t i = 0; i < total; ++i) {
    const double x = value_at(i);
    const double delta = x - shot_mean;
    shot_mean += delta / static_cast<double>(i + 1);
    shot_m2 += delta * (x - shot_mean);
  }
  const double shot_var =
      total > 1 ? shot_m2 / static_cast<double>(total - 1) : 0.0;
  std::vector<DecadeRow> rows;
  for (std::int64_t batch_size = 1; batch_size * 10 <= total;
       batch_size *= 10) {
    const std::int64_t batches = total / batch_size;
    double mean = 0.0;
    double m2 = 0.0;
    double mse = 0.0;
    for (std::int64_t j = 0; j < batches; ++j) {
      double sum = 0.0;
      const std::int64_t begin = j * batch_size;
      for (std::int64_t i = begin; i < begin + batch_size; ++i)
        sum += value_at(i);
      const double batch_mean = sum / static_cast<double>(batch_size);
      const double delta = batch_mean - mean;
      mean += delta / static_cast<double>(j + 1);
      m2 += delta * (batch_mean - mean);
      mse += (batch_mean - ideal) * (batch_mean - ideal);
    }
    DecadeRow row;
    row.shots = batch_size;
    row.mean = mean;
    row.variance = batches > 1 ? m2 / static_cast<double>(batches - 1) : 0.0;
    row.std_error = std::sqrt(row.variance / static_cast<double>(batches));
    row.mse_vs_ideal = mse / static_cast<double>(batches);
    rows.push_back(row);
  }
  // Final row: the full stream as a single batch; its spread is extrapolated
  // from the per-shot variance.
  DecadeRow last;
  last.shots = total;
  last.mean = shot_mean;
  last.variance = shot_var / static_cast<double>(total);
  last.std_error = std::sqrt(last.variance);
  last.mse_vs_ideal = (shot_mean - ideal) * (shot_mean - ideal);
  rows.push_back(last);
  return rows;
}

double state_overlap(const DensityState& a, const DensityState& b) {
  if (a.qubits != b.qubits)
    throw Error("overlap needs equal register sizes, got " +
                std::to_string(a.qubits) + " and " + std::to_string(b.qubits));
  const int d = a.dim();
  cplx tr = 0.0;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) tr += a.at(r, c) * b.at(c, r);
  return tr.real();
}

}  // namespace povmc
