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

#include "povmc/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "povmc/errors.hpp"

namespace povmc {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuarterPi = std::numbers::pi / 4.0;

Mat2 sigma(int axis) {
  switch (axis) {
    case 0:
      return pauli_x();
    case 1:
      return pauli_y();
    default:
      return pauli_z();
  }
}

/// σ_axis ⊗ σ_axis.
Mat4 sigma_pair(int axis) { return kron(sigma(axis), sigma(axis)); }

/// Basis change under which SU(2)⊗SU(2) becomes SO(4) and the entangling
/// kernels become diagonal.
Mat4 magic_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);
  Mat4 b = Mat4::zero();
  b(0, 0) = r;
  b(0, 3) = r * i;
  b(1, 1) = r * i;
  b(1, 2) = r;
  b(2, 1) = r * i;
  b(2, 2) = -r;
  b(3, 0) = r;
  b(3, 3) = -r * i;
  return b;
}

/// Local constant whose conjugation exchanges the two named interaction axes
/// while fixing the third.
Mat4 axis_swap_constant(int i, int j) {
  if (i > j) std::swap(i, j);
  if (i == 0 && j == 1) return kron(phase_diag(kPi / 2.0), phase_diag(kPi / 2.0));
  if (i == 0 && j == 2) return kron(hadamard(), hadamard());
  return kron(rot_x(kPi / 2.0), rot_x(kPi / 2.0));
}

double round14(double x) { return std::round(x * 1e14) / 1e14; }

/// Decomposition state e^{iδ}·L·N(k)·R kept exactly invariant by the chamber
/// moves below.
struct KakState {
  double delta = 0.0;
  Mat4 l;
  Mat4 r;
  std::array<double, 3> k{};

  /// k_i ↦ k_i − n·π/2 (absorbed by δ and, for odd n, a σ_i⊗σ_i factor).
  void shift(int i, int n) {
    k[static_cast<std::size_t>(i)] -= n * (kPi / 2.0);
    if (n % 2 != 0) r = sigma_pair(i) * r;
    delta += n * (kPi / 2.0);
  }

  /// Negates k_i and k_j by conjugating with σ_a⊗I on the fixed axis a.
  void flip(int i, int j) {
    const int a = 3 - i - j;
    const Mat4 g = kron(sigma(a), Mat2::identity());
    l = l * g;
    r = g * r;
    k[static_cast<std::size_t>(i)] = -k[static_cast<std::size_t>(i)];
    k[static_cast<std::size_t>(j)] = -k[static_cast<std::size_t>(j)];
  }

  /// Exchanges k_i and k_j via the matching local constant.
  void swap_axes(int i, int j) {
    const Mat4 c = axis_swap_constant(i, j);
    l = l * c.adjoint();
    r = c * r;
    std::swap(k[static_cast<std::size_t>(i)], k[static_cast<std::size_t>(j)]);
  }
};

bool in_chamber(const std::array<double, 3>& k) {
  const double tol = 1e-9;
  if (k[0] > kQuarterPi + tol) return false;
  if (k[0] < k[1] - tol) return false;
  if (k[1] < std::abs(k[2]) - tol) return false;
  if (k[0] > kQuarterPi - 1e-10 && k[2] < -tol) return false;
  return true;
}

void canonicalize(KakState& st) {
  for (int pass = 0; pass < 8; ++pass) {
    // Fold every coefficient into (−π/4, π/4].
    for (int i = 0; i < 3; ++i) {
      const double n =
          std::floor((st.k[static_cast<std::size_t>(i)] + kQuarterPi) /
                         (kPi / 2.0) +
                     1e-12);
      if (n != 0.0) st.shift(i, static_cast<int>(n));
      if (st.k[static_cast<std::size_t>(i)] <= -kQuarterPi + 1e-12)
        st.shift(i, -1);
    }

    // Stable sort by magnitude, descending, using adjacent axis swaps.
    for (int pos = 0; pos < 2; ++pos) {
      int best = pos;
      for (int j = pos + 1; j < 3; ++j) {
        if (round14(std::abs(st.k[static_cast<std::size_t>(j)])) >
            round14(std::abs(st.k[static_cast<std::size_t>(best)])))
          best = j;
      }
      while (best > pos) {
        st.swap_axes(best - 1, best);
        --best;
      }
    }

    // Move any sign defect onto the last coefficient.
    const auto collect_negatives = [&st](std::array<int, 3>& idx) {
      int count = 0;
      for (int i = 0; i < 3; ++i)
        if (st.k[static_cast<std::size_t>(i)] < -1e-14)
          idx[static_cast<std::size_t>(count++)] = i;
      return count;
    };
    std::array<int, 3> neg{};
    int count = collect_negatives(neg);
    if (count == 3) {
      st.flip(0, 1);
      count = collect_negatives(neg);
    }
    if (count == 2) {
      st.flip(neg[0], neg[1]);
      count = collect_negatives(neg);
    }
    if (count == 1 && neg[0] != 2) st.flip(neg[0], 2);

    // On the k1 = π/4 boundary a negative k3 is equivalent to a positive one.
    if (std::abs(st.k[0] - kQuarterPi) < 1e-10 && st.k[2] < -1e-14) {
      st.flip(0, 2);
      st.shift(0, -1);
    }

    if (in_chamber(st.k)) return;
  }
  throw NoConvergence("chamber reduction did not settle after 8 passes");
}

}  // namespace

GammaInvariant gamma_of(const Mat4& u) {
  const Mat4 yy = sigma_pair(1);
  GammaInvariant g;
  g.gamma = u * yy * u.transpose() * yy;
  g.tr_gamma = g.gamma.trace();
  g.tr_gamma_sq = (g.gamma * g.gamma).trace();
  g.det_u = det4(u);
  return g;
}

std::array<cplx, 5> chi_coefficients(const GammaInvariant& g) {
  return {cplx(1.0, 0.0), -g.tr_gamma,
          0.5 * (g.tr_gamma * g.tr_gamma - g.tr_gamma_sq),
          -std::conj(g.tr_gamma), cplx(1.0, 0.0)};
}

Mat4 canonical_gate(const std::array<double, 3>& k) {
  Mat4 n = Mat4::identity();
  for (int i = 0; i < 3; ++i) {
    const Mat4 term =
        Mat4::identity() * std::cos(k[static_cast<std::size_t>(i)]) +
        sigma_pair(i) * cplx(0.0, std::sin(k[static_cast<std::size_t>(i)]));
    n = n * term;
  }
  return n;
}

KakDecomposition kak_decompose(const Mat4& u) {
  if (!is_unitary(u)) throw NotUnitary("input to kak_decompose is not unitary");

  const Su4Result su = to_su4(u);
  const Mat4 b = magic_basis();
  const Mat4 m = b.adjoint() * su.u * b;
  const Mat4 s = m.transpose() * m;

  std::array<double, 16> re{};
  std::array<double, 16> im{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      re[static_cast<std::size_t>(4 * r + c)] = s(r, c).real();
      im[static_cast<std::size_t>(4 * r + c)] = s(r, c).imag();
    }
  }
  std::array<double, 16> o{};
  joint_diagonalize4(re, &im, o);

  std::array<double, 4> phi{};
  for (int j = 0; j < 4; ++j) {
    phi[static_cast<std::size_t>(j)] =
        std::arg(cplx(re[static_cast<std::size_t>(5 * j)],
                      im[static_cast<std::size_t>(5 * j)])) /
        2.0;
  }

  // det(MᵀM) = 1, so the phase halves must sum to zero once branches are
  // aligned.
  double tot = phi[0] + phi[1] + phi[2] + phi[3];
  for (int i = 0; std::abs(tot) > 1e-9 && i < 4; ++i) {
    if (tot > 0.0) {
      phi[static_cast<std::size_t>(i)] -= kPi;
      tot -= kPi;
    } else {
      phi[static_cast<std::size_t>(i)] += kPi;
      tot += kPi;
    }
  }

  Mat4 oc;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      oc(r, c) = o[static_cast<std::size_t>(4 * r + c)];

  const auto build_real_factor = [&m, &oc, &phi]() {
    Mat4 o1 = m * oc;
    for (int c = 0; c < 4; ++c) {
      const cplx ph = std::polar(1.0, -phi[static_cast<std::size_t>(c)]);
      for (int r = 0; r < 4; ++r) o1(r, c) *= ph;
    }
    return o1;
  };

  Mat4 o1 = build_real_factor();
  double max_imag = 0.0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      max_imag = std::max(max_imag, std::abs(o1(r, c).imag()));
  if (max_imag > 1e-8) {
    std::ostringstream os;
    os << "left orthogonal factor has imaginary residue " << max_imag;
    throw NoConvergence(os.str());
  }
  if (det4(o1).real() < 0.0) {
    phi[0] += kPi;
    phi[1] -= kPi;
    o1 = build_real_factor();
  }
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) o1(r, c) = o1(r, c).real();

  static const double pat[3][4] = {
      {1.0, 1.0, -1.0, -1.0}, {-1.0, 1.0, -1.0, 1.0}, {1.0, -1.0, -1.0, 1.0}};
  std::array<double, 3> k{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j)
      k[static_cast<std::size_t>(i)] +=
          pat[i][j] * phi[static_cast<std::size_t>(j)] / 4.0;
  const double k0 = (phi[0] + phi[1] + phi[2] + phi[3]) / 4.0;

  KakState st;
  st.delta = su.phase / 4.0 + k0;
  st.l = b * o1 * b.adjoint();
  st.r = b * oc.transpose() * b.adjoint();
  st.k = k;
  canonicalize(st);

  const Mat4 recon =
      (st.l * canonical_gate(st.k) * st.r) * std::polar(1.0, st.delta);
  const double err = max_abs_diff(recon, u);
  if (err >= 1e-9) {
    std::ostringstream os;
    os << "interaction decomposition reconstruction residual " << err;
    throw NoConvergence(os.str());
  }
  return KakDecomposition{st.delta, st.l, st.r, st.k};
}

CanonicalVector canonical_vector(const Mat4& u) {
  const KakDecomposition d = kak_decompose(u);
  return CanonicalVector{d.k[0], d.k[1], d.k[2]};
}

int cnot_count(const Mat4& u) {
  const CanonicalVector k = canonical_vector(u);
  const double kmax =
      std::max({std::abs(k.k1), std::abs(k.k2), std::abs(k.k3)});
  if (kmax < 1e-8) return 0;
  const GammaInvariant g = gamma_of(u);
  if (std::abs(g.tr_gamma) < 1e-8 &&
      std::abs(g.tr_gamma_sq + 4.0 * g.det_u) < 1e-8)
    return 1;
  if (std::abs(k.k3) < 1e-8) return 2;
  return 3;
}

LocalFactors factor_local(const Mat4& u) {
  // Rank-1 rearrangement: T[(r1,c1),(r2,c2)] = U[(r1,r2),(c1,c2)] turns A⊗B
  // into the outer product vec(A)·vec(B)ᵀ.
  Mat4 t;
  for (int r1 = 0; r1 < 2; ++r1)
    for (int c1 = 0; c1 < 2; ++c1)
      for (int r2 = 0; r2 < 2; ++r2)
        for (int c2 = 0; c2 < 2; ++c2)
          t(2 * r1 + c1, 2 * r2 + c2) = u(2 * r1 + r2, 2 * c1 + c2);

  int pi = 0, pj = 0;
  double best = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (std::abs(t(i, j)) > best) {
        best = std::abs(t(i, j));
        pi = i;
        pj = j;
      }
    }
  }
  if (best < 1e-12)
    throw SynthesisMismatch("cannot factor a vanishing two-qubit operator");

  const cplx pivot = t(pi, pj);
  Mat2 a1;
  for (int r1 = 0; r1 < 2; ++r1)
    for (int c1 = 0; c1 < 2; ++c1) a1(r1, c1) = t(2 * r1 + c1, pj) / pivot;
  Mat2 b0;
  for (int r2 = 0; r2 < 2; ++r2)
    for (int c2 = 0; c2 < 2; ++c2) b0(r2, c2) = t(pi, 2 * r2 + c2);

  const double alpha = std::sqrt(
      std::max(0.0, (a1.adjoint() * a1)(0, 0).real()));
  if (alpha < 1e-12)
    throw SynthesisMismatch("degenerate tensor factor normalization");
  const LocalFactors f{a1 * cplx(1.0 / alpha, 0.0), b0 * cplx(alpha, 0.0)};

  const double residual = max_abs_diff(kron(f.a, f.b), u);
  if (residual > 1e-8) {
    std::ostringstream os;
    os << "two-qubit operator is not a tensor product: residual " << residual;
    throw SynthesisMismatch(os.str());
  }
  return f;
}

}  // namespace povmc
