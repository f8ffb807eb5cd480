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
#include <cmath>
#include <complex>
#include <cstddef>

#include "povmc/errors.hpp"

namespace povmc {

using cplx = std::complex<double>;

/// Two-component complex vector (a subnormalized qubit ket).
using CVec2 = std::array<cplx, 2>;

inline double norm(const CVec2& v) {
  return std::sqrt(std::norm(v[0]) + std::norm(v[1]));
}

/// Inner product <a|b> (conjugate-linear in the first argument).
inline cplx vdot(const CVec2& a, const CVec2& b) {
  return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

inline CVec2 conj(const CVec2& v) { return {std::conj(v[0]), std::conj(v[1])}; }

inline CVec2 scale(const CVec2& v, cplx s) { return {s * v[0], s * v[1]}; }

/// Fixed-size row-major complex matrix.
template <int R, int C>
struct CMat {
  std::array<cplx, static_cast<std::size_t>(R) * C> a{};

  static constexpr int rows = R;
  static constexpr int cols = C;

  cplx& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * C + c]; }
  const cplx& operator()(int r, int c) const {
    return a[static_cast<std::size_t>(r) * C + c];
  }

  static CMat zero() { return CMat{}; }

  static CMat identity()
    requires(R == C)
  {
    CMat m;
    for (int i = 0; i < R; ++i) m(i, i) = 1.0;
    return m;
  }

  CMat<C, R> adjoint() const {
    CMat<C, R> m;
    for (int r = 0; r < R; ++r)
      for (int c = 0; c < C; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
  }

  CMat<C, R> transpose() const {
    CMat<C, R> m;
    for (int r = 0; r < R; ++r)
      for (int c = 0; c < C; ++c) m(c, r) = (*this)(r, c);
    return m;
  }

  CMat conjugate() const {
    CMat m;
    for (std::size_t i = 0; i < a.size(); ++i) m.a[i] = std::conj(a[i]);
    return m;
  }

  cplx trace() const
    requires(R == C)
  {
    cplx t = 0.0;
    for (int i = 0; i < R; ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const cplx& x : a) m = std::max(m, std::abs(x));
    return m;
  }

  CMat operator+(const CMat& o) const {
    CMat m;
    for (std::size_t i = 0; i < a.size(); ++i) m.a[i] = a[i] + o.a[i];
    return m;
  }

  CMat operator-(const CMat& o) const {
    CMat m;
    for (std::size_t i = 0; i < a.size(); ++i) m.a[i] = a[i] - o.a[i];
    return m;
  }

  CMat operator*(cplx s) const {
    CMat m;
    for (std::size_t i = 0; i < a.size(); ++i) m.a[i] = s * a[i];
    return m;
  }

  template <int C2>
  CMat<R, C2> operator*(const CMat<C, C2>& o) const {
    CMat<R, C2> m;
    for (int r = 0; r < R; ++r)
      for (int k = 0; k < C; ++k) {
        const cplx v = (*this)(r, k);
        if (v == 0.0) continue;
        for (int c = 0; c < C2; ++c) m(r, c) += v * o(k, c);
      }
    return m;
  }
};

using Mat2 = CMat<2, 2>;
using Mat4 = CMat<4, 4>;
using Mat42 = CMat<4, 2>;
using Mat24 = CMat<2, 4>;

inline Mat2 pauli_x() {
  Mat2 m;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

inline Mat2 pauli_y() {
  Mat2 m;
  m(0, 1) = cplx(0.0, -1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return m;
}

inline Mat2 pauli_z() {
  Mat2 m;
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

inline Mat2 hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  Mat2 m;
  m(0, 0) = s;
  m(0, 1) = s;
  m(1, 0) = s;
  m(1, 1) = -s;
  return m;
}

/// Rotation about the X axis: cos(t/2)·I − i·sin(t/2)·X.
inline Mat2 rot_x(double t) {
  Mat2 m;
  m(0, 0) = std::cos(t / 2.0);
  m(1, 1) = m(0, 0);
  m(0, 1) = cplx(0.0, -std::sin(t / 2.0));
  m(1, 0) = m(0, 1);
  return m;
}

/// Rotation about the Y axis: cos(t/2)·I − i·sin(t/2)·Y.
inline Mat2 rot_y(double t) {
  Mat2 m;
  m(0, 0) = std::cos(t / 2.0);
  m(1, 1) = m(0, 0);
  m(0, 1) = -std::sin(t / 2.0);
  m(1, 0) = std::sin(t / 2.0);
  return m;
}

/// Rotation about the Z axis: diag(e^{−it/2}, e^{it/2}).
inline Mat2 rot_z(double t) {
  Mat2 m;
  m(0, 0) = std::polar(1.0, -t / 2.0);
  m(1, 1) = std::polar(1.0, t / 2.0);
  return m;
}

/// Phase gate diag(1, e^{it}).
inline Mat2 phase_diag(double t) {
  Mat2 m;
  m(0, 0) = 1.0;
  m(1, 1) = std::polar(1.0, t);
  return m;
}

template <int R, int C>
double max_abs_diff(const CMat<R, C>& a, const CMat<R, C>& b) {
  return (a - b).max_abs();
}

/// Kronecker product, first factor most significant.
Mat4 kron(const Mat2& a, const Mat2& b);

cplx det2(const Mat2& m);
cplx det4(const Mat4& m);
Mat2 inverse2(const Mat2& m);

/// Inverse of a 4×4 matrix via partial-pivot LU. Throws RankDeficient if a
/// pivot vanishes.
Mat4 inverse4(const Mat4& m);

/// Jointly diagonalizes one or two commuting real symmetric 4×4 matrices
/// (row-major storage) with cyclic Jacobi-style plane rotations, choosing each
/// angle to minimize the combined off-diagonal mass. On return `a` (and `b`,
/// when given) hold the rotated, diagonal matrices and `o` the accumulated
/// orthogonal transform: diag = Oᵀ·input·O. Throws NoConvergence if the
/// off-diagonal mass fails to vanish within the sweep budget.
void joint_diagonalize4(std::array<double, 16>& a, std::array<double, 16>* b,
                        std::array<double, 16>& o);

/// Max-norm test of U†U = I.
template <int N>
bool is_unitary(const CMat<N, N>& u, double tol = 1e-10) {
  return max_abs_diff(u.adjoint() * u, CMat<N, N>::identity()) < tol;
}

/// Extends a 4×2 isometry V (V†V = I within 1e−10) to a 4×4 unitary [V W].
/// W is produced by Gram–Schmidt against V's columns, trying the canonical
/// basis vectors in index order and skipping candidates whose residual norm
/// falls below 1e−8. Throws NonIsometry if V is not an isometry.
Mat4 complete_to_unitary(const Mat42& v);

struct Eig4 {
  std::array<cplx, 4> values;  // sorted by principal phase, ascending
  Mat4 vectors;                // unit-norm eigenvectors as columns
};

/// Eigen-decomposition of a 4×4 complex matrix: closed-form characteristic
/// quartic, Newton polishing, then inverse-iteration eigenvectors.
/// Eigenvalues are sorted by phase angle for determinism.
/// Throws NoConvergence if the iteration budget is exhausted.
Eig4 eig4(const Mat4& m);

/// Moore–Penrose pseudo-inverse of a full-column-rank 4×2 matrix,
/// W⁺ = (W†W)⁻¹W†. Throws RankDeficient if the smallest singular value
/// of W is ≤ 1e−10.
Mat24 pseudo_inverse(const Mat42& w);

struct Su4Result {
  Mat4 u;        // determinant-1 representative
  double phase;  // arg det(U), principal branch (−π, π]
};

/// Rescales a unitary into SU(4): U′ = e^{−iφ/4}·U with φ = arg det(U).
/// Throws NotUnitary.
Su4Result to_su4(const Mat4& u);

}  // namespace povmc
