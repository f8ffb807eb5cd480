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

#include "povmc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace povmc {

namespace {

constexpr double kPi = std::numbers::pi;

/// In-place partial-pivot LU factorization of a 4×4 matrix.
/// Returns the permutation sign, or 0 if a pivot is exactly zero.
int lu_factor4(Mat4& m, std::array<int, 4>& perm) {
  int sign = 1;
  for (int i = 0; i < 4; ++i) perm[i] = i;
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    double best = std::abs(m(col, col));
    for (int r = col + 1; r < 4; ++r) {
      const double v = std::abs(m(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) return 0;
    if (pivot != col) {
      for (int c = 0; c < 4; ++c) std::swap(m(col, c), m(pivot, c));
      std::swap(perm[col], perm[pivot]);
      sign = -sign;
    }
    const cplx inv = 1.0 / m(col, col);
    for (int r = col + 1; r < 4; ++r) {
      const cplx f = m(r, col) * inv;
      m(r, col) = f;
      for (int c = col + 1; c < 4; ++c) m(r, c) -= f * m(col, c);
    }
  }
  return sign;
}

std::array<cplx, 4> lu_solve4(const Mat4& lu, const std::array<int, 4>& perm,
                              const std::array<cplx, 4>& b) {
  std::array<cplx, 4> x{};
  for (int i = 0; i < 4; ++i) x[i] = b[perm[i]];
  for (int i = 1; i < 4; ++i)
    for (int j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
  for (int i = 3; i >= 0; --i) {
    for (int j = i + 1; j < 4; ++j) x[i] -= lu(i, j) * x[j];
    x[i] /= lu(i, i);
  }
  return x;
}

/// All three cube roots of z, principal first.
std::array<cplx, 3> cbrt3(cplx z) {
  const double r = std::cbrt(std::abs(z));
  const double t = std::arg(z) / 3.0;
  std::array<cplx, 3> out;
  for (int j = 0; j < 3; ++j)
    out[j] = std::polar(r, t + 2.0 * kPi * j / 3.0);
  return out;
}

/// Roots of z² + bz + c with the numerically stable sibling formula.
std::array<cplx, 2> quadratic_roots(cplx b, cplx c) {
  const cplx d = std::sqrt(b * b - 4.0 * c);
  const cplx q = (std::real(std::conj(b) * d) >= 0.0) ? -0.5 * (b + d) : -0.5 * (b - d);
  if (q == 0.0) return {cplx(0.0), cplx(0.0)};
  return {q, c / q};
}

/// Roots of z³ + a2 z² + a1 z + a0 (Cardano).
std::array<cplx, 3> cubic_roots(cplx a2, cplx a1, cplx a0) {
  // Depress: z = t − a2/3 ⇒ t³ + pt + q.
  const cplx p = a1 - a2 * a2 / 3.0;
  const cplx q = a0 - a2 * a1 / 3.0 + 2.0 * a2 * a2 * a2 / 27.0;
  if (std::abs(p) < 1e-300) {
    auto ts = cbrt3(-q);
    return {ts[0] - a2 / 3.0, ts[1] - a2 / 3.0, ts[2] - a2 / 3.0};
  }
  // t = u − p/(3u) with u³ a root of w² + qw − p³/27.
  const auto ws = quadratic_roots(q, -p * p * p / 27.0);
  const cplx w = (std::abs(ws[0]) >= std::abs(ws[1])) ? ws[0] : ws[1];
  std::array<cplx, 3> out;
  int i = 0;
  for (const cplx& u : cbrt3(w)) out[i++] = u - p / (3.0 * u) - a2 / 3.0;
  return out;
}

/// Roots of x⁴ + c3 x³ + c2 x² + c1 x + c0 via Ferrari's method.
std::array<cplx, 4> quartic_roots(cplx c3, cplx c2, cplx c1, cplx c0) {
  // Depress: x = y − c3/4 ⇒ y⁴ + p y² + q y + r.
  const cplx sh = c3 / 4.0;
  const cplx p = c2 - 6.0 * sh * sh;
  const cplx q = c1 - 2.0 * c2 * sh + 8.0 * sh * sh * sh;
  const cplx r = c0 - c1 * sh + c2 * sh * sh - 3.0 * sh * sh * sh * sh;
  std::array<cplx, 4> ys;
  if (std::abs(q) < 1e-14 * (1.0 + std::abs(p) + std::abs(r))) {
    // Biquadratic: y² solves z² + pz + r.
    const auto zs = quadratic_roots(p, r);
    const cplx s0 = std::sqrt(zs[0]);
    const cplx s1 = std::sqrt(zs[1]);
    ys = {s0, -s0, s1, -s1};
  } else {
    // Resolvent: 8m³ + 8pm² + (2p² − 8r)m − q² = 0; pick the largest |m|.
    const auto ms =
        cubic_roots(p, (2.0 * p * p - 8.0 * r) / 8.0, -q * q / 8.0);
    cplx m = ms[0];
    for (const cplx& cand : ms)
      if (std::abs(cand) > std::abs(m)) m = cand;
    const cplx s = std::sqrt(2.0 * m);
    // (y² + p/2 + m)² = 2m·(y − q/(4m))².
    const cplx t = q / (4.0 * m);
    const auto r01 = quadratic_roots(-s, p / 2.0 + m + s * t);
    const auto r23 = quadratic_roots(s, p / 2.0 + m - s * t);
    ys = {r01[0], r01[1], r23[0], r23[1]};
  }
  for (cplx& y : ys) y -= sh;
  return ys;
}

}  // namespace

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return m;
}

cplx det2(const Mat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

cplx det4(const Mat4& m) {
  Mat4 lu = m;
  std::array<int, 4> perm;
  const int sign = lu_factor4(lu, perm);
  if (sign == 0) return 0.0;
  cplx d = static_cast<double>(sign);
  for (int i = 0; i < 4; ++i) d *= lu(i, i);
  return d;
}

Mat4 inverse4(const Mat4& m) {
  Mat4 lu = m;
  std::array<int, 4> perm;
  if (lu_factor4(lu, perm) == 0) {
    throw RankDeficient("4x4 inverse: zero pivot");
  }
  Mat4 inv;
  for (int c = 0; c < 4; ++c) {
    std::array<cplx, 4> e{};
    e[c] = 1.0;
    const auto x = lu_solve4(lu, perm, e);
    for (int r = 0; r < 4; ++r) inv(r, c) = x[r];
  }
  return inv;
}

void joint_diagonalize4(std::array<double, 16>& a, std::array<double, 16>* b,
                        std::array<double, 16>& o) {
  auto at = [](std::array<double, 16>& m, int r, int c) -> double& {
    return m[static_cast<std::size_t>(r) * 4 + c];
  };
  o = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (b != nullptr)
    for (double v : *b) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return;

  auto off_mass = [&] {
    double s = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) {
        s += at(a, p, q) * at(a, p, q);
        if (b != nullptr) s += at(*b, p, q) * at(*b, p, q);
      }
    return s;
  };

  const double target = 1e-28 * scale * scale;
  for (int sweep = 0; sweep < 60; ++sweep) {
    if (off_mass() < target) return;
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        // Accumulate the 2×2 quadratic form whose principal axis gives the
        // rotation angle minimizing both matrices' (p,q) off-diagonal mass.
        double g11 = 0.0, g12 = 0.0, g22 = 0.0;
        auto add = [&](std::array<double, 16>& m) {
          const double h1 = at(m, p, p) - at(m, q, q);
          const double h2 = 2.0 * at(m, p, q);
          g11 += h1 * h1;
          g12 += h1 * h2;
          g22 += h2 * h2;
        };
        add(a);
        if (b != nullptr) add(*b);
        const double diff = (g11 - g22) / 2.0;
        const double lam = (g11 + g22) / 2.0 + std::hypot(diff, g12);
        // Principal unit eigenvector (x, y) of G, oriented with x ≥ 0;
        // (x, y) = (cos 2θ, sin 2θ) of the optimal rotation.
        double x, y;
        if (std::abs(g12) > 1e-300) {
          x = g12;
          y = lam - g11;
          if (std::abs(lam - g22) > std::abs(y)) {
            x = lam - g22;
            y = g12;
          }
        } else {
          x = (g11 >= g22) ? 1.0 : 0.0;
          y = (g11 >= g22) ? 0.0 : 1.0;
        }
        const double nrm = std::hypot(x, y);
        if (nrm < 1e-300) continue;
        x /= nrm;
        y /= nrm;
        if (x < 0.0) {
          x = -x;
          y = -y;
        }
        const double c = std::sqrt((1.0 + x) / 2.0);
        const double s = y / (2.0 * c);
        if (std::abs(s) < 1e-17) continue;
        auto rotate = [&](std::array<double, 16>& m) {
          for (int i = 0; i < 4; ++i) {
            const double mp = at(m, i, p), mq = at(m, i, q);
            at(m, i, p) = c * mp + s * mq;
            at(m, i, q) = -s * mp + c * mq;
          }
          for (int i = 0; i < 4; ++i) {
            const double mp = at(m, p, i), mq = at(m, q, i);
            at(m, p, i) = c * mp + s * mq;
            at(m, q, i) = -s * mp + c * mq;
          }
        };
        rotate(a);
        if (b != nullptr) rotate(*b);
        for (int i = 0; i < 4; ++i) {
          const double op = at(o, i, p), oq = at(o, i, q);
          at(o, i, p) = c * op + s * oq;
          at(o, i, q) = -s * op + c * oq;
        }
      }
    }
  }
  if (off_mass() >= target * 1e6) {
    throw NoConvergence("joint diagonalization sweep budget exhausted");
  }
}

Mat2 inverse2(const Mat2& m) {
  const cplx d = det2(m);
  Mat2 inv;
  inv(0, 0) = m(1, 1) / d;
  inv(0, 1) = -m(0, 1) / d;
  inv(1, 0) = -m(1, 0) / d;
  inv(1, 1) = m(0, 0) / d;
  return inv;
}

Mat4 complete_to_unitary(const Mat42& v) {
  const double iso = max_abs_diff(v.adjoint() * v, Mat2::identity());
  if (iso >= 1e-10) {
    throw NonIsometry("columns are not orthonormal: max deviation " +
                      std::to_string(iso));
  }
  Mat4 u;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c) u(r, c) = v(r, c);
  int filled = 2;
  for (int cand = 0; cand < 4 && filled < 4; ++cand) {
    std::array<cplx, 4> w{};
    w[cand] = 1.0;
    // Project out the columns accumulated so far.
    for (int c = 0; c < filled; ++c) {
      cplx overlap = 0.0;
      for (int r = 0; r < 4; ++r) overlap += std::conj(u(r, c)) * w[r];
      for (int r = 0; r < 4; ++r) w[r] -= overlap * u(r, c);
    }
    double nrm = 0.0;
    for (const cplx& x : w) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    if (nrm < 1e-8) continue;
    for (int r = 0; r < 4; ++r) u(r, filled) = w[r] / nrm;
    ++filled;
  }
  if (filled < 4) {
    throw NonIsometry("failed to complete the isometry to a unitary");
  }
  return u;
}

Eig4 eig4(const Mat4& m) {
  // Faddeev–LeVerrier: power-sum traces to elementary symmetric functions.
  const Mat4 m2 = m * m;
  const Mat4 m3 = m2 * m;
  const cplx t1 = m.trace();
  const cplx t2 = m2.trace();
  const cplx t3 = m3.trace();
  const cplx t4 = (m3 * m).trace();
  const cplx e1 = t1;
  const cplx e2 = (e1 * t1 - t2) / 2.0;
  const cplx e3 = (e2 * t1 - e1 * t2 + t3) / 3.0;
  const cplx e4 = (e3 * t1 - e2 * t2 + e1 * t3 - t4) / 4.0;
  // Characteristic polynomial x⁴ − e1x³ + e2x² − e3x + e4.
  auto roots = quartic_roots(-e1, e2, -e3, e4);

  // Newton polish (converges quadratically for simple roots, still
  // improves multiple roots).
  const double scale = std::max(1.0, m.max_abs());
  auto poly = [&](cplx x, cplx& dp) {
    const cplx p =
        (((x - e1) * x + e2) * x - e3) * x + e4;
    dp = ((4.0 * x - 3.0 * e1) * x + 2.0 * e2) * x - e3;
    return p;
  };
  for (cplx& x : roots) {
    for (int it = 0; it < 16; ++it) {
      cplx dp;
      const cplx p = poly(x, dp);
      if (std::abs(dp) < 1e-300) break;
      const cplx step = p / dp;
      x -= step;
      if (std::abs(step) < 1e-15 * scale) break;
    }
  }

  // Deterministic order: principal phase ascending, then real, then imag.
  std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
    const double pa = std::arg(a);
    const double pb = std::arg(b);
    if (pa != pb) return pa < pb;
    if (std::real(a) != std::real(b)) return std::real(a) < std::real(b);
    return std::imag(a) < std::imag(b);
  });

  Eig4 out;
  out.values = roots;

  for (int j = 0; j < 4; ++j) {
    const cplx lam = roots[j];
    bool ok = false;
    std::array<cplx, 4> v{};
    // Inverse iteration on a slightly shifted system; restart from each
    // canonical basis vector if a start fails to converge.
    for (int attempt = 0; attempt < 5 && !ok; ++attempt) {
      const double eps = 1e-12 * scale * (attempt + 1);
      Mat4 shifted = m;
      for (int i = 0; i < 4; ++i) shifted(i, i) -= lam + cplx(eps, eps);
      std::array<int, 4> perm;
      Mat4 lu = shifted;
      if (lu_factor4(lu, perm) == 0) continue;
      if (attempt == 0) {
        v = {0.5, 0.5, 0.5, 0.5};
      } else {
        v = {};
        v[attempt - 1] = 1.0;
      }
      for (int it = 0; it < 8; ++it) {
        v = lu_solve4(lu, perm, v);
        double nrm = 0.0;
        for (const cplx& x : v) nrm += std::norm(x);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-300) break;
        for (cplx& x : v) x /= nrm;
        // Residual check ‖Mv − λv‖_max.
        double res = 0.0;
        for (int r = 0; r < 4; ++r) {
          cplx acc = -lam * v[r];
          for (int c = 0; c < 4; ++c) acc += m(r, c) * v[c];
          res = std::max(res, std::abs(acc));
        }
        if (res < 1e-9 * scale) {
          ok = true;
          break;
        }
      }
    }
    if (!ok) {
      throw NoConvergence("eigenvector iteration budget exhausted");
    }
    for (int r = 0; r < 4; ++r) out.vectors(r, j) = v[r];
  }
  return out;
}

Mat24 pseudo_inverse(const Mat42& w) {
  const Mat2 g = w.adjoint() * w;  // Hermitian positive semidefinite
  // Closed-form eigenvalues of the 2×2 Gram matrix.
  const double tr = std::real(g(0, 0) + g(1, 1));
  const double dt = std::real(det2(g));
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - dt));
  const double lam_min = tr / 2.0 - disc;
  if (lam_min <= 1e-20) {
    throw RankDeficient("smallest singular value " +
                        std::to_string(std::sqrt(std::max(0.0, lam_min))) +
                        " below threshold");
  }
  if (std::sqrt(lam_min) <= 1e-10) {
    throw RankDeficient("smallest singular value " +
                        std::to_string(std::sqrt(lam_min)) +
                        " below threshold");
  }
  return inverse2(g) * w.adjoint();
}

Su4Result to_su4(const Mat4& u) {
  if (!is_unitary(u)) {
    throw NotUnitary("input to to_su4 is not unitary");
  }
  const double phase = std::arg(det4(u));
  Su4Result out;
  out.phase = phase;
  out.u = u * std::polar(1.0, -phase / 4.0);
  return out;
}

}  // namespace povmc
