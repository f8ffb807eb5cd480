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

#include "povmc/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "povmc/equivalence.hpp"
#include "povmc/errors.hpp"

namespace povmc {
namespace {

constexpr double kPi = std::numbers::pi;

Mat4 cnot_ancilla_control() {
  Mat4 m = Mat4::zero();
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 3) = 1.0;
  m(3, 2) = 1.0;
  return m;
}

Mat4 cnot_system_control() {
  Mat4 m = Mat4::zero();
  m(0, 0) = 1.0;
  m(1, 3) = 1.0;
  m(2, 2) = 1.0;
  m(3, 1) = 1.0;
  return m;
}

/// Unit vector orthogonal to v, with its leading nonzero component made real
/// positive.
CVec2 orthogonal_unit(const CVec2& v) {
  CVec2 w{-std::conj(v[1]), std::conj(v[0])};
  const int idx = (std::abs(w[0]) > 1e-12) ? 0 : 1;
  const cplx fix = std::polar(1.0, -std::arg(w[static_cast<std::size_t>(idx)]));
  return {w[0] * fix, w[1] * fix};
}

/// Frame angles of one dilation: the phases of the second ket expressed in
/// the orthonormal frame built on the first ket.
struct FrameAngles {
  Mat2 frame;  // columns: normalized first ket, its orthogonal complement
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};

FrameAngles frame_angles(const DilationUnitary& d) {
  const QubitPovm4 povm = extract_povm(d);
  CVec2 n1 = povm.kets[0];
  CVec2 n2 = povm.kets[1];
  n1 = scale(n1, 1.0 / norm(n1));
  n2 = scale(n2, 1.0 / norm(n2));

  FrameAngles f;
  const CVec2 p = orthogonal_unit(n1);
  f.frame(0, 0) = n1[0];
  f.frame(1, 0) = n1[1];
  f.frame(0, 1) = p[0];
  f.frame(1, 1) = p[1];
  const cplx r0 = std::conj(n2[0]) * f.frame(0, 0) +
                  std::conj(n2[1]) * f.frame(1, 0);
  const cplx r1 = std::conj(n2[0]) * f.frame(0, 1) +
                  std::conj(n2[1]) * f.frame(1, 1);
  f.alpha1 = std::arg(r0);
  f.alpha2 = std::arg(r1);
  return f;
}

/// Odd interaction invariant Im tr γ of the determinant-normalized
/// transformed dilation — zero exactly on the two-CNOT stratum (and on the
/// chamber boundaries).
double odd_invariant(const DilationUnitary& base, const ThetaDelta& theta) {
  const DilationUnitary moved = apply_theta(base, theta);
  return gamma_of(to_su4(moved.u).u).tr_gamma.imag();
}

/// Which single γ angle a scan varies.
ThetaDelta single_angle(int axis, double value) {
  ThetaDelta t;
  if (axis == 0)
    t.gamma2 = value;
  else if (axis == 1)
    t.gamma1 = value;
  else
    t.gamma3 = value;
  return t;
}

}  // namespace

Mat4 relabel_unitary(const RelabelCode& code) {
  Mat4 digit;
  switch (code.digit) {
    case 1:
      digit = Mat4::identity();
      break;
    case 2:
      digit = kron(Mat2::identity(), pauli_x());
      break;
    case 3:
      digit = kron(pauli_x(), Mat2::identity());
      break;
    case 4:
      digit = kron(pauli_x(), pauli_x());
      break;
    default:
      throw Error("relabel digit must be 1..4");
  }
  const Mat4 as = cnot_ancilla_control();
  const Mat4 sa = cnot_system_control();
  Mat4 letter;
  switch (code.letter) {
    case 'a':
      letter = Mat4::identity();
      break;
    case 'b':
      letter = as;
      break;
    case 'c':
      letter = sa;
      break;
    case 'd':
      letter = sa * as;
      break;
    case 'e':
      letter = as * sa;
      break;
    case 'f':
      letter = sa * as * sa;
      break;
    default:
      throw Error("relabel letter must be 'a'..'f'");
  }
  return letter * digit;
}

std::array<int, 4> relabel_permutation(const RelabelCode& code) {
  const Mat4 u = relabel_unitary(code);
  std::array<int, 4> perm{};
  for (int r = 0; r < 4; ++r) {
    int best = 0;
    for (int c = 1; c < 4; ++c)
      if (std::abs(u(r, c)) > std::abs(u(r, best))) best = c;
    perm[static_cast<std::size_t>(r)] = best;
  }
  return perm;
}

PracticalParams practical_params(const DilationUnitary& target) {
  const QubitPovm4 povm = extract_povm(target);
  if (!is_sic(povm)) {
    std::ostringstream os;
    os << "dilation does not measure a symmetric set: overlap residual "
       << sic_residual(povm);
    throw NotSic(os.str());
  }

  const DilationUnitary reference = set2_dilation();
  const FrameAngles ft = frame_angles(target);
  const FrameAngles fr = frame_angles(reference);

  Mat2 u_r = Mat2::identity();
  u_r(1, 1) = std::polar(1.0, (ft.alpha2 - fr.alpha2) - (ft.alpha1 - fr.alpha1));

  PracticalParams out;
  out.alpha11 = ft.alpha1;
  out.alpha12 = ft.alpha2;
  out.alpha21 = fr.alpha1;
  out.alpha22 = fr.alpha2;
  out.u_s = fr.frame * u_r * ft.frame.adjoint();

  // Completion mismatch between the target and the rotated reference.
  Mat2 vt;  // lower half of the target's first column block
  Mat2 vr;  // same block of the reference
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      vt(r, c) = target.u(r + 2, c);
      vr(r, c) = reference.u(r + 2, c);
    }
  }
  out.u_pr = vt * inverse2(vr * out.u_s);
  const double off =
      std::max(std::abs(out.u_pr(0, 1)), std::abs(out.u_pr(1, 0)));
  out.c = (off < 1e-8) ? 1 : 0;
  return out;
}

GeneralParams general_params(const DilationUnitary& target,
                             const PracticalParams& practical) {
  GeneralParams out;
  out.beta2 = practical.alpha11 - practical.alpha21;
  out.beta1 = std::arg(practical.u_pr(0, 0) + practical.u_pr(1, 0));
  out.beta3 = std::arg(practical.u_pr(0, 1) + practical.u_pr(1, 1)) -
              out.beta1 - out.beta2;

  const DilationUnitary reference = set2_dilation();
  const cplx phases[4] = {
      cplx(1.0, 0.0), std::polar(1.0, out.beta2), std::polar(1.0, out.beta1),
      std::polar(1.0, out.beta1 + out.beta2 + out.beta3)};
  Mat42 w2;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c)
      w2(r, c) = phases[r] * (reference.u(r, 2) * practical.u_s(0, c) +
                              reference.u(r, 3) * practical.u_s(1, c));
  if (practical.c == 0) w2 = cnot_ancilla_control() * w2;

  Mat42 wt;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c) wt(r, c) = target.u(r, c + 2);
  out.q = pseudo_inverse(w2) * wt;
  return out;
}

ThetaDelta sic_1cnot_theta(int c) {
  ThetaDelta t;
  t.gamma1 = kPi;
  t.beta3 = (c == 0) ? kPi / 2.0 : -kPi / 2.0;
  return t;
}

TwoCnotSearch find_2cnot_theta(const DilationUnitary& base) {
  {
    const CanonicalVector k = canonical_vector(base.u);
    if (std::abs(k.k3) < 1e-8) return TwoCnotSearch{ThetaDelta{}, base};
  }

  constexpr int kScanPoints = 64;
  double lo_seen = 0.0, hi_seen = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    std::array<double, kScanPoints> value{};
    for (int j = 0; j < kScanPoints; ++j) {
      const double theta = -kPi + j * (2.0 * kPi / kScanPoints);
      value[static_cast<std::size_t>(j)] =
          odd_invariant(base, single_angle(axis, theta));
      lo_seen = std::min(lo_seen, value[static_cast<std::size_t>(j)]);
      hi_seen = std::max(hi_seen, value[static_cast<std::size_t>(j)]);
    }
    for (int j = 0; j < kScanPoints; ++j) {
      const double a = -kPi + j * (2.0 * kPi / kScanPoints);
      const double sa = value[static_cast<std::size_t>(j)];
      const double sb =
          value[static_cast<std::size_t>((j + 1) % kScanPoints)];
      if (sa == 0.0) {
        const ThetaDelta t = single_angle(axis, a);
        const DilationUnitary moved = apply_theta(base, t);
        if (std::abs(canonical_vector(moved.u).k3) < 1e-8)
          return TwoCnotSearch{t, moved};
        continue;
      }
      if (sa * sb >= 0.0) continue;

      double left = a;
      double right = a + 2.0 * kPi / kScanPoints;
      double sleft = sa;
      while (right - left > 1e-12) {
        const double mid = 0.5 * (left + right);
        const double smid = odd_invariant(base, single_angle(axis, mid));
        if (smid == 0.0) {
          left = mid;
          right = mid;
          break;
        }
        if ((sleft < 0.0) == (smid < 0.0)) {
          left = mid;
          sleft = smid;
        } else {
          right = mid;
        }
      }
      const ThetaDelta t = single_angle(axis, 0.5 * (left + right));
      const DilationUnitary moved = apply_theta(base, t);
      if (std::abs(canonical_vector(moved.u).k3) < 1e-8)
        return TwoCnotSearch{t, moved};
    }
  }

  std::ostringstream os;
  os << "no vanishing of the odd interaction invariant found: scanned range ["
     << lo_seen << ", " << hi_seen << "]";
  throw SearchFailed(os.str());
}

}  // namespace povmc
