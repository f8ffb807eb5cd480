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

#include "povmc/dilation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "povmc/errors.hpp"

namespace povmc {
namespace {

constexpr double kPi = std::numbers::pi;

// CNOT with the system qubit (least significant bit) as control and the
// ancilla (most significant bit) as target.
Mat4 cnot_system_control() {
  Mat4 m = Mat4::zero();
  m(0, 0) = 1.0;
  m(1, 3) = 1.0;
  m(2, 2) = 1.0;
  m(3, 1) = 1.0;
  return m;
}

}  // namespace

Mat42 DilationUnitary::v_block() const {
  Mat42 v;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c) v(r, c) = u(r, c);
  return v;
}

Mat42 DilationUnitary::w_block() const {
  Mat42 w;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c) w(r, c) = u(r, c + 2);
  return w;
}

std::array<double, 7> ThetaDelta::as_array() const {
  return {gamma0, gamma1, gamma2, gamma3, beta1, beta2, beta3};
}

ThetaDelta ThetaDelta::from_array(const std::array<double, 7>& a) {
  ThetaDelta d;
  d.gamma0 = a[0];
  d.gamma1 = a[1];
  d.gamma2 = a[2];
  d.gamma3 = a[3];
  d.beta1 = a[4];
  d.beta2 = a[5];
  d.beta3 = a[6];
  return d;
}

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

Mat42 build_v(const QubitPovm4& povm) {
  const double residual = completeness_residual(povm);
  if (residual >= 1e-9) {
    std::ostringstream os;
    os << "POVM completeness residual " << residual << " exceeds 1e-9";
    throw IncompletePovm(os.str());
  }
  Mat42 v;
  for (int b = 0; b < 4; ++b)
    for (int i = 0; i < 2; ++i)
      v(b, i) = std::conj(povm.kets[static_cast<std::size_t>(b)]
                                   [static_cast<std::size_t>(i)]);
  return v;
}

DilationUnitary build_dilation(const QubitPovm4& povm) {
  return DilationUnitary{complete_to_unitary(build_v(povm))};
}

QubitPovm4 extract_povm(const DilationUnitary& dilation) {
  if (!is_unitary(dilation.u)) {
    throw NotUnitary("dilation matrix is not unitary within 1e-10");
  }
  QubitPovm4 povm;
  for (int b = 0; b < 4; ++b)
    for (int i = 0; i < 2; ++i)
      povm.kets[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)] =
          std::conj(dilation.u(b, i));
  return povm;
}

DilationUnitary apply_theta(const DilationUnitary& dilation,
                            const ThetaDelta& delta) {
  const Mat2 q = rot_x(delta.gamma1) * rot_z(delta.gamma2) *
                 rot_x(delta.gamma3) * std::polar(1.0, delta.gamma0);
  Mat4 cq = Mat4::zero();
  cq(0, 0) = 1.0;
  cq(1, 1) = 1.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) cq(r + 2, c + 2) = q(r, c);

  const cplx phases[4] = {cplx(1.0, 0.0), std::polar(1.0, delta.beta2),
                          std::polar(1.0, delta.beta1),
                          std::polar(1.0, delta.beta1 + delta.beta2 +
                                              delta.beta3)};
  Mat4 out = dilation.u * cq;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(r, c) *= phases[r];
  return DilationUnitary{out};
}

DilationUnitary set1_dilation(int c) {
  const double sign = (c == 0) ? 1.0 : -1.0;
  const double r = 1.0 / std::sqrt(2.0);
  const double a = 1.0 / std::sqrt(3.0);
  const double b = std::sqrt(2.0 / 3.0);

  Mat4 u = Mat4::zero();
  u(0, 0) = r;
  u(0, 2) = r;

  u(1, 0) = r * a;
  u(1, 1) = r * b;
  u(1, 2) = -r * a;
  u(1, 3) = r * b;

  u(2, 0) = r * a;
  u(2, 1) = std::polar(r * b, sign * 2.0 * kPi / 3.0);
  u(2, 2) = -r * a;
  u(2, 3) = -std::polar(r * b, sign * kPi / 3.0);

  for (int col = 0; col < 4; ++col) u(3, col) = std::conj(u(2, col));
  return DilationUnitary{u};
}

DilationUnitary set2_dilation() {
  const CVec2 f = set2_fiducial();
  const Mat2 u_a = unitary_from_first_column({std::conj(f[0]),
                                              std::conj(f[1])});
  const Mat4 u = kron(Mat2::identity(), hadamard()) * cnot_system_control() *
                 kron(u_a, Mat2::identity());
  return DilationUnitary{u};
}

Mat2 unitary_from_first_column(const CVec2& v) {
  const double n = norm(v);
  if (std::abs(n - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "column norm " << n << " deviates from 1 by more than 1e-10";
    throw NonIsometry(os.str());
  }
  Mat2 u;
  u(0, 0) = v[0];
  u(1, 0) = v[1];
  u(0, 1) = -std::conj(v[1]);
  u(1, 1) = std::conj(v[0]);
  return u;
}

}  // namespace povmc
