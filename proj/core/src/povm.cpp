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

#include "povmc/povm.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "povmc/errors.hpp"

namespace povmc {
namespace {

constexpr double kPi = std::numbers::pi;

/// |⟨u|v⟩|² — the Hilbert–Schmidt overlap of the rank-1 elements |u⟩⟨u|,
/// |v⟩⟨v|.
double element_overlap(const CVec2& u, const CVec2& v) {
  const cplx ip = vdot(u, v);
  return std::norm(ip);
}

std::array<CVec2, 4> set1_kets() {
  const double s2 = std::sqrt(2.0);
  const double s6 = std::sqrt(6.0);
  std::array<CVec2, 4> kets;
  kets[0] = {cplx(1.0 / s2, 0.0), cplx(0.0, 0.0)};
  const double thetas[3] = {0.0, -2.0 * kPi / 3.0, 2.0 * kPi / 3.0};
  for (int j = 0; j < 3; ++j) {
    kets[j + 1] = {cplx(1.0 / s6, 0.0),
                   std::polar(s2 / s6, thetas[j])};
  }
  return kets;
}

/// Ket of unit Bloch direction (theta, phi) with real non-negative |0⟩
/// amplitude, scaled by `amp`.
CVec2 bloch_ket(double theta, double phi, double amp) {
  return {cplx(amp * std::cos(theta / 2.0), 0.0),
          std::polar(amp * std::sin(theta / 2.0), phi)};
}

}  // namespace

Mat2 QubitPovm4::element(int i) const {
  const CVec2& k = kets[static_cast<std::size_t>(i)];
  Mat2 m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = k[r] * std::conj(k[c]);
  return m;
}

double EtaVector::weight() const {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

double completeness_residual(const QubitPovm4& povm) {
  Mat2 sum = Mat2::zero();
  for (int i = 0; i < 4; ++i) sum = sum + povm.element(i);
  return max_abs_diff(sum, Mat2::identity());
}

bool is_ic(const QubitPovm4& povm) {
  // Frame Gram matrix: G_ij = tr(Π_i Π_j) = |⟨φ_i|φ_j⟩|². Its eigenvalues are
  // the squared singular values of the element frame, so the rank test
  // thresholds at (1e−8)².
  std::array<double, 16> gram{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      gram[static_cast<std::size_t>(4 * i + j)] =
          element_overlap(povm.kets[static_cast<std::size_t>(i)],
                          povm.kets[static_cast<std::size_t>(j)]);
  std::array<double, 16> basis{};
  joint_diagonalize4(gram, nullptr, basis);
  int rank = 0;
  for (int i = 0; i < 4; ++i)
    if (gram[static_cast<std::size_t>(5 * i)] > 1e-16) ++rank;
  return rank == 4;
}

double sic_residual(const QubitPovm4& povm) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double target = (i == j) ? 0.25 : 1.0 / 12.0;
      const double got =
          element_overlap(povm.kets[static_cast<std::size_t>(i)],
                          povm.kets[static_cast<std::size_t>(j)]);
      worst = std::max(worst, std::abs(got - target));
    }
  }
  return worst;
}

bool is_sic(const QubitPovm4& povm) { return sic_residual(povm) < 1e-9; }

QubitPovm4 construct_from_eta(const std::array<EtaVector, 3>& etas) {
  std::array<std::array<double, 3>, 4> cone{};
  for (int i = 0; i < 3; ++i) {
    cone[static_cast<std::size_t>(i)] = etas[static_cast<std::size_t>(i)].v;
    for (int a = 0; a < 3; ++a)
      cone[3][static_cast<std::size_t>(a)] -=
          etas[static_cast<std::size_t>(i)].v[static_cast<std::size_t>(a)];
  }

  double total = 0.0;
  std::array<double, 4> weight{};
  for (int i = 0; i < 4; ++i) {
    const auto& n = cone[static_cast<std::size_t>(i)];
    weight[static_cast<std::size_t>(i)] =
        std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    total += weight[static_cast<std::size_t>(i)];
  }
  if (total < 1e-300) {
    throw DegenerateElement("all cone vectors vanish");
  }
  const double scale = 2.0 / total;

  QubitPovm4 povm;
  for (int i = 0; i < 4; ++i) {
    const double w = scale * weight[static_cast<std::size_t>(i)];
    if (w < 1e-12) {
      std::ostringstream os;
      os << "element " << i << " has weight " << w << " below 1e-12";
      throw DegenerateElement(os.str());
    }
    const auto& n = cone[static_cast<std::size_t>(i)];
    // Components are ordered (z, x, y).
    const double theta = std::atan2(std::hypot(n[1], n[2]), n[0]);
    const double phi = std::atan2(n[2], n[1]);
    povm.kets[static_cast<std::size_t>(i)] =
        bloch_ket(theta, phi, std::sqrt(w));
  }
  return povm;
}

QubitPovm4 construct_sic(const SicParams& params) {
  const Mat2 u_s =
      rot_z(params.phi1) * rot_y(params.theta1) * rot_z(params.delta);
  const std::array<CVec2, 4> base = set1_kets();
  const std::array<int, 4> order = (params.c == 0)
                                       ? std::array<int, 4>{0, 1, 2, 3}
                                       : std::array<int, 4>{0, 1, 3, 2};
  QubitPovm4 povm;
  for (int i = 0; i < 4; ++i) {
    const CVec2& k = base[static_cast<std::size_t>(
        order[static_cast<std::size_t>(i)])];
    povm.kets[static_cast<std::size_t>(i)] = {
        u_s(0, 0) * k[0] + u_s(0, 1) * k[1],
        u_s(1, 0) * k[0] + u_s(1, 1) * k[1]};
  }
  return povm;
}

QubitPovm4 wh_covariant_sic(const CVec2& fiducial) {
  const Mat2 x = pauli_x();
  const Mat2 z = pauli_z();
  const cplx tau(0.0, -1.0);
  const double inv_s2 = 1.0 / std::sqrt(2.0);

  QubitPovm4 povm;
  int idx = 0;
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      Mat2 d = Mat2::identity();
      for (int rep = 0; rep < k; ++rep) d = x * d;
      for (int rep = 0; rep < l; ++rep) d = d * z;
      if (k * l == 1) d = d * tau;
      povm.kets[static_cast<std::size_t>(idx++)] = {
          inv_s2 * (d(0, 0) * fiducial[0] + d(0, 1) * fiducial[1]),
          inv_s2 * (d(1, 0) * fiducial[0] + d(1, 1) * fiducial[1])};
    }
  }

  const double residual = sic_residual(povm);
  if (residual >= 1e-9) {
    std::ostringstream os;
    os << "displacement orbit is not symmetric: overlap residual " << residual;
    throw NotFiducial(os.str());
  }
  return povm;
}

CVec2 set2_fiducial() {
  const Mat2 u = phase_diag(3.0 * kPi / 4.0) * rot_x(std::acos(1.0 / std::sqrt(3.0)));
  return {u(0, 0), u(1, 0)};
}

QubitPovm4 reference_set(ReferenceSet which) {
  if (which == ReferenceSet::Set1) {
    QubitPovm4 povm;
    povm.kets = set1_kets();
    return povm;
  }
  return wh_covariant_sic(set2_fiducial());
}

QubitPovm4 optimal_sic_for_state(const CVec2& psi1) {
  // Align the first SIC element with the state orthogonal to psi1.
  CVec2 perp{-std::conj(psi1[1]), std::conj(psi1[0])};
  if (std::abs(perp[0]) > 1e-300) {
    const cplx fix = std::polar(1.0, -std::arg(perp[0]));
    perp[0] *= fix;
    perp[1] *= fix;
  }
  SicParams params;
  params.theta1 = 2.0 * std::atan2(std::abs(perp[1]), perp[0].real());
  params.phi1 = std::arg(perp[1]);
  if (params.phi1 < 0.0) params.phi1 += 2.0 * kPi;
  params.delta = 0.0;
  params.c = 0;
  return construct_sic(params);
}

}  // namespace povmc
