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

#include "povmc/gates.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "povmc/dilation.hpp"
#include "povmc/equivalence.hpp"
#include "povmc/errors.hpp"

namespace povmc {
namespace {

constexpr double kPi = std::numbers::pi;

/// Minimal-CNOT body whose canonical vector equals k, for the given CNOT
/// count.
Circuit entangling_template(int count, const std::array<double, 3>& k) {
  Circuit c;
  if (count == 1) {
    c.gates.push_back(Gate::cnot(Wire::Ancilla, Wire::System));
    return c;
  }
  if (count == 2) {
    c.gates.push_back(Gate::cnot(Wire::Ancilla, Wire::System));
    c.gates.push_back(Gate::rx(Wire::Ancilla, 2.0 * k[0]));
    c.gates.push_back(Gate::rz(Wire::System, 2.0 * k[1]));
    c.gates.push_back(Gate::cnot(Wire::Ancilla, Wire::System));
    return c;
  }
  const double d = kPi / 2.0 - 2.0 * k[2];
  const double e = 2.0 * k[0] - kPi / 2.0;
  const double f = kPi / 2.0 - 2.0 * k[1];
  c.gates.push_back(Gate::cnot(Wire::System, Wire::Ancilla));
  c.gates.push_back(Gate::rz(Wire::Ancilla, d));
  c.gates.push_back(Gate::ry(Wire::System, e));
  c.gates.push_back(Gate::cnot(Wire::Ancilla, Wire::System));
  c.gates.push_back(Gate::ry(Wire::System, f));
  c.gates.push_back(Gate::cnot(Wire::System, Wire::Ancilla));
  return c;
}

/// Core Euler extraction in the Z-Y-Z axis convention.
EulerAngles zyz_angles(const Mat2& u) {
  EulerAngles e;
  e.alpha = std::arg(det2(u)) / 2.0;
  const Mat2 v = u * std::polar(1.0, -e.alpha);
  e.theta2 = 2.0 * std::atan2(std::abs(v(1, 0)), std::abs(v(0, 0)));
  if (std::abs(v(1, 0)) < 1e-12) {
    e.theta3 = 0.0;
    e.theta1 = -2.0 * std::arg(v(0, 0));
  } else if (std::abs(v(0, 0)) < 1e-12) {
    e.theta3 = 0.0;
    e.theta1 = 2.0 * std::arg(v(1, 0));
  } else {
    e.theta1 = std::arg(v(1, 0)) + std::arg(v(1, 1));
    e.theta3 = std::arg(v(1, 1)) - std::arg(v(1, 0));
  }
  return e;
}

}  // namespace

Gate Gate::rx(Wire w, double a) {
  Gate g;
  g.kind = GateKind::Rx;
  g.target = w;
  g.angle = a;
  return g;
}

Gate Gate::ry(Wire w, double a) {
  Gate g;
  g.kind = GateKind::Ry;
  g.target = w;
  g.angle = a;
  return g;
}

Gate Gate::rz(Wire w, double a) {
  Gate g;
  g.kind = GateKind::Rz;
  g.target = w;
  g.angle = a;
  return g;
}

Gate Gate::phase(Wire w, double a) {
  Gate g;
  g.kind = GateKind::Phase;
  g.target = w;
  g.angle = a;
  return g;
}

Gate Gate::x(Wire w) {
  Gate g;
  g.kind = GateKind::X;
  g.target = w;
  return g;
}

Gate Gate::h(Wire w) {
  Gate g;
  g.kind = GateKind::H;
  g.target = w;
  return g;
}

Gate Gate::u2(Wire w, const Mat2& m) {
  Gate g;
  g.kind = GateKind::GenericU2;
  g.target = w;
  g.matrix = m;
  return g;
}

Gate Gate::cnot(Wire control, Wire target) {
  Gate g;
  g.kind = GateKind::Cnot;
  g.control = control;
  g.target = target;
  return g;
}

Gate Gate::crz(Wire control, Wire target, double a) {
  Gate g;
  g.kind = GateKind::CRz;
  g.control = control;
  g.target = target;
  g.angle = a;
  return g;
}

Gate Gate::cu2(Wire control, Wire target, const Mat2& m) {
  Gate g;
  g.kind = GateKind::ControlledU2;
  g.control = control;
  g.target = target;
  g.matrix = m;
  return g;
}

bool two_qubit(const Gate& g) {
  return g.kind == GateKind::Cnot || g.kind == GateKind::CRz ||
         g.kind == GateKind::ControlledU2;
}

Mat2 single_qubit_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::Rx:
      return rot_x(g.angle);
    case GateKind::Ry:
      return rot_y(g.angle);
    case GateKind::Rz:
      return rot_z(g.angle);
    case GateKind::Phase:
      return phase_diag(g.angle);
    case GateKind::X:
      return pauli_x();
    case GateKind::H:
      return hadamard();
    case GateKind::GenericU2:
      return g.matrix;
    default:
      throw Error("two-qubit gate has no single-qubit matrix");
  }
}

Mat4 gate_unitary(const Gate& g) {
  if (!two_qubit(g)) {
    const Mat2 m = single_qubit_matrix(g);
    return g.target == Wire::Ancilla ? kron(m, Mat2::identity())
                                     : kron(Mat2::identity(), m);
  }
  Mat2 payload;
  switch (g.kind) {
    case GateKind::Cnot:
      payload = pauli_x();
      break;
    case GateKind::CRz:
      payload = rot_z(g.angle);
      break;
    default:
      payload = g.matrix;
      break;
  }
  Mat4 m = Mat4::zero();
  for (int col = 0; col < 4; ++col) {
    const int abit = col >> 1;
    const int sbit = col & 1;
    const int cbit = (g.control == Wire::Ancilla) ? abit : sbit;
    if (cbit == 0) {
      m(col, col) = 1.0;
      continue;
    }
    const int tbit = (g.target == Wire::Ancilla) ? abit : sbit;
    for (int tp = 0; tp < 2; ++tp) {
      const int row =
          (g.target == Wire::Ancilla) ? (2 * tp + sbit) : (2 * abit + tp);
      m(row, col) += payload(tp, tbit);
    }
  }
  return m;
}

int Circuit::cnots() const {
  int n = 0;
  for (const Gate& g : gates)
    if (g.kind == GateKind::Cnot) ++n;
  return n;
}

Mat4 unitary_of(const Circuit& circuit) {
  Mat4 u = Mat4::identity();
  for (const Gate& g : circuit.gates) u = gate_unitary(g) * u;
  return u;
}

EulerAngles decompose_1q(const Mat2& u, EulerBasis basis) {
  const Mat2 s = phase_diag(kPi / 2.0);
  switch (basis) {
    case EulerBasis::Zyz:
      return zyz_angles(u);
    case EulerBasis::Zxz:
      return zyz_angles(s * u * s.adjoint());
    default: {
      const Mat2 h = hadamard();
      return zyz_angles(s * (h * u * h) * s.adjoint());
    }
  }
}

ControlledFactors decompose_controlled_u(const Mat2& u) {
  const EulerAngles e = decompose_1q(u, EulerBasis::Zyz);
  ControlledFactors f;
  f.alpha = e.alpha;
  f.a = rot_z(e.theta1) * rot_y(e.theta2 / 2.0);
  f.b = rot_y(-e.theta2 / 2.0) * rot_z(-(e.theta3 + e.theta1) / 2.0);
  f.c = rot_z((e.theta3 - e.theta1) / 2.0);
  return f;
}

Circuit commute_rz_rx_through_cnot(const Circuit& circuit) {
  Circuit out = circuit;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t i = 0; i + 1 < out.gates.size(); ++i) {
      const Gate& g = out.gates[i];
      const Gate& next = out.gates[i + 1];
      if (next.kind != GateKind::Cnot) continue;
      const bool rz_past_control =
          g.kind == GateKind::Rz && g.target == next.control;
      const bool rx_past_target =
          g.kind == GateKind::Rx && g.target == next.target;
      if (rz_past_control || rx_past_target) {
        std::swap(out.gates[i], out.gates[i + 1]);
        moved = true;
      }
    }
  }
  return out;
}

Circuit synthesize(const Mat4& u) {
  const int count = cnot_count(u);
  const KakDecomposition du = kak_decompose(u);
  Circuit out;
  if (count == 0) {
    const LocalFactors f =
        factor_local((du.l * du.r) * std::polar(1.0, du.delta));
    out.gates.push_back(Gate::u2(Wire::Ancilla, f.a));
    out.gates.push_back(Gate::u2(Wire::System, f.b));
  } else {
    Circuit body = entangling_template(count, du.k);
    const KakDecomposition dt = kak_decompose(unitary_of(body));
    const LocalFactors pre = factor_local(dt.r.adjoint() * du.r);
    LocalFactors post = factor_local(du.l * dt.l.adjoint());
    post.a = post.a * std::polar(1.0, du.delta - dt.delta);
    out.gates.push_back(Gate::u2(Wire::Ancilla, pre.a));
    out.gates.push_back(Gate::u2(Wire::System, pre.b));
    for (const Gate& g : body.gates) out.gates.push_back(g);
    out.gates.push_back(Gate::u2(Wire::Ancilla, post.a));
    out.gates.push_back(Gate::u2(Wire::System, post.b));
  }
  const double residual = max_abs_diff(unitary_of(out), u);
  if (residual > 1e-8) {
    std::ostringstream os;
    os << "synthesized circuit misses target by " << residual;
    throw SynthesisMismatch(os.str());
  }
  return out;
}

Circuit practical_circuit(const Mat2& u_s, int c) {
  (void)c;  // the ordering bit changes only the outcome map, not the gates
  const CVec2 f = set2_fiducial();
  const Mat2 u_a =
      unitary_from_first_column({std::conj(f[0]), std::conj(f[1])});
  Circuit circ;
  circ.gates.push_back(Gate::u2(Wire::System, u_s));
  circ.gates.push_back(Gate::u2(Wire::Ancilla, u_a));
  circ.gates.push_back(Gate::cnot(Wire::System, Wire::Ancilla));
  circ.gates.push_back(Gate::h(Wire::System));
  return circ;
}

std::array<int, 4> practical_outcome_map(int c) {
  return (c == 1) ? std::array<int, 4>{0, 1, 2, 3}
                  : std::array<int, 4>{0, 1, 3, 2};
}

Circuit general_circuit(const Mat2& u_s, int c, double beta1, double beta2,
                        double beta3, const Mat2& q) {
  const CVec2 f = set2_fiducial();
  const Mat2 u_a =
      unitary_from_first_column({std::conj(f[0]), std::conj(f[1])});
  Circuit circ;
  circ.gates.push_back(Gate::cu2(Wire::Ancilla, Wire::System, q));
  circ.gates.push_back(Gate::u2(Wire::System, u_s));
  circ.gates.push_back(Gate::u2(Wire::Ancilla, u_a));
  circ.gates.push_back(Gate::cnot(Wire::System, Wire::Ancilla));
  circ.gates.push_back(Gate::h(Wire::System));
  circ.gates.push_back(Gate::phase(Wire::Ancilla, beta1 + beta3 / 2.0));
  circ.gates.push_back(Gate::phase(Wire::System, beta2));
  circ.gates.push_back(Gate::crz(Wire::Ancilla, Wire::System, beta3));
  if (c == 0) circ.gates.push_back(Gate::cnot(Wire::Ancilla, Wire::System));
  return circ;
}

}  // namespace povmc
