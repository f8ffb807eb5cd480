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

#include "povmc/serial.hpp"

#include <cmath>
#include <fstream>
#include <string>
#include <utility>

namespace povmc {

namespace {

double number_field(const Json& j, const std::string& what) {
  if (!j.is_number())
    throw ParseError(what + " must be a number, got " + j.dump());
  return j.get<double>();
}

const Json& member(const Json& j, const std::string& key,
                   const std::string& context) {
  if (!j.is_object())
    throw ParseError(context + " must be a JSON object");
  const auto it = j.find(key);
  if (it == j.end())
    throw ParseError(context + " is missing the \"" + key + "\" field");
  return *it;
}

void expect_array(const Json& j, std::size_t size, const std::string& what) {
  if (!j.is_array() || j.size() != size)
    throw ParseError(what + " must be an array of " + std::to_string(size) +
                     " entries");
}

std::string wire_name(Wire w) {
  return w == Wire::Ancilla ? "ancilla" : "system";
}

Wire wire_from_name(const Json& j, const std::string& context) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "ancilla") return Wire::Ancilla;
    if (s == "system") return Wire::System;
  }
  throw ParseError(context + " must be \"ancilla\" or \"system\", got " +
                   j.dump());
}

struct KindName {
  GateKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {GateKind::Rx, "rx"},           {GateKind::Ry, "ry"},
    {GateKind::Rz, "rz"},           {GateKind::Phase, "phase"},
    {GateKind::X, "x"},             {GateKind::H, "h"},
    {GateKind::GenericU2, "u2"},    {GateKind::Cnot, "cnot"},
    {GateKind::CRz, "crz"},         {GateKind::ControlledU2, "cu2"},
};

std::string kind_name(GateKind k) {
  for (const KindName& entry : kKindNames)
    if (entry.kind == k) return entry.name;
  throw Error("unknown gate kind");
}

GateKind kind_from_name(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    for (const KindName& entry : kKindNames)
      if (s == entry.name) return entry.kind;
  }
  throw ParseError("unknown gate kind " + j.dump());
}

Mat2 matrix_from_euler(const Json& angles) {
  expect_array(angles, 4, "\"angles\"");
  const double alpha = number_field(angles[0], "angles[0]");
  const double t1 = number_field(angles[1], "angles[1]");
  const double t2 = number_field(angles[2], "angles[2]");
  const double t3 = number_field(angles[3], "angles[3]");
  return (rot_z(t1) * rot_y(t2) * rot_z(t3)) * std::polar(1.0, alpha);
}

Json euler_of_matrix(const Mat2& m) {
  const EulerAngles e = decompose_1q(m, EulerBasis::Zyz);
  return Json::array({e.alpha, e.theta1, e.theta2, e.theta3});
}

}  // namespace

Json json_of(const cplx& z) { return Json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const Json& j) {
  expect_array(j, 2, "complex entry");
  return {number_field(j[0], "real part"), number_field(j[1], "imag part")};
}

Json json_of(const Mat2& m) {
  Json rows = Json::array();
  for (int r = 0; r < 2; ++r) {
    Json row = Json::array();
    for (int c = 0; c < 2; ++c) row.push_back(json_of(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json json_of(const Mat4& m) {
  Json rows = Json::array();
  for (int r = 0; r < 4; ++r) {
    Json row = Json::array();
    for (int c = 0; c < 4; ++c) row.push_back(json_of(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat2 mat2_from_json(const Json& j) {
  expect_array(j, 2, "2x2 matrix");
  Mat2 m;
  for (int r = 0; r < 2; ++r) {
    expect_array(j[r], 2, "2x2 matrix row");
    for (int c = 0; c < 2; ++c) m(r, c) = cplx_from_json(j[r][c]);
  }
  return m;
}

Mat4 mat4_from_json(const Json& j) {
  expect_array(j, 4, "4x4 matrix");
  Mat4 m;
  for (int r = 0; r < 4; ++r) {
    expect_array(j[r], 4, "4x4 matrix row");
    for (int c = 0; c < 4; ++c) m(r, c) = cplx_from_json(j[r][c]);
  }
  return m;
}

Json json_of(const QubitPovm4& povm) {
  Json kets = Json::array();
  for (const CVec2& ket : povm.kets)
    kets.push_back(Json::array({json_of(ket[0]), json_of(ket[1])}));
  Json doc;
  doc["kets"] = std::move(kets);
  return doc;
}

QubitPovm4 povm_from_json(const Json& j) {
  const Json& kets = member(j, "kets", "POVM document");
  expect_array(kets, 4, "\"kets\"");
  QubitPovm4 povm;
  for (int i = 0; i < 4; ++i) {
    expect_array(kets[i], 2, "ket");
    povm.kets[i] = {cplx_from_json(kets[i][0]), cplx_from_json(kets[i][1])};
  }
  return povm;
}

Json json_of(const ThetaDelta& theta) {
  const std::array<double, 7> a = theta.as_array();
  Json doc;
  doc["theta"] = Json(a);
  doc["beta0"] = theta.beta0;
  return doc;
}

ThetaDelta theta_from_json(const Json& j) {
  const Json& arr = member(j, "theta", "theta document");
  expect_array(arr, 7, "\"theta\"");
  std::array<double, 7> a{};
  for (int i = 0; i < 7; ++i)
    a[i] = number_field(arr[i], "theta[" + std::to_string(i) + "]");
  ThetaDelta theta = ThetaDelta::from_array(a);
  if (j.contains("beta0"))
    theta.beta0 = number_field(j.at("beta0"), "\"beta0\"");
  return theta;
}

Json json_of(const Circuit& circuit) {
  Json gates = Json::array();
  for (const Gate& g : circuit.gates) {
    Json entry;
    entry["kind"] = kind_name(g.kind);
    if (two_qubit(g)) entry["control"] = wire_name(g.control);
    entry["target"] = wire_name(g.target);
    switch (g.kind) {
      case GateKind::Rx:
      case GateKind::Ry:
      case GateKind::Rz:
      case GateKind::Phase:
      case GateKind::CRz:
        entry["angle"] = g.angle;
        break;
      case GateKind::GenericU2:
      case GateKind::ControlledU2:
        entry["angles"] = euler_of_matrix(g.matrix);
        break;
      default:
        break;
    }
    gates.push_back(std::move(entry));
  }
  Json doc;
  doc["gates"] = std::move(gates);
  return doc;
}

Circuit circuit_from_json(const Json& j) {
  const Json& gates = member(j, "gates", "circuit document");
  if (!gates.is_array())
    throw ParseError("\"gates\" must be an array");
  Circuit circuit;
  for (const Json& entry : gates) {
    const GateKind kind = kind_from_name(member(entry, "kind", "gate"));
    const auto target = [&] {
      return wire_from_name(member(entry, "target", "gate"), "\"target\"");
    };
    const auto control = [&] {
      return wire_from_name(member(entry, "control", "gate"), "\"control\"");
    };
    const auto angle = [&] {
      return number_field(member(entry, "angle", "gate"), "\"angle\"");
    };
    switch (kind) {
      case GateKind::Rx:
        circuit.gates.push_back(Gate::rx(target(), angle()));
        break;
      case GateKind::Ry:
        circuit.gates.push_back(Gate::ry(target(), angle()));
        break;
      case GateKind::Rz:
        circuit.gates.push_back(Gate::rz(target(), angle()));
        break;
      case GateKind::Phase:
        circuit.gates.push_back(Gate::phase(target(), angle()));
        break;
      case GateKind::X:
        circuit.gates.push_back(Gate::x(target()));
        break;
      case GateKind::H:
        circuit.gates.push_back(Gate::h(target()));
        break;
      case GateKind::GenericU2:
        circuit.gates.push_back(Gate::u2(
            target(), matrix_from_euler(member(entry, "angles", "gate"))));
        break;
      case GateKind::Cnot: {
        const Wire c = control();
        const Wire t = target();
        if (c == t) throw ParseError("cnot control and target coincide");
        circuit.gates.push_back(Gate::cnot(c, t));
        break;
      }
      case GateKind::CRz: {
        const Wire c = control();
        const Wire t = target();
        if (c == t) throw ParseError("crz control and target coincide");
        circuit.gates.push_back(Gate::crz(c, t, angle()));
        break;
      }
      case GateKind::ControlledU2: {
        const Wire c = control();
        const Wire t = target();
        if (c == t) throw ParseError("cu2 control and target coincide");
        circuit.gates.push_back(Gate::cu2(
            c, t, matrix_from_euler(member(entry, "angles", "gate"))));
        break;
      }
    }
  }
  return circuit;
}

Json json_of(const NoiseModel& noise) {
  Json doc;
  doc["t1"] = Json(noise.t1);
  doc["t2"] = Json(noise.t2);
  doc["gate_time_1q"] = noise.gate_time_1q;
  doc["gate_time_2q"] = noise.gate_time_2q;
  doc["measure_reset_time"] = noise.measure_reset_time;
  doc["seed"] = noise.seed;
  return doc;
}

NoiseModel noise_from_json(const Json& j) {
  NoiseModel noise;
  const Json& t1 = member(j, "t1", "noise document");
  const Json& t2 = member(j, "t2", "noise document");
  if (!t1.is_array() || !t2.is_array() || t1.size() != t2.size() ||
      t1.size() < 2)
    throw ParseError("noise \"t1\"/\"t2\" must be equal-length arrays "
                     "covering the system qubits plus the ancilla");
  for (std::size_t i = 0; i < t1.size(); ++i) {
    noise.t1.push_back(number_field(t1[i], "t1[" + std::to_string(i) + "]"));
    noise.t2.push_back(number_field(t2[i], "t2[" + std::to_string(i) + "]"));
  }
  if (j.contains("gate_time_1q"))
    noise.gate_time_1q = number_field(j.at("gate_time_1q"), "gate_time_1q");
  if (j.contains("gate_time_2q"))
    noise.gate_time_2q = number_field(j.at("gate_time_2q"), "gate_time_2q");
  if (j.contains("measure_reset_time"))
    noise.measure_reset_time =
        number_field(j.at("measure_reset_time"), "measure_reset_time");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
      throw ParseError("noise \"seed\" must be an integer");
    noise.seed = j.at("seed").get<std::uint64_t>();
  }
  for (std::size_t i = 0; i < noise.t1.size(); ++i) {
    if (!(noise.t2[i] > 0.0 && noise.t2[i] <= noise.t1[i]))
      throw InvalidTimes("noise entry " + std::to_string(i) +
                         " violates 0 < T2 <= T1");
  }
  if (!(noise.gate_time_1q > 0.0 && noise.gate_time_2q > 0.0 &&
        noise.measure_reset_time > 0.0))
    throw InvalidTimes("noise durations must be positive");
  return noise;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("failed to parse " + path + ": " + e.what());
  }
}

}  // namespace povmc
