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

#include <string>

#include <nlohmann/json.hpp>

#include "povmc/dilation.hpp"
#include "povmc/errors.hpp"
#include "povmc/gates.hpp"
#include "povmc/linalg.hpp"
#include "povmc/povm.hpp"
#include "povmc/shadows.hpp"

namespace povmc {

/// Malformed input document: missing fields, wrong shapes, bad enum strings.
/// Distinct from the domain errors so the caller can map it to an I/O exit
/// code.
struct ParseError : Error {
  using Error::Error;
};

/// Order-preserving JSON document type used by every serializer, so encoded
/// output is byte-stable.
using Json = nlohmann::ordered_json;

/// Complex scalars encode as [re, im]; matrices as row-major nested arrays
/// of those pairs.
Json json_of(const cplx& z);
Json json_of(const Mat2& m);
Json json_of(const Mat4& m);
cplx cplx_from_json(const Json& j);
Mat2 mat2_from_json(const Json& j);
Mat4 mat4_from_json(const Json& j);

/// POVM document: {"kets": [[[re,im],[re,im]] x4]}.
Json json_of(const QubitPovm4& povm);
QubitPovm4 povm_from_json(const Json& j);

/// Measurement-irrelevant parameter document:
/// {"theta": [gamma0,gamma1,gamma2,gamma3,beta1,beta2,beta3], "beta0": x}.
Json json_of(const ThetaDelta& theta);
ThetaDelta theta_from_json(const Json& j);

/// Circuit document: {"gates": [...]} where each gate carries "kind",
/// "target" (and "control" for two-wire kinds) as wire names, plus "angle"
/// for rotations or "angles": [alpha, t1, t2, t3] — a phase and Z-Y-Z Euler
/// triple — for the generic one-qubit kinds.
Json json_of(const Circuit& circuit);
Circuit circuit_from_json(const Json& j);

/// Noise document: {"t1": [...], "t2": [...]} in seconds (system qubits in
/// register order, ancilla last) plus optional "gate_time_1q",
/// "gate_time_2q", "measure_reset_time", "seed".
Json json_of(const NoiseModel& noise);
NoiseModel noise_from_json(const Json& j);

/// Reads and parses a JSON file; throws ParseError on unreadable files or
/// malformed JSON.
Json load_json_file(const std::string& path);

}  // namespace povmc
