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

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "povmc/dilation.hpp"
#include "povmc/equivalence.hpp"
#include "povmc/errors.hpp"
#include "povmc/gates.hpp"
#include "povmc/linalg.hpp"
#include "povmc/optimizer.hpp"
#include "povmc/povm.hpp"
#include "povmc/serial.hpp"
#include "povmc/shadows.hpp"

namespace {

using povmc::Json;

void print_json(const Json& j) { std::printf("%s\n", j.dump(2).c_str()); }

/// Largest entrywise deviation from `want` after aligning the global phase of
/// `got` on the entry where `want` is largest.
double aligned_residual(const povmc::Mat4& got, const povmc::Mat4& want) {
  int br = 0;
  int bc = 0;
  double best = -1.0;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const double mag = std::abs(want(r, c));
      if (mag > best) {
        best = mag;
        br = r;
        bc = c;
      }
    }
  }
  const povmc::cplx pivot = got(br, bc);
  if (std::abs(pivot) < 1e-12) return (got - want).max_abs();
  const povmc::cplx phase = (want(br, bc) / pivot) / std::abs(want(br, bc) / pivot);
  return (got * phase - want).max_abs();
}

/// Accepts either a bare 4×4 matrix or an object wrapping it as "unitary".
povmc::Mat4 unitary_from_file(const std::string& path) {
  const Json j = povmc::load_json_file(path);
  if (j.is_object() && j.contains("unitary")) return povmc::mat4_from_json(j.at("unitary"));
  return povmc::mat4_from_json(j);
}

int cmd_validate(const std::string& path) {
  const povmc::QubitPovm4 povm = povmc::povm_from_json(povmc::load_json_file(path));
  const double completeness = povmc::completeness_residual(povm);
  const double sic = povmc::sic_residual(povm);
  const bool complete = completeness < 1e-9;
  Json out;
  out["complete"] = complete;
  out["ic"] = povmc::is_ic(povm);
  out["sic"] = povmc::is_sic(povm);
  out["residuals"] = Json{{"completeness", completeness}, {"sic", sic}};
  print_json(out);
  return complete ? 0 : 1;
}

int cmd_classify(const std::string& path) {
  const povmc::Mat4 u = unitary_from_file(path);
  const povmc::CanonicalVector k = povmc::canonical_vector(u);
  Json out;
  out["k"] = Json::array({k.k1, k.k2, k.k3});
  out["cnot_count"] = povmc::cnot_count(u);
  print_json(out);
  return 0;
}

int cmd_compile_sic(const std::string& path) {
  const povmc::QubitPovm4 povm = povmc::povm_from_json(povmc::load_json_file(path));
  const povmc::DilationUnitary target = povmc::build_dilation(povm);
  const povmc::PracticalParams practical = povmc::practical_params(target);
  const povmc::GeneralParams general = povmc::general_params(target, practical);

  const povmc::Circuit circuit = povmc::general_circuit(
      practical.u_s, practical.c, general.beta1, general.beta2, general.beta3, general.q);
  const double unitary_residual = aligned_residual(povmc::unitary_of(circuit), target.u);

  const povmc::Circuit one_cnot = povmc::practical_circuit(practical.u_s, practical.c);
  const povmc::QubitPovm4 measured =
      povmc::extract_povm(povmc::DilationUnitary{povmc::unitary_of(one_cnot)});
  const std::array<int, 4> outcome_map = povmc::practical_outcome_map(practical.c);
  double povm_residual = 0.0;
  for (int b = 0; b < 4; ++b) {
    const double dev = (measured.element(b) - povm.element(outcome_map[b])).max_abs();
    if (dev > povm_residual) povm_residual = dev;
  }

  Json out;
  out["c"] = practical.c;
  out["u_s"] = povmc::json_of(practical.u_s);
  out["betas"] = Json::array({general.beta1, general.beta2, general.beta3});
  out["q"] = povmc::json_of(general.q);
  out["circuit"] = povmc::json_of(circuit);
  out["residuals"] = Json{{"unitary", unitary_residual}, {"povm", povm_residual}};
  print_json(out);
  return 0;
}

int cmd_optimize(const std::string& path) {
  const povmc::Mat4 u = unitary_from_file(path);
  const povmc::TwoCnotSearch found = povmc::find_2cnot_theta(povmc::DilationUnitary{u});
  Json out;
  out["theta_star"] = povmc::json_of(found.theta);
  out["unitary"] = povmc::json_of(found.optimized.u);
  out["cnot_count"] = povmc::cnot_count(found.optimized.u);
  print_json(out);
  return 0;
}

int cmd_relabel_table() {
  Json out;
  for (int digit = 1; digit <= 4; ++digit) {
    for (char letter = 'a'; letter <= 'f'; ++letter) {
      const std::array<int, 4> perm = povmc::relabel_permutation({digit, letter});
      std::string cycle;
      for (int b = 0; b < 4; ++b) cycle += static_cast<char>('1' + perm[b]);
      std::string code;
      code += static_cast<char>('0' + digit);
      code += letter;
      out[code] = cycle;
    }
  }
  print_json(out);
  return 0;
}

struct ShadowOptions {
  std::string state = "ghz";
  int qubits = 6;
  double p = 0.2;
  std::int64_t shots = 10000;
  std::uint64_t seed = 0;
  std::string povm = "set1";
  std::string circuit = "3cnot";
  std::string noise = "off";
};

povmc::QubitPovm4 select_povm(const std::string& name) {
  if (name == "set1") return povmc::reference_set(povmc::ReferenceSet::Set1);
  if (name == "set2") return povmc::reference_set(povmc::ReferenceSet::Set2);
  if (name == "optimal") {
    return povmc::optimal_sic_for_state({povmc::cplx(1.0, 0.0), povmc::cplx(0.0, 0.0)});
  }
  return povmc::povm_from_json(povmc::load_json_file(name));
}

povmc::Circuit select_circuit(const std::string& name, const povmc::QubitPovm4& povm) {
  if (name == "1cnot") {
    const povmc::DilationUnitary dilation = povmc::build_dilation(povm);
    const povmc::PracticalParams practical = povmc::practical_params(dilation);
    return povmc::practical_circuit(practical.u_s, practical.c);
  }
  if (name == "2cnot") {
    const povmc::DilationUnitary dilation = povmc::build_dilation(povm);
    return povmc::synthesize(povmc::find_2cnot_theta(dilation).optimized.u);
  }
  if (name == "3cnot") return povmc::synthesize(povmc::build_dilation(povm).u);
  return povmc::circuit_from_json(povmc::load_json_file(name));
}

int cmd_shadow_estimate(const ShadowOptions& opt) {
  if (opt.state != "ghz" && opt.state != "depolarized") {
    throw povmc::Error("unknown state family: " + opt.state);
  }
  if (opt.shots <= 0) throw povmc::Error("shot count must be positive");

  const povmc::QubitPovm4 povm = select_povm(opt.povm);
  if (povmc::completeness_residual(povm) >= 1e-9) {
    throw povmc::IncompletePovm("POVM elements do not sum to the identity");
  }

  std::optional<povmc::NoiseModel> noise;
  if (opt.noise == "default") {
    noise = povmc::NoiseModel::sample(opt.qubits, opt.seed);
  } else if (opt.noise != "off") {
    noise = povmc::noise_from_json(povmc::load_json_file(opt.noise));
  }
  const povmc::NoiseModel* noise_ptr = noise ? &*noise : nullptr;

  const povmc::Circuit circuit = select_circuit(opt.circuit, povm);

  povmc::DensityState target;
  povmc::DensityState rho;
  if (opt.state == "ghz") {
    target = povmc::prepare_ghz(opt.qubits);
    rho = noise_ptr ? povmc::prepare_ghz(opt.qubits, *noise_ptr) : target;
  } else {
    target = povmc::prepare_product(opt.qubits, povmc::Mat2::identity());
    rho = povmc::depolarize(target, opt.p);
  }
  const double ideal = povmc::state_overlap(target, rho);

  const povmc::QubitPovm4 measured =
      povmc::extract_povm(povmc::DilationUnitary{povmc::unitary_of(circuit)});
  const std::array<povmc::Mat2, 4> table = povmc::snapshot_table(measured);

  const std::vector<double> probabilities = povmc::joint_distribution(rho, circuit, noise_ptr);
  const std::vector<std::uint32_t> indices =
      povmc::sample_outcome_indices(probabilities, opt.qubits, opt.shots, opt.seed);
  const std::vector<double> values = povmc::outcome_values(target, opt.qubits, table);
  const std::vector<povmc::DecadeRow> rows = povmc::decade_summary(indices, values, ideal);

  std::printf("shots,mean,std_error,variance,mse_vs_ideal\n");
  for (const povmc::DecadeRow& row : rows) {
    std::printf("%lld,%.17g,%.17g,%.17g,%.17g\n", static_cast<long long>(row.shots), row.mean,
                row.std_error, row.variance, row.mse_vs_ideal);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal-CNOT measurement circuits for single-qubit IC-POVMs"};
  app.require_subcommand(1);

  std::string povm_path;
  std::string unitary_path;
  ShadowOptions shadow;

  CLI::App* validate = app.add_subcommand(
      "validate", "Check a POVM file for completeness, informational completeness, and symmetry");
  validate->add_option("povm", povm_path, "POVM JSON file")->required();

  CLI::App* classify = app.add_subcommand(
      "classify", "Report the interaction point and CNOT cost of a two-qubit unitary");
  classify->add_option("unitary", unitary_path, "Unitary JSON file")->required();

  CLI::App* compile_sic = app.add_subcommand(
      "compile-sic", "Compile a SIC POVM into its one-CNOT measurement circuit");
  compile_sic->add_option("povm", povm_path, "POVM JSON file")->required();

  CLI::App* optimize = app.add_subcommand(
      "optimize", "Search the measurement gauge for a two-CNOT form of a dilation unitary");
  optimize->add_option("unitary", unitary_path, "Unitary JSON file")->required();

  CLI::App* relabel =
      app.add_subcommand("relabel-table", "Print the 24 outcome-relabeling permutations");

  CLI::App* shadow_cmd =
      app.add_subcommand("shadow-estimate", "Run a classical-shadow fidelity estimate");
  shadow_cmd->add_option("--state", shadow.state, "Prepared state family: ghz | depolarized")
      ->capture_default_str();
  shadow_cmd->add_option("--n", shadow.qubits, "Number of system qubits")->capture_default_str();
  shadow_cmd->add_option("--p", shadow.p, "Depolarizing strength for --state depolarized")
      ->capture_default_str();
  shadow_cmd->add_option("--shots", shadow.shots, "Number of measurement shots")
      ->capture_default_str();
  shadow_cmd->add_option("--seed", shadow.seed, "Sampler seed")
      ->envname("POVMC_SEED")
      ->capture_default_str();
  shadow_cmd->add_option("--povm", shadow.povm, "set1 | set2 | optimal | POVM JSON file")
      ->capture_default_str();
  shadow_cmd->add_option("--circuit", shadow.circuit, "1cnot | 2cnot | 3cnot | circuit JSON file")
      ->capture_default_str();
  shadow_cmd->add_option("--noise", shadow.noise, "off | default | noise JSON file")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(povm_path);
    if (classify->parsed()) return cmd_classify(unitary_path);
    if (compile_sic->parsed()) return cmd_compile_sic(povm_path);
    if (optimize->parsed()) return cmd_optimize(unitary_path);
    if (relabel->parsed()) return cmd_relabel_table();
    if (shadow_cmd->parsed()) return cmd_shadow_estimate(shadow);
  } catch (const povmc::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const povmc::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
