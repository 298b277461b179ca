// Copyright 2026 The hamgate Authors
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

// hamgate: decomposition, energy bounds, branch optimization, drive
// simulation, and Monte Carlo verification for Hamiltonian gates.
//
// Exit codes: 0 success, 2 usage or validation error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hamgate/hamgate.hpp"

namespace {

using namespace hamgate;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Target {
  std::string label;
  ComplexMatrix unitary;
  std::optional<Circuit> circuit;
};

Target resolve_target(const std::string& token, int controls) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_regular_file(token, ec)) {
    Circuit c = load_circuit(token);
    return {fs::path(token).filename().string(), circuit_unitary(c), std::move(c)};
  }
  auto [name, params] = parse_gate_token(token);
  auto kind = gate_kind_from_name(name);
  if (!kind || *kind == GateKind::CUSTOM) {
    throw Error(ErrorKind::UnknownGate, "unknown gate or missing file '" + token + "'");
  }
  GateSpec spec = make_gate(*kind, std::move(params), controls);
  return {gate_label(spec), standard_gate(spec), std::nullopt};
}

BranchSpec parse_branch(const std::string& text, Eigen::Index dim) {
  if (text.empty()) return BranchSpec::principal(static_cast<std::size_t>(dim));
  BranchSpec b;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      b.offsets.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "bad branch offset '" + item + "'");
    }
  }
  if (b.offsets.size() != static_cast<std::size_t>(dim)) {
    throw Error(ErrorKind::BranchLengthMismatch,
                "branch needs " + std::to_string(dim) + " offsets");
  }
  return b;
}

std::string format_values(const std::vector<double>& v) {
  std::string s = "{";
  char buf[40];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10g", v[i]);
    s += (i ? ", " : "") + std::string(buf);
  }
  return s + "}";
}

void emit(const nlohmann::json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + out_path);
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

struct DecomposeArgs {
  std::string target;
  int controls = 0;
  std::string branch;
  std::string basis = "wht";
  bool json = false;
  double zero_tol = kZeroTol;
  bool exclude_identity = false;
};

int run_decompose(const DecomposeArgs& a) {
  const Target t = resolve_target(a.target, a.controls);
  const BranchSpec branch = parse_branch(a.branch, t.unitary.rows());
  const Basis basis = a.basis == "pauli" ? Basis::Pauli : Basis::Wht;
  const auto r = decomposition_report(t.label, t.unitary, branch, basis, a.zero_tol,
                                      !a.exclude_identity);
  if (a.json) {
    emit(to_json(r), "");
    return 0;
  }
  std::printf("gate        %s\n", r.gate.c_str());
  std::printf("basis       %s\n", std::string(to_string(r.basis)).c_str());
  std::printf("branch      %s\n", r.branch.is_principal() ? "principal" : a.branch.c_str());
  std::printf("multiset    %s\n", format_values(r.multiset.values).c_str());
  std::printf("terms\n");
  for (const auto& term : r.terms) {
    std::printf("  %-14s % .12f\n", term.label.c_str(), term.coefficient);
  }
  std::printf("entangling  %s (max Pauli weight %d)\n", r.entangling ? "yes" : "no",
              r.max_weight);
  if (r.basis == Basis::Pauli && !(r.commuting && r.involutory)) {
    std::printf("note        Pauli terms do not commute; error bounds do not apply\n");
  }
  return 0;
}

struct BoundArgs {
  std::string target;
  int controls = 0;
  double omega0 = 1.0;
  double epsilon = 0.01;
  double hbar = 1.0;
  bool si = false;
  std::string scenario = "both";
  std::string branch;
  bool allow_infinite = false;
  bool json = false;
};

void check_physics(double omega0, double epsilon, double hbar, bool allow_infinite) {
  if (!(omega0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "--omega0 must be > 0");
  if (!(hbar > 0.0)) throw Error(ErrorKind::InvalidArgument, "--hbar must be > 0");
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::InvalidArgument, "--epsilon must be >= 0");
  if (epsilon == 0.0 && !allow_infinite) {
    throw Error(ErrorKind::InvalidArgument,
                "--epsilon 0 needs --allow-infinite (perfect gates need unbounded energy)");
  }
}

void print_budget(const BudgetReport& b) {
  std::printf("%-20s %-6s %18s %18s\n", "gate", "terms", "independent", "shared");
  for (const auto& g : b.per_gate) {
    std::printf("%-20s %-6zu %18.10g %18.10g\n", g.gate.c_str(), g.multiset.size(),
                g.independent, g.shared);
  }
  std::printf("%-20s %-6s %18.10g %18.10g\n", "total", "", b.total_independent,
              b.total_shared);
  std::printf("epsilon_total %.10g, per gate %.10g (%s split)\n", b.epsilon_total,
              b.epsilon_per_gate, b.split_rule.c_str());
}

int run_bound(const BoundArgs& a) {
  const double hbar = a.si ? kHbarSI : a.hbar;
  check_physics(a.omega0, a.epsilon, hbar, a.allow_infinite);
  const Target t = resolve_target(a.target, a.controls);
  if (t.circuit && t.circuit->gates.size() != 1 && a.branch.empty()) {
    const auto b = circuit_budget(*t.circuit, a.omega0, a.epsilon, hbar);
    if (a.json) {
      emit(to_json(b), "");
    } else {
      print_budget(b);
    }
    return 0;
  }
  const BranchSpec branch = parse_branch(a.branch, t.unitary.rows());
  const auto m = coefficient_multiset(wht_decompose(t.unitary, branch));
  const auto r = energy_report(t.label, m, a.omega0, a.epsilon, hbar, branch);
  if (a.json) {
    auto j = to_json(r);
    j["schema"] = kSchemaVersion;
    j["scenario"] = a.scenario;
    emit(j, "");
    return 0;
  }
  std::printf("gate         %s\n", r.gate.c_str());
  std::printf("multiset     %s\n", format_values(m.values).c_str());
  std::printf("omega0 %.6g  epsilon %.6g  hbar %.6g\n", r.omega0, r.epsilon, r.hbar);
  if (a.scenario != "shared") std::printf("independent  %.10g\n", r.independent);
  if (a.scenario != "independent") std::printf("shared       %.10g\n", r.shared);
  return 0;
}

struct BudgetArgs {
  std::string circuit;
  double omega0 = 1.0;
  double epsilon = 0.01;
  double hbar = 1.0;
  bool si = false;
  bool allow_infinite = false;
  bool json = false;
};

int run_budget(const BudgetArgs& a) {
  const double hbar = a.si ? kHbarSI : a.hbar;
  check_physics(a.omega0, a.epsilon, hbar, a.allow_infinite);
  const Circuit c = load_circuit(a.circuit);
  const auto b = circuit_budget(c, a.omega0, a.epsilon, hbar);
  if (a.json) {
    emit(to_json(b), "");
  } else {
    print_budget(b);
  }
  return 0;
}

struct OptimizeArgs {
  std::string target;
  int controls = 0;
  std::string objective = "shared";
  int offset_bound = 2;
  std::string strategy = "exhaustive";
  bool json = false;
};

// Sum of per-qubit principal logs when the circuit is one single-qubit gate
// per qubit.
std::optional<ComplexMatrix> local_sum_generator(const Circuit& c) {
  std::vector<std::pair<int, ComplexMatrix>> logs;
  std::vector<bool> used(static_cast<std::size_t>(c.n_qubits), false);
  for (const auto& g : c.gates) {
    if (g.qubits.size() != 1 || used[g.qubits[0]]) return std::nullopt;
    used[g.qubits[0]] = true;
    logs.emplace_back(g.qubits[0], principal_log(standard_gate(g)));
  }
  return local_sum_hamiltonian(c.n_qubits, logs);
}

int run_optimize(const OptimizeArgs& a) {
  const Target t = resolve_target(a.target, a.controls);
  const auto objective =
      a.objective == "independent" ? BranchObjective::IndependentSum : BranchObjective::SharedMax;
  BranchSearch search;
  search.offset_bound = a.offset_bound;
  search.strategy = a.strategy == "local" ? SearchStrategy::LocalSearch : SearchStrategy::Exhaustive;
  const auto best = optimize_branch(t.unitary, objective, search);
  const bool improved = best.objective_value < best.principal_value;

  nlohmann::json j{{"schema", kSchemaVersion},
                   {"gate", t.label},
                   {"objective", std::string(to_string(objective))},
                   {"strategy", std::string(to_string(search.strategy))},
                   {"offset_bound", search.offset_bound},
                   {"principal_value", best.principal_value},
                   {"objective_value", best.objective_value},
                   {"branch", best.branch.offsets},
                   {"multiset", best.multiset.values},
                   {"improved", improved},
                   {"evaluations", best.evaluations}};
  std::optional<double> local_value;
  if (t.circuit) {
    if (auto k = local_sum_generator(*t.circuit)) {
      const auto terms = pauli_decompose(*k);
      const auto m = coefficient_multiset(std::span<const PauliTerm>(terms));
      local_value = branch_objective(m, objective);
      j["local_sum"] = {{"multiset", m.values},
                        {"objective_value", *local_value},
                        {"ratio", best.objective_value / *local_value}};
    }
  }
  if (a.json) {
    emit(j, "");
    return 0;
  }
  std::printf("gate             %s\n", t.label.c_str());
  std::printf("objective        %s (%s, bound %d, %zu evaluations)\n",
              std::string(to_string(objective)).c_str(),
              std::string(to_string(search.strategy)).c_str(), search.offset_bound,
              best.evaluations);
  std::printf("principal value  %.12g\n", best.principal_value);
  std::printf("best value       %.12g%s\n", best.objective_value,
              improved ? "" : "  (no improvement found)");
  std::string offs;
  for (auto k : best.branch.offsets) offs += (offs.empty() ? "" : ",") + std::to_string(k);
  std::printf("branch           %s\n", offs.c_str());
  std::printf("multiset         %s\n", format_values(best.multiset.values).c_str());
  if (local_value) {
    std::printf("local-sum value  %.12g (ratio best/local %.6g)\n", *local_value,
                best.objective_value / *local_value);
  }
  return 0;
}

struct SimulateArgs {
  std::string variant = "entangling";
  double tau = 1.0;
  int steps = 200;
  std::string out;
  std::string format;
};

int run_simulate(const SimulateArgs& a) {
  if (!(a.tau > 0.0)) throw Error(ErrorKind::InvalidArgument, "--tau must be > 0");
  if (a.steps < 1) throw Error(ErrorKind::InvalidArgument, "--steps must be >= 1");
  Figure1Config cfg;
  cfg.variant = a.variant == "localsum" ? Figure1Variant::LocalSum : Figure1Variant::Entangling;
  cfg.tau = a.tau;
  cfg.n_steps = a.steps;
  const auto trace = figure1_run(cfg);
  std::string format = a.format;
  if (format.empty()) {
    format = std::filesystem::path(a.out).extension() == ".json" ? "json" : "csv";
  }
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw Error(ErrorKind::Io, "cannot write " + a.out);
  }
  std::ostream& out = a.out.empty() ? std::cout : file;
  if (format == "json") {
    out << trace_to_json(trace).dump(2) << '\n';
  } else {
    write_trace_csv(out, trace);
  }
  return 0;
}

struct VerifyArgs {
  std::string target;
  int controls = 0;
  long long samples = 1000;
  std::uint64_t seed = 1;
  std::string field;
  std::string scenario;
  int states = 8;
  unsigned threads = 1;
  std::string out;
};

FieldConfig default_field() {
  FieldConfig f;
  f.tau = 1.0;
  f.modes.push_back(FieldMode{kPi, Complex(0.0, 0.0), 0.05});
  return f;
}

int run_verify(const VerifyArgs& a) {
  if (a.samples < 1) throw Error(ErrorKind::InvalidArgument, "--samples must be >= 1");
  if (a.states < 0) throw Error(ErrorKind::InvalidArgument, "--states must be >= 0");
  const Target t = resolve_target(a.target, a.controls);
  FieldConfig f = a.field.empty() ? default_field() : load_field(a.field);
  if (a.scenario == "independent") f.scenario = CouplingScenario::Independent;
  if (a.scenario == "shared") f.scenario = CouplingScenario::Shared;
  const auto d = wht_decompose(t.unitary);
  McOptions opt;
  opt.n_samples = static_cast<std::size_t>(a.samples);
  opt.seed = a.seed;
  opt.states_per_sample = static_cast<std::size_t>(a.states);
  opt.threads = a.threads;
  const auto r = mc_verify(d, f, opt);
  emit(to_json(r, t.label), a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy bounds and decompositions for Hamiltonian quantum gates"};
  app.require_subcommand(1);

  DecomposeArgs dec;
  auto* c_dec = app.add_subcommand("decompose", "Commuting decomposition and coefficient multiset");
  c_dec->add_option("target", dec.target, "Gate token (X, RZ(pi/2), CNX, ...) or circuit file")
      ->required();
  c_dec->add_option("--controls", dec.controls, "Controls for CNX/CNH/CNTOFF")
      ->check(CLI::NonNegativeNumber);
  c_dec->add_option("--branch", dec.branch, "Comma-separated eigenphase offsets");
  c_dec->add_option("--basis", dec.basis)->check(CLI::IsMember({"wht", "pauli"}));
  c_dec->add_option("--zero-tol", dec.zero_tol)->check(CLI::PositiveNumber);
  c_dec->add_flag("--exclude-identity", dec.exclude_identity,
                  "Drop the identity coefficient from the multiset");
  c_dec->add_flag("--json", dec.json);

  BoundArgs bnd;
  auto* c_bnd = app.add_subcommand("bound", "Field-energy lower bounds for a gate or circuit");
  c_bnd->add_option("target", bnd.target)->required();
  c_bnd->add_option("--controls", bnd.controls)->check(CLI::NonNegativeNumber);
  c_bnd->add_option("--omega0", bnd.omega0, "Lowest mode angular frequency");
  c_bnd->add_option("--epsilon", bnd.epsilon, "Target gate error (circuit total for files)");
  c_bnd->add_option("--hbar", bnd.hbar);
  c_bnd->add_flag("--si", bnd.si, "Use the SI value of hbar");
  c_bnd->add_option("--scenario", bnd.scenario)
      ->check(CLI::IsMember({"shared", "independent", "both"}));
  c_bnd->add_option("--branch", bnd.branch);
  c_bnd->add_flag("--allow-infinite", bnd.allow_infinite);
  c_bnd->add_flag("--json", bnd.json);

  BudgetArgs bud;
  auto* c_bud = app.add_subcommand("budget", "Circuit energy budget with an equal error split");
  c_bud->add_option("circuit", bud.circuit)->required()->check(CLI::ExistingFile);
  c_bud->add_option("--omega0", bud.omega0);
  c_bud->add_option("--epsilon", bud.epsilon, "Total error budget");
  c_bud->add_option("--hbar", bud.hbar);
  c_bud->add_flag("--si", bud.si);
  c_bud->add_flag("--allow-infinite", bud.allow_infinite);
  c_bud->add_flag("--json", bud.json);

  OptimizeArgs opt;
  auto* c_opt = app.add_subcommand("optimize", "Search logarithm branches for minimum energy");
  c_opt->add_option("target", opt.target)->required();
  c_opt->add_option("--controls", opt.controls)->check(CLI::NonNegativeNumber);
  c_opt->add_option("--objective", opt.objective)->check(CLI::IsMember({"shared", "independent"}));
  c_opt->add_option("--offset-bound", opt.offset_bound)->check(CLI::NonNegativeNumber);
  c_opt->add_option("--strategy", opt.strategy)->check(CLI::IsMember({"exhaustive", "local"}));
  c_opt->add_flag("--json", opt.json);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Drive the two-qubit NOT-NOT generators from |00>");
  c_sim->add_option("--variant", sim.variant)->check(CLI::IsMember({"entangling", "localsum"}));
  c_sim->add_option("--tau", sim.tau);
  c_sim->add_option("--steps", sim.steps);
  c_sim->add_option("--out", sim.out, "Output file (.csv or .json); stdout if omitted");
  c_sim->add_option("--format", sim.format)->check(CLI::IsMember({"csv", "json"}));

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "Monte Carlo check of the error theorems");
  c_ver->add_option("target", ver.target)->required();
  c_ver->add_option("--controls", ver.controls)->check(CLI::NonNegativeNumber);
  c_ver->add_option("--samples", ver.samples);
  c_ver->add_option("--seed", ver.seed);
  c_ver->add_option("--field", ver.field, "Field specification JSON")->check(CLI::ExistingFile);
  c_ver->add_option("--scenario", ver.scenario)->check(CLI::IsMember({"shared", "independent"}));
  c_ver->add_option("--states", ver.states, "Haar states per sample");
  c_ver->add_option("--threads", ver.threads);
  c_ver->add_option("--out", ver.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*c_dec) return run_decompose(dec);
    if (*c_bnd) return run_bound(bnd);
    if (*c_bud) return run_budget(bud);
    if (*c_opt) return run_optimize(opt);
    if (*c_sim) return run_simulate(sim);
    if (*c_ver) return run_verify(ver);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::NumericalFailure ? kExitNumerical : kExitUsage;
  }
  return kExitUsage;
}
