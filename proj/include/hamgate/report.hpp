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

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hamgate/decomposition.hpp"
#include "hamgate/energetics.hpp"
#include "hamgate/error_model.hpp"
#include "hamgate/evolution_sim.hpp"
#include "hamgate/gate_library.hpp"

namespace hamgate {

inline constexpr int kSchemaVersion = 1;

using nlohmann::json;

// Non-finite numbers are written as null.
inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---------------------------------------------------------------------------
// Decomposition report

struct DecompositionReport {
  std::string gate;
  BranchSpec branch;
  Basis basis = Basis::Wht;
  std::vector<PauliTerm> terms;  // label + coefficient, zero terms dropped
  CoefficientMultiset multiset;
  bool entangling = false;
  int max_weight = 0;
  bool commuting = true;
  bool involutory = true;
};

/**
 * Decomposes `u` on `branch` in the requested basis. The entangleability
 * flags always come from the Pauli expansion of the branch generator.
 */
inline DecompositionReport decomposition_report(std::string gate, const ComplexMatrix& u,
                                                const BranchSpec& branch, Basis basis,
                                                double zero_tol = kZeroTol,
                                                bool include_identity = true) {
  DecompositionReport r;
  r.gate = std::move(gate);
  r.branch = branch;
  r.basis = basis;
  const SpectralForm sf = spectral_decompose_unitary(u);
  const ComplexMatrix k = log_branch(sf, branch);
  const auto pauli_terms = pauli_decompose(k, zero_tol);
  if (basis == Basis::Wht) {
    const auto d = wht_decompose(sf, branch);
    for (const auto& t : d.terms) {
      if (std::abs(t.coefficient) > zero_tol) r.terms.push_back({t.label, t.coefficient});
    }
    r.multiset = coefficient_multiset(d, zero_tol, include_identity);
  } else {
    r.terms = pauli_terms;
    r.multiset = coefficient_multiset(std::span<const PauliTerm>(pauli_terms), zero_tol,
                                      include_identity);
    std::vector<ComplexMatrix> ops;
    for (const auto& t : pauli_terms) ops.push_back(pauli_string_matrix(t.label));
    const auto check = check_commuting_involutory(ops);
    r.commuting = check.commuting;
    r.involutory = check.involutory;
  }
  for (const auto& t : pauli_terms) r.max_weight = std::max(r.max_weight, pauli_weight(t.label));
  r.entangling = r.max_weight >= 2;
  return r;
}

inline json to_json(const DecompositionReport& r) {
  json terms = json::array();
  for (const auto& t : r.terms) terms.push_back({{"label", t.label}, {"coefficient", t.coefficient}});
  return {{"schema", kSchemaVersion},
          {"gate", r.gate},
          {"branch", r.branch.offsets},
          {"basis", std::string(to_string(r.basis))},
          {"terms", terms},
          {"multiset", r.multiset.values},
          {"entangling", r.entangling},
          {"max_weight", r.max_weight},
          {"commuting", r.commuting},
          {"involutory", r.involutory}};
}

// ---------------------------------------------------------------------------
// Energy and budget reports

inline json to_json(const EnergyReport& r) {
  json per_term = json::array();
  for (double v : r.per_term) per_term.push_back(finite_or_null(v));
  return {{"gate", r.gate},
          {"multiset", r.multiset.values},
          {"omega0", r.omega0},
          {"epsilon", r.epsilon},
          {"hbar", r.hbar},
          {"per_term", per_term},
          {"independent", finite_or_null(r.independent)},
          {"shared", finite_or_null(r.shared)},
          {"branch", r.branch.offsets},
          {"infinite", r.infinite}};
}

struct BudgetReport {
  std::vector<EnergyReport> per_gate;
  double total_independent = 0.0;
  double total_shared = 0.0;
  double epsilon_total = 0.0;
  double epsilon_per_gate = 0.0;
  std::string split_rule = "equal";
  bool infinite = false;
};

/// Label of a gate application including its qubits, e.g. "CX 0 1".
inline std::string applied_label(const GateSpec& g) {
  std::string s = gate_label(g);
  for (int q : g.qubits) s += " " + std::to_string(q);
  return s;
}

/**
 * Splits a total error equally over the G gates (eps_g = eps_total / G) and
 * sums the per-gate bounds of each gate's principal-branch WHT multiset.
 */
inline BudgetReport circuit_budget(const Circuit& c, double omega0, double epsilon_total,
                                   double hbar = 1.0, bool include_identity = true) {
  BudgetReport b;
  b.epsilon_total = epsilon_total;
  const auto count = static_cast<double>(c.gates.size());
  b.epsilon_per_gate = c.gates.empty() ? epsilon_total : epsilon_total / count;
  CompensatedSum ind, sh;
  for (const auto& g : c.gates) {
    const ComplexMatrix u = standard_gate(g);
    const auto branch = BranchSpec::principal(static_cast<std::size_t>(u.rows()));
    const auto m = coefficient_multiset(wht_decompose(u, branch), kZeroTol, include_identity);
    auto rep = energy_report(applied_label(g), m, omega0, b.epsilon_per_gate, hbar, branch);
    ind.add(rep.independent);
    sh.add(rep.shared);
    b.infinite = b.infinite || rep.infinite;
    b.per_gate.push_back(std::move(rep));
  }
  b.total_independent = ind.value();
  b.total_shared = sh.value();
  return b;
}

inline json to_json(const BudgetReport& b) {
  json gates = json::array();
  for (const auto& g : b.per_gate) gates.push_back(to_json(g));
  return {{"schema", kSchemaVersion},
          {"per_gate", gates},
          {"total_independent", finite_or_null(b.total_independent)},
          {"total_shared", finite_or_null(b.total_shared)},
          {"epsilon_total", b.epsilon_total},
          {"epsilon_per_gate", b.epsilon_per_gate},
          {"split_rule", b.split_rule},
          {"infinite", b.infinite}};
}

// ---------------------------------------------------------------------------
// Monte Carlo report

inline json to_json(const McReport& r, const std::string& gate) {
  return {{"schema", kSchemaVersion},
          {"gate", gate},
          {"n_samples", r.n_samples},
          {"seed", r.seed},
          {"scenario", std::string(to_string(r.scenario))},
          {"mean_error", r.mean_error},
          {"std_error", r.std_error},
          {"max_error", r.max_error},
          {"sublinear_violations", r.sublinear_violations},
          {"loschmidt_violations", r.loschmidt_violations},
          {"sublinear_applicable", r.sublinear_applicable},
          {"max_closed_form_deviation", r.max_closed_form_deviation},
          {"predicted_std", r.predicted_std},
          {"realized_std", r.realized_std}};
}

// ---------------------------------------------------------------------------
// Field specification files

/**
 * {"tau": 1, "hbar": 1, "scenario": "shared"|"independent",
 *  "modes": [{"omega": w, "alpha": [re, im], "g": g}, ...]}
 */
inline FieldConfig field_from_json(const json& j) {
  FieldConfig f;
  try {
    f.tau = j.value("tau", 1.0);
    f.hbar = j.value("hbar", 1.0);
    const std::string scenario = j.value("scenario", std::string("shared"));
    if (scenario == "shared") {
      f.scenario = CouplingScenario::Shared;
    } else if (scenario == "independent") {
      f.scenario = CouplingScenario::Independent;
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown scenario '" + scenario + "'");
    }
    for (const auto& m : j.at("modes")) {
      FieldMode mode;
      mode.omega = m.at("omega").get<double>();
      mode.g = m.value("g", 1.0);
      if (m.contains("alpha")) {
        const auto& a = m.at("alpha");
        mode.alpha = a.is_array() ? Complex(a.at(0).get<double>(), a.at(1).get<double>())
                                  : Complex(a.get<double>(), 0.0);
      }
      f.modes.push_back(mode);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("field spec: ") + e.what());
  }
  f.validate();
  return f;
}

inline FieldConfig load_field(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SyntaxError, path.string() + ": " + e.what());
  }
  return field_from_json(j);
}

// ---------------------------------------------------------------------------
// Evolution traces

inline std::vector<std::string> trace_columns(const EvolutionTrace& tr) {
  std::vector<std::string> cols{"t", "s"};
  const auto dim = tr.states.empty() ? 0 : tr.states.front().size();
  for (Eigen::Index j = 0; j < dim; ++j) {
    cols.push_back("re_" + std::to_string(j));
    cols.push_back("im_" + std::to_string(j));
  }
  cols.push_back("renyi_half");
  const auto nq = tr.bloch.empty() ? 0 : tr.bloch.front().size();
  for (std::size_t q = 0; q < nq; ++q) {
    for (char axis : {'x', 'y', 'z'}) {
      cols.push_back("bloch_q" + std::to_string(q) + "_" + axis);
    }
  }
  return cols;
}

inline std::vector<double> trace_row(const EvolutionTrace& tr, std::size_t i) {
  std::vector<double> row{tr.times[i], tr.fractions[i]};
  for (const Complex& a : tr.states[i]) {
    row.push_back(a.real());
    row.push_back(a.imag());
  }
  row.push_back(tr.entropies[i].empty() ? 0.0 : tr.entropies[i].front());
  for (const auto& b : tr.bloch[i]) row.insert(row.end(), b.begin(), b.end());
  return row;
}

/// One row per sample; `renyi_half` is the entropy of the first bipartition.
inline void write_trace_csv(std::ostream& out, const EvolutionTrace& tr) {
  const auto cols = trace_columns(tr);
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';
  char buf[40];
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const auto row = trace_row(tr, i);
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
}

inline json trace_to_json(const EvolutionTrace& tr) {
  json rows = json::array();
  for (std::size_t i = 0; i < tr.times.size(); ++i) rows.push_back(trace_row(tr, i));
  return {{"schema", kSchemaVersion}, {"alpha", tr.alpha}, {"columns", trace_columns(tr)},
          {"rows", rows}};
}

}  // namespace hamgate
