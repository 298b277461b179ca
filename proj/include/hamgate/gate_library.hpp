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

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hamgate/matrix_io.hpp"
#include "hamgate/operator_core.hpp"

namespace hamgate {

enum class GateKind {
  I, X, Y, Z, H, S, T, RX, RY, RZ, CX, CZ, SWAP, CNX, CNH, CNTOFF, CUSTOM
};

inline constexpr std::array<std::pair<GateKind, std::string_view>, 17>
    kGateNames{{{GateKind::I, "I"},
                {GateKind::X, "X"},
                {GateKind::Y, "Y"},
                {GateKind::Z, "Z"},
                {GateKind::H, "H"},
                {GateKind::S, "S"},
                {GateKind::T, "T"},
                {GateKind::RX, "RX"},
                {GateKind::RY, "RY"},
                {GateKind::RZ, "RZ"},
                {GateKind::CX, "CX"},
                {GateKind::CZ, "CZ"},
                {GateKind::SWAP, "SWAP"},
                {GateKind::CNX, "CNX"},
                {GateKind::CNH, "CNH"},
                {GateKind::CNTOFF, "CNTOFF"},
                {GateKind::CUSTOM, "CUSTOM"}}};

inline constexpr std::string_view gate_name(GateKind kind) {
  for (const auto& [k, name] : kGateNames) {
    if (k == kind) return name;
  }
  return "?";
}

inline std::optional<GateKind> gate_kind_from_name(std::string_view name) {
  for (const auto& [k, n] : kGateNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

/**
 * One gate application. For controlled gates the controls come first and the
 * target is the last qubit; CNX and CNH take any number of controls, CNTOFF
 * needs at least the two Toffoli controls.
 */
struct GateSpec {
  GateKind kind = GateKind::I;
  std::vector<double> params;
  std::vector<int> qubits;
  std::optional<ComplexMatrix> custom_matrix;
  /// Matrix file a CUSTOM gate was loaded from; used when serializing.
  std::string custom_source;

  bool operator==(const GateSpec& other) const {
    if (kind != other.kind || params != other.params ||
        qubits != other.qubits || custom_source != other.custom_source ||
        custom_matrix.has_value() != other.custom_matrix.has_value()) {
      return false;
    }
    return !custom_matrix || *custom_matrix == *other.custom_matrix;
  }
};

struct Circuit {
  int n_qubits = 0;
  std::vector<GateSpec> gates;

  bool operator==(const Circuit&) const = default;
};

inline constexpr int param_count(GateKind kind) {
  switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
      return 1;
    default:
      return 0;
  }
}

/// Qubit count demanded by the gate kind, or nullopt when variable.
inline constexpr std::optional<int> fixed_arity(GateKind kind) {
  switch (kind) {
    case GateKind::CX:
    case GateKind::CZ:
    case GateKind::SWAP:
      return 2;
    case GateKind::CNX:
    case GateKind::CNH:
    case GateKind::CNTOFF:
    case GateKind::CUSTOM:
      return std::nullopt;
    default:
      return 1;
  }
}

inline void validate_gate(const GateSpec& spec) {
  const int nq = static_cast<int>(spec.qubits.size());
  if (static_cast<int>(spec.params.size()) != param_count(spec.kind)) {
    throw Error(ErrorKind::BadParamCount,
                std::string(gate_name(spec.kind)) + " takes " +
                    std::to_string(param_count(spec.kind)) + " parameter(s)");
  }
  for (int a = 0; a < nq; ++a) {
    if (spec.qubits[a] < 0) {
      throw Error(ErrorKind::IndexOutOfRange, "negative qubit index");
    }
    for (int b = a + 1; b < nq; ++b) {
      if (spec.qubits[a] == spec.qubits[b]) {
        throw Error(ErrorKind::DuplicateQubit,
                    "qubit " + std::to_string(spec.qubits[a]) + " repeated");
      }
    }
  }
  auto arity_error = [&](const std::string& need) {
    return Error(ErrorKind::InvalidArgument,
                 std::string(gate_name(spec.kind)) + " needs " + need +
                     " qubit(s), got " + std::to_string(nq));
  };
  if (auto fixed = fixed_arity(spec.kind)) {
    if (nq != *fixed) throw arity_error(std::to_string(*fixed));
  } else if (spec.kind == GateKind::CNTOFF) {
    if (nq < 3) throw arity_error("at least 3");
  } else if (spec.kind == GateKind::CUSTOM) {
    if (!spec.custom_matrix) {
      throw Error(ErrorKind::InvalidArgument, "CUSTOM gate without a matrix");
    }
    if (spec.custom_matrix->rows() != (Eigen::Index{1} << nq) ||
        !is_square(*spec.custom_matrix)) {
      throw Error(ErrorKind::DimMismatch,
                  "custom matrix does not match qubit count");
    }
    if (!is_unitary(*spec.custom_matrix)) {
      throw Error(ErrorKind::NotUnitary, "custom matrix is not unitary");
    }
  } else if (nq < 1) {
    throw arity_error("at least 1");
  }
}

/// Block-diagonal matrix that applies u only when all n controls are |1>.
inline ComplexMatrix controlled(const ComplexMatrix& u, int n_controls) {
  if (!is_unitary(u)) throw Error(ErrorKind::NotUnitary, "base gate");
  if (n_controls < 0) {
    throw Error(ErrorKind::InvalidArgument, "negative control count");
  }
  const Eigen::Index d = u.rows();
  const Eigen::Index total = d << n_controls;
  ComplexMatrix out = identity(total);
  out.bottomRightCorner(d, d) = u;
  return out;
}

/// Conventional matrix of the gate on its own qubits; R_A(t) = exp(-i t A/2).
inline ComplexMatrix standard_gate(const GateSpec& spec) {
  validate_gate(spec);
  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix m(2, 2);
  switch (spec.kind) {
    case GateKind::I:
      return pauli::I();
    case GateKind::X:
      return pauli::X();
    case GateKind::Y:
      return pauli::Y();
    case GateKind::Z:
      return pauli::Z();
    case GateKind::H:
      m << r, r, r, -r;
      return m;
    case GateKind::S:
      m << 1, 0, 0, kI;
      return m;
    case GateKind::T:
      m << 1, 0, 0, std::polar(1.0, kPi / 4);
      return m;
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ: {
      const double half = spec.params[0] / 2;
      const ComplexMatrix axis = spec.kind == GateKind::RX   ? pauli::X()
                                 : spec.kind == GateKind::RY ? pauli::Y()
                                                             : pauli::Z();
      return std::cos(half) * pauli::I() - kI * std::sin(half) * axis;
    }
    case GateKind::CX:
      return controlled(pauli::X(), 1);
    case GateKind::CZ:
      return controlled(pauli::Z(), 1);
    case GateKind::SWAP: {
      ComplexMatrix s = ComplexMatrix::Zero(4, 4);
      s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1;
      return s;
    }
    case GateKind::CNX:
      return controlled(pauli::X(), static_cast<int>(spec.qubits.size()) - 1);
    case GateKind::CNH:
      m << r, r, r, -r;
      return controlled(m, static_cast<int>(spec.qubits.size()) - 1);
    case GateKind::CNTOFF:
      // C^n Toffoli on n + 3 qubits is C^{n+2} X.
      return controlled(pauli::X(), static_cast<int>(spec.qubits.size()) - 1);
    case GateKind::CUSTOM:
      return *spec.custom_matrix;
  }
  throw Error(ErrorKind::UnknownGate, "unhandled gate kind");
}

/**
 * Gate acting on qubits 0..k-1. `n_controls` applies to CNX, CNH, and CNTOFF
 * (for CNTOFF it counts controls beyond the Toffoli's own two).
 */
inline GateSpec make_gate(GateKind kind, std::vector<double> params = {},
                          int n_controls = 0) {
  GateSpec spec;
  spec.kind = kind;
  spec.params = std::move(params);
  int nq = fixed_arity(kind).value_or(1);
  if (kind == GateKind::CNX || kind == GateKind::CNH) nq = n_controls + 1;
  if (kind == GateKind::CNTOFF) nq = n_controls + 3;
  for (int q = 0; q < nq; ++q) spec.qubits.push_back(q);
  return spec;
}

/// Short display label, e.g. "RZ(1.5)" or "CNX[2]".
inline std::string gate_label(const GateSpec& spec) {
  std::string label(gate_name(spec.kind));
  if (spec.kind == GateKind::CNX || spec.kind == GateKind::CNH) {
    label += "[" + std::to_string(spec.qubits.size() - 1) + "]";
  } else if (spec.kind == GateKind::CNTOFF) {
    label += "[" + std::to_string(spec.qubits.size() - 3) + "]";
  } else if (spec.kind == GateKind::CUSTOM && !spec.custom_source.empty()) {
    label += "<" + spec.custom_source + ">";
  }
  if (!spec.params.empty()) {
    label += "(";
    for (std::size_t p = 0; p < spec.params.size(); ++p) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", spec.params[p]);
      label += (p ? "," : "") + std::string(buf);
    }
    label += ")";
  }
  return label;
}

namespace detail {

// Recursive descent over + - * / unary minus, parentheses, numbers, and `pi`.
class AngleParser {
 public:
  explicit AngleParser(std::string_view text) : s_(text) {}

  std::optional<double> parse() {
    auto v = expr();
    skip();
    if (!v || pos_ != s_.size()) return std::nullopt;
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::optional<double> expr() {
    auto v = term();
    while (v) {
      if (eat('+')) {
        auto r = term();
        if (!r) return std::nullopt;
        *v += *r;
      } else if (eat('-')) {
        auto r = term();
        if (!r) return std::nullopt;
        *v -= *r;
      } else {
        break;
      }
    }
    return v;
  }
  std::optional<double> term() {
    auto v = unary();
    while (v) {
      if (eat('*')) {
        auto r = unary();
        if (!r) return std::nullopt;
        *v *= *r;
      } else if (eat('/')) {
        auto r = unary();
        if (!r) return std::nullopt;
        *v /= *r;
      } else {
        break;
      }
    }
    return v;
  }
  std::optional<double> unary() {
    if (eat('-')) {
      auto v = unary();
      return v ? std::optional<double>(-*v) : std::nullopt;
    }
    if (eat('+')) return unary();
    return primary();
  }
  std::optional<double> primary() {
    skip();
    if (eat('(')) {
      auto v = expr();
      if (!v || !eat(')')) return std::nullopt;
      return v;
    }
    if (s_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      return kPi;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), value);
    if (ec != std::errc()) return std::nullopt;
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return value;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Angle literal in radians; accepts arithmetic on numbers and `pi`.
inline std::optional<double> parse_angle(std::string_view text) {
  return detail::AngleParser(text).parse();
}

/**
 * Splits "NAME" or "NAME(p1, p2)" into name and parameter list.
 * Throws SyntaxError (without line information).
 */
inline std::pair<std::string, std::vector<double>> parse_gate_token(
    std::string_view token) {
  token = detail::trim(token);
  auto open = token.find('(');
  std::vector<double> params;
  std::string name(token.substr(0, open));
  if (open != std::string_view::npos) {
    if (token.back() != ')') {
      throw Error(ErrorKind::SyntaxError, "unterminated parameter list");
    }
    std::string_view inner = token.substr(open + 1, token.size() - open - 2);
    std::size_t start = 0;
    while (start <= inner.size()) {
      auto comma = inner.find(',', start);
      auto piece = inner.substr(start, comma == std::string_view::npos
                                           ? std::string_view::npos
                                           : comma - start);
      auto value = parse_angle(piece);
      if (!value) {
        throw Error(ErrorKind::SyntaxError,
                    "bad parameter '" + std::string(piece) + "'");
      }
      params.push_back(*value);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (name.empty()) throw Error(ErrorKind::SyntaxError, "missing gate name");
  return {name, params};
}

/**
 * Parses the line-oriented circuit format:
 *
 *     qubits <N>
 *     <NAME>[(<param>)] <q0> <q1> ...
 *     CUSTOM <file.json> <q...>
 *
 * `#` starts a comment. CUSTOM paths are resolved against `base_dir`.
 */
inline Circuit parse_circuit(std::string_view text,
                             const std::filesystem::path& base_dir = {}) {
  Circuit circuit;
  bool have_header = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    std::string_view line = detail::trim(raw);
    if (line.empty()) continue;

    // Tokenize on whitespace, keeping parenthesized parameter lists whole.
    std::vector<std::string> tokens;
    std::string current;
    int depth = 0;
    for (char c : line) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (std::isspace(static_cast<unsigned char>(c)) && depth == 0) {
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
      } else {
        current += c;
      }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    if (depth != 0) {
      throw ParseError(ErrorKind::SyntaxError, line_no, "unbalanced parentheses");
    }

    if (!have_header) {
      if (tokens.size() != 2 || tokens[0] != "qubits") {
        throw ParseError(ErrorKind::SyntaxError, line_no,
                         "expected 'qubits <N>' header");
      }
      auto n = detail::parse_int(tokens[1]);
      if (!n || *n < 1) {
        throw ParseError(ErrorKind::SyntaxError, line_no, "bad qubit count");
      }
      circuit.n_qubits = *n;
      have_header = true;
      continue;
    }

    GateSpec spec;
    std::size_t first_qubit = 1;
    try {
      auto [name, params] = parse_gate_token(tokens[0]);
      auto kind = gate_kind_from_name(name);
      if (!kind) {
        throw ParseError(ErrorKind::UnknownGate, line_no,
                         "unknown gate '" + name + "'");
      }
      spec.kind = *kind;
      spec.params = std::move(params);
      if (spec.kind == GateKind::CUSTOM) {
        if (tokens.size() < 2) {
          throw ParseError(ErrorKind::SyntaxError, line_no,
                           "CUSTOM needs a matrix file");
        }
        spec.custom_source = tokens[1];
        spec.custom_matrix = load_matrix_json(base_dir / tokens[1]);
        first_qubit = 2;
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.kind(), line_no, e.what());
    }
    for (std::size_t t = first_qubit; t < tokens.size(); ++t) {
      auto q = detail::parse_int(tokens[t]);
      if (!q) {
        throw ParseError(ErrorKind::SyntaxError, line_no,
                         "bad qubit index '" + tokens[t] + "'");
      }
      if (*q < 0 || *q >= circuit.n_qubits) {
        throw ParseError(ErrorKind::IndexOutOfRange, line_no,
                         "qubit " + tokens[t] + " outside 0.." +
                             std::to_string(circuit.n_qubits - 1));
      }
      spec.qubits.push_back(*q);
    }
    try {
      validate_gate(spec);
    } catch (const Error& e) {
      throw ParseError(e.kind(), line_no, e.what());
    }
    circuit.gates.push_back(std::move(spec));
  }
  if (!have_header) {
    throw ParseError(ErrorKind::SyntaxError, line_no, "missing 'qubits' header");
  }
  return circuit;
}

inline Circuit load_circuit(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_circuit(buf.str(), path.parent_path());
}

/// Inverse of parse_circuit; parameters keep full double precision.
inline std::string serialize_circuit(const Circuit& c) {
  std::string out = "qubits " + std::to_string(c.n_qubits) + "\n";
  for (const auto& g : c.gates) {
    out += gate_name(g.kind);
    if (!g.params.empty()) {
      out += "(";
      for (std::size_t p = 0; p < g.params.size(); ++p) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", g.params[p]);
        out += (p ? "," : "") + std::string(buf);
      }
      out += ")";
    }
    if (g.kind == GateKind::CUSTOM) out += " " + g.custom_source;
    for (int q : g.qubits) out += " " + std::to_string(q);
    out += "\n";
  }
  return out;
}

/// Left-multiplies `state_columns` by `local` acting on `qubits`.
inline void apply_local(const ComplexMatrix& local, std::span<const int> qubits,
                        int n_qubits, ComplexMatrix& state_columns) {
  const int k = static_cast<int>(qubits.size());
  const std::uint64_t ldim = std::uint64_t{1} << k;
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  std::vector<std::uint64_t> scattered(ldim, 0);
  std::uint64_t mask = 0;
  for (std::uint64_t l = 0; l < ldim; ++l) {
    for (int p = 0; p < k; ++p) {
      if (l & (std::uint64_t{1} << (k - 1 - p))) {
        scattered[l] |= qubit_bit(qubits[p], n_qubits);
      }
    }
  }
  for (int q : qubits) mask |= qubit_bit(q, n_qubits);
  StateVector gathered(ldim);
  for (Eigen::Index col = 0; col < state_columns.cols(); ++col) {
    for (std::uint64_t base = 0; base < dim; ++base) {
      if (base & mask) continue;
      for (std::uint64_t l = 0; l < ldim; ++l) {
        gathered(l) = state_columns(base | scattered[l], col);
      }
      StateVector mixed = local * gathered;
      for (std::uint64_t l = 0; l < ldim; ++l) {
        state_columns(base | scattered[l], col) = mixed(l);
      }
    }
  }
}

inline constexpr int kMaxCircuitQubits = 10;

/// Product of the gates in application order (first gate acts first).
inline ComplexMatrix circuit_unitary(const Circuit& c) {
  if (c.n_qubits > kMaxCircuitQubits) {
    throw Error(ErrorKind::TooLarge, "circuits are limited to " +
                                         std::to_string(kMaxCircuitQubits) +
                                         " qubits");
  }
  ComplexMatrix u = identity(Eigen::Index{1} << c.n_qubits);
  for (const auto& g : c.gates) {
    for (int q : g.qubits) {
      if (q >= c.n_qubits) {
        throw Error(ErrorKind::IndexOutOfRange, "qubit " + std::to_string(q));
      }
    }
    apply_local(standard_gate(g), g.qubits, c.n_qubits, u);
  }
  return u;
}

}  // namespace hamgate
