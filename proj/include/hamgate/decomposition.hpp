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

#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hamgate/operator_core.hpp"

namespace hamgate {

/// Default magnitude below which a coefficient is treated as zero.
inline constexpr double kZeroTol = 1e-9;

/**
 * Integer offsets k_j selecting the logarithm branch theta_j + 2 pi k_j for
 * eigenphase j (indexed by the canonical eigenbasis). All zero is the
 * principal branch.
 */
struct BranchSpec {
  std::vector<long long> offsets;

  static BranchSpec principal(std::size_t dim) {
    return BranchSpec{std::vector<long long>(dim, 0)};
  }

  bool is_principal() const {
    return std::all_of(offsets.begin(), offsets.end(),
                       [](long long k) { return k == 0; });
  }

  bool operator==(const BranchSpec&) const = default;
};

namespace detail {

inline RealVector shifted_phases(const SpectralForm& sf,
                                 const BranchSpec& branch) {
  const auto dim = static_cast<std::size_t>(sf.eigenphases.size());
  if (branch.offsets.size() != dim) {
    throw Error(ErrorKind::BranchLengthMismatch,
                "branch has " + std::to_string(branch.offsets.size()) +
                    " offsets for dimension " + std::to_string(dim));
  }
  RealVector phi = sf.eigenphases;
  for (std::size_t j = 0; j < dim; ++j) {
    phi(static_cast<Eigen::Index>(j)) += 2.0 * kPi * static_cast<double>(branch.offsets[j]);
  }
  return phi;
}

/// Unnormalized in-place Walsh-Hadamard transform.
inline void walsh_hadamard(std::span<double> v) {
  for (std::size_t h = 1; h < v.size(); h <<= 1) {
    for (std::size_t i = 0; i < v.size(); i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = v[j];
        const double b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

inline double parity_sign(std::uint64_t bits) {
  return (std::popcount(bits) & 1) ? -1.0 : 1.0;
}

}  // namespace detail

/// Coefficients c_s with phi_j = sum_s c_s (-1)^{|s & j|}.
inline std::vector<double> walsh_coefficients(const RealVector& phases) {
  std::vector<double> c(phases.data(), phases.data() + phases.size());
  detail::walsh_hadamard(c);
  const double scale = 1.0 / static_cast<double>(c.size());
  for (double& x : c) x *= scale;
  return c;
}

/// Hermitian K = W diag(theta + 2 pi k) W^dagger with exp(iK) = u.
inline ComplexMatrix log_branch(const SpectralForm& sf, const BranchSpec& branch) {
  RealVector phi = detail::shifted_phases(sf, branch);
  return sf.eigenvectors * phi.cast<Complex>().asDiagonal() *
         sf.eigenvectors.adjoint();
}

inline ComplexMatrix log_branch(const ComplexMatrix& u, const BranchSpec& branch) {
  return log_branch(spectral_decompose_unitary(u), branch);
}

inline ComplexMatrix principal_log(const ComplexMatrix& u) {
  return log_branch(u, BranchSpec::principal(static_cast<std::size_t>(u.rows())));
}

// ---------------------------------------------------------------------------
// Pauli strings

/// Matrix of a label such as "XIZ"; character 0 acts on qubit 0.
inline ComplexMatrix pauli_string_matrix(std::string_view label) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (char c : label) {
    switch (c) {
      case 'I': out = kron(out, pauli::I()); break;
      case 'X': out = kron(out, pauli::X()); break;
      case 'Y': out = kron(out, pauli::Y()); break;
      case 'Z': out = kron(out, pauli::Z()); break;
      default:
        throw Error(ErrorKind::InvalidArgument,
                    std::string("bad Pauli letter '") + c + "'");
    }
  }
  return out;
}

inline int pauli_weight(std::string_view label) {
  return static_cast<int>(std::count_if(label.begin(), label.end(),
                                        [](char c) { return c != 'I'; }));
}

struct PauliTerm {
  std::string label;
  double coefficient = 0.0;
};

/**
 * Expansion K = sum_P c_P P over all 4^N Pauli strings with
 * c_P = Tr(P K) / 2^N. Strings are visited in lexicographic I < X < Y < Z
 * order; terms with |c_P| <= zero_tol are dropped.
 */
inline std::vector<PauliTerm> pauli_decompose(const ComplexMatrix& k,
                                              double zero_tol = kZeroTol) {
  if (!is_hermitian(k)) throw Error(ErrorKind::NotHermitian, "generator");
  const int n = qubit_count(k.rows());
  const std::uint64_t dim = std::uint64_t{1} << n;
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::vector<PauliTerm> out;
  for (std::uint64_t code = 0; code < count; ++code) {
    std::uint64_t x = 0, z = 0;
    std::string label(static_cast<std::size_t>(n), 'I');
    for (int q = 0; q < n; ++q) {
      const auto digit = (code >> (2 * (n - 1 - q))) & 3u;
      const std::uint64_t bit = qubit_bit(q, n);
      label[q] = "IXYZ"[digit];
      if (digit == 1 || digit == 2) x |= bit;
      if (digit == 2 || digit == 3) z |= bit;
    }
    // Tr(P K) = i^{|x&z|} sum_m (-1)^{|z&m|} K(m, m^x)
    Complex acc = 0.0;
    for (std::uint64_t m = 0; m < dim; ++m) {
      const Complex e = k(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m ^ x));
      acc += detail::parity_sign(z & m) * e;
    }
    acc *= kIPow[std::popcount(x & z) & 3];
    const double c = acc.real() / static_cast<double>(dim);
    if (std::abs(c) > zero_tol) out.push_back({std::move(label), c});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commuting decompositions

enum class Basis { Wht, Pauli };

inline constexpr std::string_view to_string(Basis b) {
  return b == Basis::Wht ? "wht" : "pauli";
}

struct DecompositionTerm {
  std::string label;
  double coefficient = 0.0;
  /// Z-string mask in the eigenbasis W (WHT terms).
  std::uint64_t z_mask = 0;
  /// Explicit operator (Pauli terms).
  std::optional<ComplexMatrix> matrix;
};

/**
 * U = exp(i sum_i lambda_i V_i) with Hermitian, involutory, pairwise
 * commuting V_i. WHT terms are V_s = W Z_s W^dagger and are materialized on
 * demand; Pauli terms carry their matrices.
 */
struct CommutingDecomposition {
  int n_qubits = 0;
  Basis basis = Basis::Wht;
  std::optional<ComplexMatrix> basis_transform;
  std::vector<DecompositionTerm> terms;

  std::size_t size() const { return terms.size(); }
  Eigen::Index dim() const { return Eigen::Index{1} << n_qubits; }

  ComplexMatrix op(std::size_t i) const {
    const auto& t = terms.at(i);
    if (t.matrix) return *t.matrix;
    RealVector diag(dim());
    for (Eigen::Index j = 0; j < dim(); ++j) {
      diag(j) = detail::parity_sign(t.z_mask & static_cast<std::uint64_t>(j));
    }
    if (!basis_transform) return diag.cast<Complex>().asDiagonal();
    const auto& w = *basis_transform;
    return w * diag.cast<Complex>().asDiagonal() * w.adjoint();
  }

  bool is_identity_term(std::size_t i) const {
    const auto& t = terms.at(i);
    if (t.matrix) return pauli_weight(t.label) == 0 &&
                         t.label.find_first_not_of('I') == std::string::npos;
    return t.z_mask == 0;
  }

  std::vector<double> coefficients() const {
    std::vector<double> c;
    for (const auto& t : terms) c.push_back(t.coefficient);
    return c;
  }

  /// sum_i scale (lambda_i + eps_i) V_i; `eps` may be empty.
  ComplexMatrix generator(std::span<const double> eps = {},
                          double scale = 1.0) const {
    check_eps(eps);
    ComplexMatrix g = ComplexMatrix::Zero(dim(), dim());
    for (std::size_t i = 0; i < terms.size(); ++i) {
      g += Complex(scale * (terms[i].coefficient + eps_at(eps, i))) * op(i);
    }
    return g;
  }

  /// exp(i scale sum_i (lambda_i + eps_i) V_i).
  ComplexMatrix exponentiate(std::span<const double> eps = {},
                             double scale = 1.0) const {
    check_eps(eps);
    const bool all_masks = std::none_of(terms.begin(), terms.end(),
                                        [](const auto& t) { return t.matrix.has_value(); });
    if (!all_masks) return exp_i_generator(generator(eps, scale));
    StateVector phases(dim());
    for (Eigen::Index j = 0; j < dim(); ++j) {
      double phi = 0.0;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        phi += (terms[i].coefficient + eps_at(eps, i)) *
               detail::parity_sign(terms[i].z_mask & static_cast<std::uint64_t>(j));
      }
      phases(j) = std::polar(1.0, scale * phi);
    }
    if (!basis_transform) return phases.asDiagonal();
    const auto& w = *basis_transform;
    return w * phases.asDiagonal() * w.adjoint();
  }

  /**
   * Eigenvalue signs s_i of every V_i on each vector of a common eigenbasis;
   * row r holds the pattern of joint eigenvector r.
   */
  std::vector<std::vector<int>> sign_patterns() const {
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(dim()),
                                       std::vector<int>(terms.size()));
    const bool all_masks = std::none_of(terms.begin(), terms.end(),
                                        [](const auto& t) { return t.matrix.has_value(); });
    if (all_masks) {
      for (Eigen::Index j = 0; j < dim(); ++j) {
        for (std::size_t i = 0; i < terms.size(); ++i) {
          rows[j][i] = static_cast<int>(detail::parity_sign(
              terms[i].z_mask & static_cast<std::uint64_t>(j)));
        }
      }
      return rows;
    }
    // A generic real combination of commuting operators is non-degenerate on
    // distinct joint eigenspaces, so its eigenvectors are joint eigenvectors.
    ComplexMatrix mix = ComplexMatrix::Zero(dim(), dim());
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const double w = 0.5 + std::fmod(0.6180339887498949 * static_cast<double>(i + 1) +
                                           0.1415926535897932 * std::sqrt(static_cast<double>(i + 2)),
                                       1.0);
      mix += Complex(w) * op(i);
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig((mix + mix.adjoint()) * Complex(0.5));
    const ComplexMatrix& vecs = eig.eigenvectors();
    for (std::size_t i = 0; i < terms.size(); ++i) {
      ComplexMatrix v = op(i);
      for (Eigen::Index r = 0; r < dim(); ++r) {
        const double s = vecs.col(r).dot(v * vecs.col(r)).real();
        if (std::abs(std::abs(s) - 1.0) > 1e-6) {
          throw Error(ErrorKind::NumericalFailure,
                      "could not resolve a joint eigenbasis");
        }
        rows[r][i] = s > 0 ? 1 : -1;
      }
    }
    return rows;
  }

 private:
  void check_eps(std::span<const double> eps) const {
    if (!eps.empty() && eps.size() != terms.size()) {
      throw Error(ErrorKind::DimMismatch,
                  "perturbation has " + std::to_string(eps.size()) +
                      " entries for " + std::to_string(terms.size()) + " terms");
    }
  }
  static double eps_at(std::span<const double> eps, std::size_t i) {
    return eps.empty() ? 0.0 : eps[i];
  }
};

namespace detail {

inline std::string z_label(std::uint64_t mask, int n) {
  std::string s(static_cast<std::size_t>(n), 'I');
  for (int q = 0; q < n; ++q) {
    if (mask & qubit_bit(q, n)) s[q] = 'Z';
  }
  return s;
}

// "+P"/"-P" when v is a signed Pauli string, otherwise empty.
inline std::string recognize_pauli(const ComplexMatrix& v) {
  auto terms = pauli_decompose(v, 1e-9);
  if (terms.size() != 1 || std::abs(std::abs(terms[0].coefficient) - 1.0) > 1e-9) {
    return {};
  }
  return (terms[0].coefficient < 0 ? "-" : "") + terms[0].label;
}

inline constexpr int kRecognizeMaxQubits = 4;

}  // namespace detail

/**
 * Commuting involutory decomposition through the spectrum: the shifted
 * eigenphase vector phi is Walsh-Hadamard transformed, and coefficient c_s
 * multiplies V_s = W Z_s W^dagger for every N-bit string s.
 *
 * Labels are plain Z-strings when W is the identity, the equivalent signed
 * Pauli string when V_s happens to be one (small N), and "W[...]" otherwise.
 */
inline CommutingDecomposition wht_decompose(const SpectralForm& sf,
                                            const BranchSpec& branch) {
  RealVector phi = detail::shifted_phases(sf, branch);
  const int n = qubit_count(phi.size());
  const auto coeffs = walsh_coefficients(phi);
  CommutingDecomposition d;
  d.n_qubits = n;
  d.basis = Basis::Wht;
  const bool plain = max_abs_diff(sf.eigenvectors, identity(phi.size())) <= 1e-12;
  if (!plain) d.basis_transform = sf.eigenvectors;
  for (std::uint64_t s = 0; s < coeffs.size(); ++s) {
    DecompositionTerm t;
    t.coefficient = coeffs[s];
    t.z_mask = s;
    t.label = detail::z_label(s, n);
    d.terms.push_back(std::move(t));
  }
  if (!plain) {
    for (std::size_t i = 0; i < d.terms.size(); ++i) {
      std::string named;
      if (n <= detail::kRecognizeMaxQubits) named = detail::recognize_pauli(d.op(i));
      d.terms[i].label = named.empty() ? "W[" + d.terms[i].label + "]" : named;
    }
  }
  return d;
}

inline CommutingDecomposition wht_decompose(const ComplexMatrix& u,
                                            const BranchSpec& branch) {
  return wht_decompose(spectral_decompose_unitary(u), branch);
}

inline CommutingDecomposition wht_decompose(const ComplexMatrix& u) {
  return wht_decompose(u, BranchSpec::principal(static_cast<std::size_t>(u.rows())));
}

/// Decomposition over the nonzero Pauli terms of a Hermitian generator.
/// The result is only a valid commuting decomposition when
/// check_commuting_involutory passes on its operators.
inline CommutingDecomposition pauli_decomposition(const ComplexMatrix& k,
                                                  double zero_tol = kZeroTol) {
  CommutingDecomposition d;
  d.n_qubits = qubit_count(k.rows());
  d.basis = Basis::Pauli;
  for (auto& p : pauli_decompose(k, zero_tol)) {
    DecompositionTerm t;
    t.matrix = pauli_string_matrix(p.label);
    t.label = std::move(p.label);
    t.coefficient = p.coefficient;
    d.terms.push_back(std::move(t));
  }
  return d;
}

struct CommutationReport {
  bool commuting = true;
  bool involutory = true;
  double max_violation = 0.0;
};

inline CommutationReport check_commuting_involutory(
    std::span<const ComplexMatrix> ops, double tol = Tolerance::structural) {
  CommutationReport r;
  if (ops.empty()) return r;
  const Eigen::Index dim = ops[0].rows();
  for (const auto& v : ops) {
    if (!is_square(v) || v.rows() != dim) {
      throw Error(ErrorKind::DimMismatch, "operators differ in dimension");
    }
  }
  double inv = 0.0, comm = 0.0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    inv = std::max(inv, max_abs_entry(ops[i] * ops[i] - identity(dim)));
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      comm = std::max(comm, max_abs_entry(ops[i] * ops[j] - ops[j] * ops[i]));
    }
  }
  r.involutory = inv <= tol;
  r.commuting = comm <= tol;
  r.max_violation = std::max(inv, comm);
  return r;
}

inline CommutationReport check_commuting_involutory(
    const CommutingDecomposition& d, double tol = Tolerance::structural) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) ops.push_back(d.op(i));
  return check_commuting_involutory(ops, tol);
}

/// sum_j I x ... x K_j x ... x I over single-qubit generators K_j.
inline ComplexMatrix local_sum_hamiltonian(
    int n_qubits, std::span<const std::pair<int, ComplexMatrix>> gate_logs) {
  if (n_qubits < 1) throw Error(ErrorKind::BadIndex, "need at least one qubit");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (const auto& [q, k] : gate_logs) {
    if (q < 0 || q >= n_qubits) {
      throw Error(ErrorKind::BadIndex, "qubit " + std::to_string(q));
    }
    if (k.rows() != 2 || !is_hermitian(k)) {
      throw Error(ErrorKind::NotHermitian,
                  "local generators must be 2x2 Hermitian");
    }
    const int target[1] = {q};
    h += embed_operator(k, target, n_qubits);
  }
  return h;
}

/**
 * Nonzero coefficients of a decomposition in descending order. Energy bounds
 * only use magnitudes.
 */
struct CoefficientMultiset {
  std::vector<double> values;
  double zero_tol = kZeroTol;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }

  std::vector<double> magnitudes() const {
    std::vector<double> m;
    for (double v : values) m.push_back(std::abs(v));
    std::sort(m.begin(), m.end(), std::greater<>());
    return m;
  }
  double max_square() const {
    double best = 0.0;
    for (double v : values) best = std::max(best, v * v);
    return best;
  }
  double sum_squares() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s;
  }
};

inline CoefficientMultiset make_multiset(std::vector<double> values,
                                         double zero_tol = kZeroTol) {
  CoefficientMultiset m;
  m.zero_tol = zero_tol;
  for (double v : values) {
    if (std::abs(v) > zero_tol) m.values.push_back(v);
  }
  std::sort(m.values.begin(), m.values.end(), std::greater<>());
  return m;
}

inline CoefficientMultiset coefficient_multiset(const CommutingDecomposition& d,
                                                double zero_tol = kZeroTol,
                                                bool include_identity = true) {
  std::vector<double> v;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!include_identity && d.is_identity_term(i)) continue;
    v.push_back(d.terms[i].coefficient);
  }
  return make_multiset(std::move(v), zero_tol);
}

inline CoefficientMultiset coefficient_multiset(std::span<const PauliTerm> terms,
                                                double zero_tol = kZeroTol,
                                                bool include_identity = true) {
  std::vector<double> v;
  for (const auto& t : terms) {
    if (!include_identity && pauli_weight(t.label) == 0) continue;
    v.push_back(t.coefficient);
  }
  return make_multiset(std::move(v), zero_tol);
}

struct EntangleabilityReport {
  bool entangling = false;
  int max_weight = 0;
  std::map<int, int> weight_profile;
};

/// A generator can entangle iff it has a nonzero Pauli term of weight >= 2.
inline EntangleabilityReport entangleability(const ComplexMatrix& k,
                                             double zero_tol = kZeroTol) {
  if (!is_hermitian(k)) throw Error(ErrorKind::NotHermitian, "generator");
  if (qubit_count(k.rows()) < 2) {
    throw Error(ErrorKind::TooFewQubits, "entangleability needs >= 2 qubits");
  }
  EntangleabilityReport r;
  for (const auto& t : pauli_decompose(k, zero_tol)) {
    const int w = pauli_weight(t.label);
    ++r.weight_profile[w];
    r.max_weight = std::max(r.max_weight, w);
  }
  r.entangling = r.max_weight >= 2;
  return r;
}

}  // namespace hamgate
