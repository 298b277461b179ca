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

#include <atomic>
#include <cmath>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "hamgate/decomposition.hpp"
#include "hamgate/energetics.hpp"
#include "hamgate/operator_core.hpp"
#include "hamgate/random.hpp"

namespace hamgate {

enum class PerturbationSource { Manual, GaussianField };

/** One error vector, one entry per decomposition term. */
struct PerturbationSample {
  std::vector<double> eps;
  PerturbationSource source = PerturbationSource::Manual;
  std::uint64_t seed = 0;
  std::vector<double> variances;
};

/// exp(i sum (lambda_i + eps_i) V_i).
inline ComplexMatrix perturbed_gate(const CommutingDecomposition& d,
                                    std::span<const double> eps) {
  if (eps.size() != d.size()) {
    throw Error(ErrorKind::DimMismatch, "one error per decomposition term required");
  }
  return d.exponentiate(eps);
}

inline ComplexMatrix perturbed_gate(const CommutingDecomposition& d,
                                    const PerturbationSample& s) {
  return perturbed_gate(d, s.eps);
}

/**
 * Operator-norm gate error || I - U' U^dagger ||, evaluated as || U - U' ||
 * (equal for unitary U) so identical inputs give exactly zero.
 */
inline double gate_error(const ComplexMatrix& u, const ComplexMatrix& u_prime) {
  if (u.rows() != u_prime.rows() || u.cols() != u_prime.cols()) {
    throw Error(ErrorKind::DimMismatch, "gates differ in dimension");
  }
  return operator_norm(u - u_prime);
}

namespace detail {

inline void require_commuting_involutory(const CommutingDecomposition& d) {
  // WHT terms commute and square to identity by construction.
  const bool explicit_terms = std::any_of(d.terms.begin(), d.terms.end(),
                                          [](const auto& t) { return t.matrix.has_value(); });
  if (!explicit_terms) return;
  auto r = check_commuting_involutory(d);
  if (!r.commuting || !r.involutory) {
    throw Error(ErrorKind::NotCommutingInvolutory,
                "decomposition terms are not commuting involutions");
  }
}

}  // namespace detail

/**
 * Closed form of || I - prod_i (cos eps_i + i sin eps_i V_i) ||: on a joint
 * eigenvector with signs s_i the eigenvalue is exp(i sum s_i eps_i), so the
 * error is the largest 2 |sin(sum s_i eps_i / 2)| over realized patterns.
 */
inline double gate_error_closed_form(std::span<const double> eps,
                                     const CommutingDecomposition& d) {
  if (eps.size() != d.size()) {
    throw Error(ErrorKind::DimMismatch, "one error per decomposition term required");
  }
  detail::require_commuting_involutory(d);
  double worst = 0.0;
  for (const auto& pattern : d.sign_patterns()) {
    double x = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) x += pattern[i] * eps[i];
    worst = std::max(worst, 2.0 * std::abs(std::sin(0.5 * x)));
  }
  return worst;
}

struct SublinearityResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
  /// False when the terms are not commuting involutions; lhs/holds unset.
  bool applicable = true;
};

/// Checks || I - U' U^dagger || <= sum |eps_i|.
inline SublinearityResult sublinearity_check(std::span<const double> eps,
                                             const CommutingDecomposition& d,
                                             double slack = Tolerance::equality) {
  SublinearityResult r;
  for (double e : eps) r.rhs += std::abs(e);
  try {
    detail::require_commuting_involutory(d);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotCommutingInvolutory) throw;
    r.applicable = false;
    return r;
  }
  r.lhs = gate_error(d.exponentiate(), perturbed_gate(d, eps));
  r.holds = r.lhs <= r.rhs + slack;
  return r;
}

/// |<psi| U' U^dagger |psi>|^2.
inline double loschmidt_echo(const ComplexMatrix& u, const ComplexMatrix& u_prime,
                             const StateVector& psi) {
  if (u.rows() != psi.size() || u_prime.rows() != psi.size()) {
    throw Error(ErrorKind::DimMismatch, "state and gates differ in dimension");
  }
  const Complex overlap = psi.dot(u_prime * (u.adjoint() * psi));
  return std::norm(overlap);
}

struct ErrorReport {
  double epsilon = 0.0;
  std::optional<double> closed_form;
  double sublinear_bound = 0.0;
  std::vector<double> loschmidt_values;
  int violations = 0;
};

namespace detail {

// Counts breaks of eps >= |1 - <psi|M|psi>| >= |1 - sqrt(L)| for M = U'U^dagger.
inline int loschmidt_chain_violations(const ComplexMatrix& echo_op, double eps,
                                      const StateVector& psi, double slack,
                                      double* echo_out = nullptr) {
  const Complex overlap = psi.dot(echo_op * psi);
  const double echo = std::norm(overlap);
  if (echo_out) *echo_out = echo;
  const double direct = std::abs(1.0 - overlap);
  const double from_echo = std::abs(1.0 - std::sqrt(echo));
  int v = 0;
  if (direct > eps + slack) ++v;
  if (from_echo > direct + slack) ++v;
  return v;
}

}  // namespace detail

inline ErrorReport loschmidt_bound_check(const ComplexMatrix& u,
                                         const ComplexMatrix& u_prime,
                                         std::span<const StateVector> states,
                                         double slack = Tolerance::equality) {
  ErrorReport r;
  r.epsilon = gate_error(u, u_prime);
  const ComplexMatrix echo_op = u_prime * u.adjoint();
  for (const auto& psi : states) {
    if (psi.size() != u.rows()) {
      throw Error(ErrorKind::DimMismatch, "state and gates differ in dimension");
    }
    double echo = 0.0;
    r.violations += detail::loschmidt_chain_violations(echo_op, r.epsilon, psi, slack, &echo);
    r.loschmidt_values.push_back(echo);
  }
  return r;
}

/// Independent uniform errors in [-bound, bound], one per term.
inline std::vector<double> uniform_perturbation(std::size_t n_terms, double bound,
                                                CounterRng& rng) {
  std::vector<double> eps(n_terms);
  for (double& e : eps) e = bound * (2.0 * rng.uniform() - 1.0);
  return eps;
}

// ---------------------------------------------------------------------------
// Monte Carlo verification

struct McOptions {
  std::size_t n_samples = 1000;
  std::uint64_t seed = 1;
  /// Haar-random states per sample for the Loschmidt chain.
  std::size_t states_per_sample = 8;
  /// Optional per-term couplings, indexed [term][mode]; defaults to mode.g.
  std::vector<std::vector<double>> term_couplings;
  unsigned threads = 1;
};

struct McReport {
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  CouplingScenario scenario = CouplingScenario::Shared;
  double mean_error = 0.0;
  double std_error = 0.0;
  double max_error = 0.0;
  int sublinear_violations = 0;
  int loschmidt_violations = 0;
  /// False when the decomposition is not commuting-involutory.
  bool sublinear_applicable = true;
  double max_closed_form_deviation = 0.0;
  std::vector<double> predicted_std;  // sqrt(var lambda_i)
  std::vector<double> realized_std;   // sample std of eps_i
};

namespace detail {

// Per-term weights sigma[i][k] = g_{k,i} |I(omega_k, tau)|.
inline std::vector<std::vector<double>> coupling_weights(const CommutingDecomposition& d,
                                                         const FieldConfig& f,
                                                         const McOptions& opt) {
  if (!opt.term_couplings.empty() && opt.term_couplings.size() != d.size()) {
    throw Error(ErrorKind::DimMismatch, "term couplings must list every term");
  }
  std::vector<std::vector<double>> w(d.size(), std::vector<double>(f.modes.size()));
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!opt.term_couplings.empty() && opt.term_couplings[i].size() != f.modes.size()) {
      throw Error(ErrorKind::DimMismatch, "term couplings must list every mode");
    }
    for (std::size_t k = 0; k < f.modes.size(); ++k) {
      const double g = opt.term_couplings.empty() ? f.modes[k].g : opt.term_couplings[i][k];
      w[i][k] = g * std::abs(drive_integral(f.modes[k].omega, f.tau));
    }
  }
  return w;
}

struct McChunk {
  CompensatedSum err, err_sq;
  std::vector<CompensatedSum> eps, eps_sq;
  double max_error = 0.0;
  double max_dev = 0.0;
  int sub_viol = 0;
  int losch_viol = 0;
};

inline constexpr std::uint64_t kStateStream = 0xFFFF'FFFF'0000'0001ULL;

}  // namespace detail

/**
 * Draws eps_i ~ Normal(0, var lambda_i) from the field statistics and checks
 * the sub-linearity bound, the closed-form error, and the Loschmidt chain.
 *
 * Every sample owns the substream split(sample); within it the Independent
 * scenario draws one normal per (term, mode) and the Shared scenario one per
 * mode, mapped onto all terms through their coupling weights. Samples are
 * processed in fixed chunks whose partial sums merge in chunk order, so the
 * report does not depend on the thread count.
 */
inline McReport mc_verify(const CommutingDecomposition& d, const FieldConfig& f,
                          const McOptions& opt) {
  if (opt.n_samples < 1) throw Error(ErrorKind::InvalidArgument, "n_samples must be >= 1");
  f.validate();
  const auto weights = detail::coupling_weights(d, f, opt);
  const std::size_t n_terms = d.size();
  const std::size_t n_modes = f.modes.size();

  bool applicable = true;
  try {
    detail::require_commuting_involutory(d);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotCommutingInvolutory) throw;
    applicable = false;
  }
  const ComplexMatrix u = d.exponentiate();
  const auto patterns = applicable ? d.sign_patterns() : std::vector<std::vector<int>>{};
  const CounterRng root(opt.seed);

  constexpr std::size_t kChunk = 256;
  const std::size_t n_chunks = (opt.n_samples + kChunk - 1) / kChunk;
  std::vector<detail::McChunk> chunks(n_chunks);

  auto run_chunk = [&](std::size_t c) {
    auto& acc = chunks[c];
    acc.eps.assign(n_terms, {});
    acc.eps_sq.assign(n_terms, {});
    std::vector<double> eps(n_terms);
    const std::size_t end = std::min(opt.n_samples, (c + 1) * kChunk);
    for (std::size_t s = c * kChunk; s < end; ++s) {
      CounterRng stream = root.split(s);
      std::fill(eps.begin(), eps.end(), 0.0);
      if (f.scenario == CouplingScenario::Shared) {
        for (std::size_t k = 0; k < n_modes; ++k) {
          const double z = stream.normal();
          for (std::size_t i = 0; i < n_terms; ++i) eps[i] += weights[i][k] * z;
        }
      } else {
        for (std::size_t i = 0; i < n_terms; ++i) {
          for (std::size_t k = 0; k < n_modes; ++k) eps[i] += weights[i][k] * stream.normal();
        }
      }
      for (std::size_t i = 0; i < n_terms; ++i) {
        acc.eps[i].add(eps[i]);
        acc.eps_sq[i].add(eps[i] * eps[i]);
      }

      const ComplexMatrix u_prime = d.exponentiate(eps);
      const double err = gate_error(u, u_prime);
      acc.err.add(err);
      acc.err_sq.add(err * err);
      acc.max_error = std::max(acc.max_error, err);

      if (applicable) {
        double rhs = 0.0;
        for (double e : eps) rhs += std::abs(e);
        if (err > rhs + Tolerance::equality) ++acc.sub_viol;
        double closed = 0.0;
        for (const auto& p : patterns) {
          double x = 0.0;
          for (std::size_t i = 0; i < n_terms; ++i) x += p[i] * eps[i];
          closed = std::max(closed, 2.0 * std::abs(std::sin(0.5 * x)));
        }
        acc.max_dev = std::max(acc.max_dev, std::abs(closed - err));
      }

      CounterRng states = stream.split(detail::kStateStream);
      const ComplexMatrix echo_op = u_prime * u.adjoint();
      for (std::size_t k = 0; k < opt.states_per_sample; ++k) {
        const StateVector psi = haar_random_state(u.rows(), states);
        acc.losch_viol += detail::loschmidt_chain_violations(echo_op, err, psi,
                                                             Tolerance::equality);
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, n_chunks));
  if (threads == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < n_chunks; c = next++) run_chunk(c);
      });
    }
  }

  McReport r;
  r.n_samples = opt.n_samples;
  r.seed = opt.seed;
  r.scenario = f.scenario;
  r.sublinear_applicable = applicable;
  CompensatedSum err, err_sq;
  std::vector<CompensatedSum> eps(n_terms), eps_sq(n_terms);
  for (const auto& c : chunks) {
    err.merge(c.err);
    err_sq.merge(c.err_sq);
    for (std::size_t i = 0; i < n_terms; ++i) {
      eps[i].merge(c.eps[i]);
      eps_sq[i].merge(c.eps_sq[i]);
    }
    r.max_error = std::max(r.max_error, c.max_error);
    r.max_closed_form_deviation = std::max(r.max_closed_form_deviation, c.max_dev);
    r.sublinear_violations += c.sub_viol;
    r.loschmidt_violations += c.losch_viol;
  }
  const double n = static_cast<double>(opt.n_samples);
  auto sample_std = [n](double sum, double sum_sq) {
    if (n < 2) return 0.0;
    const double mean = sum / n;
    return std::sqrt(std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)));
  };
  r.mean_error = err.value() / n;
  r.std_error = sample_std(err.value(), err_sq.value());
  for (std::size_t i = 0; i < n_terms; ++i) {
    double var = 0.0;
    for (double w : weights[i]) var += w * w;
    r.predicted_std.push_back(std::sqrt(var));
    r.realized_std.push_back(sample_std(eps[i].value(), eps_sq[i].value()));
  }
  return r;
}

}  // namespace hamgate
