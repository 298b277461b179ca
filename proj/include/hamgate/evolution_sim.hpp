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
#include <cmath>
#include <limits>
#include <vector>

#include "hamgate/decomposition.hpp"
#include "hamgate/energetics.hpp"
#include "hamgate/operator_core.hpp"

namespace hamgate {

/**
 * Drive f(t) = sum_k 2 g_k Re(alpha_k e^{-i omega_k t}) and its normalized
 * running integral s(t), which runs from 0 at t = 0 to 1 at t = tau.
 */
struct DriveEnvelope {
  std::vector<FieldMode> modes;
  double tau = 1.0;

  double envelope(double t) const {
    double f = 0.0;
    for (const auto& m : modes) f += 2.0 * m.g * (m.alpha * std::polar(1.0, -m.omega * t)).real();
    return f;
  }

  double integral(double t) const {
    double total = 0.0;
    for (const auto& m : modes) total += 2.0 * m.g * (m.alpha * drive_integral(m.omega, t)).real();
    return total;
  }

  void validate() const {
    detail::require_positive(tau, "tau");
    if (std::abs(integral(tau)) <= 1e-12) {
      throw Error(ErrorKind::DegenerateDrive, "drive integrates to zero over [0, tau]");
    }
  }

  double fraction(double t) const { return integral(t) / integral(tau); }
};

/// Earliest t in [0, tau] with s(t) = target, by scanning then bisection.
inline double time_at_fraction(const DriveEnvelope& env, double target) {
  env.validate();
  constexpr int kScan = 1024;
  double lo = 0.0;
  double flo = env.fraction(lo) - target;
  for (int i = 1; i <= kScan; ++i) {
    const double hi = env.tau * i / kScan;
    const double fhi = env.fraction(hi) - target;
    if (flo == 0.0) return lo;
    if ((flo < 0) != (fhi < 0) || fhi == 0.0) {
      double a = lo, b = hi, fa = flo;
      for (int it = 0; it < 200 && b - a > 1e-15 * env.tau; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = env.fraction(mid) - target;
        if ((fa < 0) == (fm < 0) && fm != 0.0) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
    lo = hi;
    flo = fhi;
  }
  throw Error(ErrorKind::InvalidArgument, "fraction is never reached on [0, tau]");
}

/// Renyi-alpha entropy (1/(1-alpha)) ln Tr rho^alpha from eigenvalues.
inline double renyi_entropy(const DensityMatrix& rho, double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0) {
    throw Error(ErrorKind::BadAlpha, "alpha must be positive and != 1");
  }
  if (!is_hermitian(rho) || std::abs(rho.trace() - Complex(1.0)) > Tolerance::structural) {
    throw Error(ErrorKind::NotDensityOperator, "rho must be Hermitian with unit trace");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig((rho + rho.adjoint()) * Complex(0.5),
                                                   Eigen::EigenvaluesOnly);
  // Eigenvalues within the solver's rounding floor are zero.
  const double floor = static_cast<double>(rho.rows()) *
                       std::numeric_limits<double>::epsilon() *
                       eig.eigenvalues().cwiseAbs().maxCoeff();
  double tr = 0.0;
  for (double p : eig.eigenvalues()) {
    if (p < -Tolerance::structural) {
      throw Error(ErrorKind::NotDensityOperator, "negative eigenvalue");
    }
    if (p > floor) tr += std::pow(p, alpha);
  }
  return std::log(tr) / (1.0 - alpha);
}

/**
 * Renyi entropy of the reduction of a pure state onto `keep`, computed from
 * Schmidt coefficients so that product states give zero to rounding.
 */
inline double renyi_entropy_pure(const StateVector& psi, std::vector<int> keep,
                                 double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0) {
    throw Error(ErrorKind::BadAlpha, "alpha must be positive and != 1");
  }
  const int n = qubit_count(psi.size());
  std::sort(keep.begin(), keep.end());
  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (!std::binary_search(keep.begin(), keep.end(), q)) traced.push_back(q);
  }
  if (keep.empty() || keep.back() >= n || keep.front() < 0) {
    throw Error(ErrorKind::BadIndex, "bad bipartition");
  }
  auto scatter = [n](std::uint64_t v, const std::vector<int>& qs) {
    const int k = static_cast<int>(qs.size());
    std::uint64_t bits = 0;
    for (int p = 0; p < k; ++p) {
      if (v & (std::uint64_t{1} << (k - 1 - p))) bits |= qubit_bit(qs[p], n);
    }
    return bits;
  };
  const Eigen::Index rows = Eigen::Index{1} << keep.size();
  const Eigen::Index cols = Eigen::Index{1} << traced.size();
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = psi(static_cast<Eigen::Index>(scatter(r, keep) | scatter(c, traced)));
    }
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const double norm2 = psi.squaredNorm();
  double tr = 0.0;
  for (double sigma : svd.singularValues()) {
    const double p = sigma * sigma / norm2;
    if (p > 0.0) tr += std::pow(p, alpha);
  }
  return std::log(tr) / (1.0 - alpha);
}

using BlochVector = std::array<double, 3>;

/// (Tr rho X, Tr rho Y, Tr rho Z) of a single-qubit density operator.
inline BlochVector bloch_vector(const DensityMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) {
    throw Error(ErrorKind::DimMismatch, "Bloch vectors need a single-qubit state");
  }
  return {2.0 * rho(1, 0).real(), 2.0 * rho(1, 0).imag(),
          (rho(0, 0) - rho(1, 1)).real()};
}

inline double bloch_norm(const BlochVector& b) {
  return std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
}

struct EvolutionOptions {
  double alpha = 0.5;
  /// Kept subsystems whose Renyi entropy is recorded.
  std::vector<std::vector<int>> bipartitions{{0}};
};

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> fractions;
  std::vector<StateVector> states;
  std::vector<std::vector<int>> bipartitions;
  double alpha = 0.5;
  /// entropies[t][b] for bipartition b.
  std::vector<std::vector<double>> entropies;
  /// bloch[t][q] for every qubit q.
  std::vector<std::vector<BlochVector>> bloch;
};

/**
 * State at time t is exp(i s(t) sum_i lambda_i V_i) psi0. Commuting terms
 * make the time-ordered exponential collapse onto the accumulated fraction;
 * non-commuting inputs are rejected.
 */
inline EvolutionTrace evolve(const CommutingDecomposition& d, const DriveEnvelope& env,
                             std::span<const double> times, const StateVector& psi0,
                             const EvolutionOptions& opts = {}) {
  env.validate();
  if (!is_normalized(psi0)) throw Error(ErrorKind::InvalidArgument, "psi0 is not normalized");
  if (psi0.size() != d.dim()) throw Error(ErrorKind::DimMismatch, "psi0 dimension");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || times[i] > env.tau || (i > 0 && times[i] < times[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "times must be sorted within [0, tau]");
    }
  }
  const bool explicit_terms = std::any_of(d.terms.begin(), d.terms.end(),
                                          [](const auto& t) { return t.matrix.has_value(); });
  if (explicit_terms && !check_commuting_involutory(d).commuting) {
    throw Error(ErrorKind::NotCommuting, "evolution requires commuting terms");
  }

  // One diagonalization of the generator serves every time point.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(d.generator());
  const ComplexMatrix& vecs = eig.eigenvectors();
  const StateVector coords = vecs.adjoint() * psi0;
  const int n = d.n_qubits;

  EvolutionTrace trace;
  trace.bipartitions = opts.bipartitions;
  trace.alpha = opts.alpha;
  for (double t : times) {
    const double s = env.fraction(t);
    StateVector phased(coords.size());
    for (Eigen::Index j = 0; j < coords.size(); ++j) {
      phased(j) = std::polar(1.0, s * eig.eigenvalues()(j)) * coords(j);
    }
    StateVector psi = vecs * phased;
    std::vector<double> ent;
    for (const auto& keep : opts.bipartitions) {
      ent.push_back(renyi_entropy_pure(psi, keep, opts.alpha));
    }
    std::vector<BlochVector> bl;
    for (int q = 0; q < n; ++q) bl.push_back(bloch_vector(partial_trace(psi, {q})));
    trace.times.push_back(t);
    trace.fractions.push_back(s);
    trace.states.push_back(std::move(psi));
    trace.entropies.push_back(std::move(ent));
    trace.bloch.push_back(std::move(bl));
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Two-qubit NOT-NOT comparison

enum class Figure1Variant { Entangling, LocalSum };

struct Figure1Config {
  Figure1Variant variant = Figure1Variant::Entangling;
  double tau = 1.0;
  int n_steps = 200;
};

/// Generator of X (x) X: principal log (entangling) or the sum of local X logs.
inline ComplexMatrix figure1_generator(Figure1Variant variant) {
  const ComplexMatrix kx = principal_log(pauli::X());
  if (variant == Figure1Variant::Entangling) return principal_log(kron(pauli::X(), pauli::X()));
  const std::pair<int, ComplexMatrix> logs[] = {{0, kx}, {1, kx}};
  return local_sum_hamiltonian(2, logs);
}

inline CommutingDecomposition figure1_decomposition(Figure1Variant variant) {
  return pauli_decomposition(figure1_generator(variant));
}

/// Single mode at angular frequency 1/tau with a real positive amplitude.
inline DriveEnvelope figure1_envelope(double tau) {
  detail::require_positive(tau, "tau");
  const double omega = 1.0 / tau;
  FieldMode mode = synthesize_single_mode(1.0, omega, 1.0, tau);
  mode.alpha = std::abs(mode.alpha);
  return DriveEnvelope{{mode}, tau};
}

inline std::vector<double> uniform_times(double tau, int n_steps) {
  if (n_steps < 1) throw Error(ErrorKind::InvalidArgument, "n_steps must be >= 1");
  std::vector<double> t;
  for (int i = 0; i <= n_steps; ++i) t.push_back(i == n_steps ? tau : tau * i / n_steps);
  return t;
}

/// |00> driven under either X (x) X generator, sampled at n_steps + 1 times.
inline EvolutionTrace figure1_run(const Figure1Config& cfg) {
  const auto d = figure1_decomposition(cfg.variant);
  const auto env = figure1_envelope(cfg.tau);
  StateVector psi0 = StateVector::Zero(4);
  psi0(0) = 1.0;
  const auto times = uniform_times(cfg.tau, cfg.n_steps);
  return evolve(d, env, times, psi0);
}

}  // namespace hamgate
