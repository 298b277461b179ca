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

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hamgate/decomposition.hpp"
#include "hamgate/operator_core.hpp"

namespace hamgate {

/// Reduced Planck constant in J s, for SI reports.
inline constexpr double kHbarSI = 1.054571817e-34;

/** One coherent field mode: angular frequency, amplitude, coupling. */
struct FieldMode {
  double omega = 1.0;
  Complex alpha{0.0, 0.0};
  double g = 1.0;
};

enum class CouplingScenario { Independent, Shared };

inline constexpr std::string_view to_string(CouplingScenario s) {
  return s == CouplingScenario::Independent ? "independent" : "shared";
}

struct FieldConfig {
  std::vector<FieldMode> modes;
  double tau = 1.0;
  double hbar = 1.0;
  CouplingScenario scenario = CouplingScenario::Shared;

  void validate() const {
    if (!(tau > 0.0)) throw Error(ErrorKind::InvalidArgument, "tau must be > 0");
    if (!(hbar > 0.0)) throw Error(ErrorKind::InvalidArgument, "hbar must be > 0");
    for (const auto& m : modes) {
      if (!(m.omega > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "mode frequency must be > 0");
      }
    }
  }

  double lowest_frequency() const {
    double w = std::numeric_limits<double>::infinity();
    for (const auto& m : modes) w = std::min(w, m.omega);
    return w;
  }
};

namespace detail {

inline void require_positive(double v, const char* what) {
  if (!(v > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be > 0");
  }
}

inline void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be >= 0");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Energy lower bounds

/**
 * Energy needed for one coefficient: hbar omega0 lambda^2 / (4 eps^2).
 * eps = 0 with lambda != 0 gives +infinity.
 */
inline double per_term_bound(double lambda, double omega0, double eps,
                             double hbar = 1.0) {
  detail::require_positive(omega0, "omega0");
  detail::require_positive(hbar, "hbar");
  detail::require_nonnegative(eps, "epsilon");
  if (lambda == 0.0) return 0.0;
  if (eps == 0.0) return std::numeric_limits<double>::infinity();
  return hbar * omega0 * lambda * lambda / (4.0 * eps * eps);
}

/// Each term driven by its own modes: (hbar omega0 / 4 eps^2) sum lambda^2.
inline double independent_bound(const CoefficientMultiset& m, double omega0,
                                double eps, double hbar = 1.0) {
  detail::require_positive(omega0, "omega0");
  detail::require_positive(hbar, "hbar");
  detail::require_nonnegative(eps, "epsilon");
  const double s = m.sum_squares();
  if (s == 0.0) return 0.0;
  if (eps == 0.0) return std::numeric_limits<double>::infinity();
  return hbar * omega0 * s / (4.0 * eps * eps);
}

/// Per-term form (hbar/4) sum omega_i lambda_i^2 / eps_i^2.
inline double independent_bound(std::span<const double> lambdas,
                                std::span<const double> omegas,
                                std::span<const double> eps, double hbar = 1.0) {
  if (lambdas.size() != omegas.size() || lambdas.size() != eps.size()) {
    throw Error(ErrorKind::DimMismatch, "per-term lists differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    total += per_term_bound(lambdas[i], omegas[i], eps[i], hbar);
  }
  return total;
}

/// All terms share the same modes equally: (hbar omega0 / 4 eps^2) max lambda^2.
inline double shared_bound(const CoefficientMultiset& m, double omega0,
                           double eps, double hbar = 1.0) {
  detail::require_positive(omega0, "omega0");
  detail::require_positive(hbar, "hbar");
  detail::require_nonnegative(eps, "epsilon");
  const double s = m.max_square();
  if (s == 0.0) return 0.0;
  if (eps == 0.0) return std::numeric_limits<double>::infinity();
  return hbar * omega0 * s / (4.0 * eps * eps);
}

struct EnergyReport {
  std::string gate;
  CoefficientMultiset multiset;
  BranchSpec branch;
  double omega0 = 1.0;
  double epsilon = 0.0;
  double hbar = 1.0;
  std::vector<double> per_term;
  double independent = 0.0;
  double shared = 0.0;
  bool infinite = false;
};

inline EnergyReport energy_report(std::string gate, const CoefficientMultiset& m,
                                  double omega0, double eps, double hbar = 1.0,
                                  BranchSpec branch = {}) {
  EnergyReport r;
  r.gate = std::move(gate);
  r.multiset = m;
  r.branch = std::move(branch);
  r.omega0 = omega0;
  r.epsilon = eps;
  r.hbar = hbar;
  for (double v : m.values) r.per_term.push_back(per_term_bound(v, omega0, eps, hbar));
  r.independent = independent_bound(m, omega0, eps, hbar);
  r.shared = shared_bound(m, omega0, eps, hbar);
  r.infinite = std::isinf(r.independent) || std::isinf(r.shared);
  return r;
}

// ---------------------------------------------------------------------------
// Coherent field statistics

/// \int_0^tau e^{-i omega t} dt = (1 - e^{-i omega tau}) / (i omega).
inline Complex drive_integral(double omega, double tau) {
  detail::require_positive(omega, "omega");
  const double x = omega * tau;
  const double half = std::sin(0.5 * x);
  return Complex(std::sin(x), -2.0 * half * half) / omega;
}

/// Mean control coefficient -sum_k 2 g_k Re[alpha_k I_k] for constant couplings.
inline double lambda_mean(const FieldConfig& f, std::span<const double> couplings) {
  if (couplings.size() != f.modes.size()) {
    throw Error(ErrorKind::DimMismatch, "one coupling per mode required");
  }
  double mean = 0.0;
  for (std::size_t k = 0; k < f.modes.size(); ++k) {
    const auto& m = f.modes[k];
    mean -= 2.0 * couplings[k] * (m.alpha * drive_integral(m.omega, f.tau)).real();
  }
  return mean;
}

inline double lambda_mean(const FieldConfig& f) {
  std::vector<double> g;
  for (const auto& m : f.modes) g.push_back(m.g);
  return lambda_mean(f, g);
}

/// 4 g^2 sin^2(omega tau / 2) / omega^2.
inline double mode_variance(double g, double omega, double tau) {
  detail::require_positive(omega, "omega");
  const double s = std::sin(0.5 * omega * tau);
  return 4.0 * g * g * s * s / (omega * omega);
}

/// sum_k |\int_0^tau g_k e^{-i omega_k t} dt|^2 with constant couplings.
inline double lambda_variance(const FieldConfig& f) {
  double var = 0.0;
  for (const auto& m : f.modes) var += mode_variance(m.g, m.omega, f.tau);
  return var;
}

using CouplingProfile = std::function<double(double)>;

/**
 * Variance for time-dependent couplings g_k(t), by adaptive Gauss-Kronrod
 * quadrature of the real and imaginary parts.
 */
inline double lambda_variance(std::span<const CouplingProfile> profiles,
                              const FieldConfig& f, double rel_tol = 1e-12) {
  if (profiles.size() != f.modes.size()) {
    throw Error(ErrorKind::DimMismatch, "one coupling profile per mode required");
  }
  using boost::math::quadrature::gauss_kronrod;
  double var = 0.0;
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    const double w = f.modes[k].omega;
    const auto& g = profiles[k];
    const double re = gauss_kronrod<double, 61>::integrate(
        [&](double t) { return g(t) * std::cos(w * t); }, 0.0, f.tau, 20, rel_tol);
    const double im = gauss_kronrod<double, 61>::integrate(
        [&](double t) { return -g(t) * std::sin(w * t); }, 0.0, f.tau, 20, rel_tol);
    var += re * re + im * im;
  }
  return var;
}

/// Average field energy hbar sum_k omega_k |alpha_k|^2.
inline double field_energy(const FieldConfig& f) {
  double e = 0.0;
  for (const auto& m : f.modes) e += m.omega * std::norm(m.alpha);
  return f.hbar * e;
}

/**
 * Smallest-amplitude single mode whose mean coefficient is lambda_target:
 * alpha = -lambda conj(I) / (2 g |I|^2), so |alpha| = |lambda| / (2 g |I|).
 */
inline FieldMode synthesize_single_mode(double lambda_target, double omega,
                                        double g, double tau) {
  detail::require_positive(tau, "tau");
  const Complex integral = drive_integral(omega, tau);
  const double mag = std::abs(integral);
  if (mag < 1e-12 || std::abs(g) < 1e-300) {
    throw Error(ErrorKind::DegenerateDrive,
                "mode cannot drive the coefficient (vanishing drive integral)");
  }
  FieldMode mode;
  mode.omega = omega;
  mode.g = g;
  mode.alpha = -lambda_target * std::conj(integral) / (2.0 * g * mag * mag);
  return mode;
}

// ---------------------------------------------------------------------------
// Branch optimization

enum class BranchObjective { SharedMax, IndependentSum };
enum class SearchStrategy { Exhaustive, LocalSearch };

inline constexpr std::string_view to_string(BranchObjective o) {
  return o == BranchObjective::SharedMax ? "shared_max" : "independent_sum";
}
inline constexpr std::string_view to_string(SearchStrategy s) {
  return s == SearchStrategy::Exhaustive ? "exhaustive" : "local_search";
}

struct BranchSearch {
  int offset_bound = 2;
  SearchStrategy strategy = SearchStrategy::Exhaustive;
  double zero_tol = kZeroTol;
  bool include_identity = true;
};

struct BranchOptimum {
  BranchSpec branch;
  CoefficientMultiset multiset;
  double objective_value = 0.0;
  double principal_value = 0.0;
  std::size_t evaluations = 0;
};

inline constexpr std::size_t kExhaustiveMaxDim = 8;
inline constexpr int kExhaustiveMaxBound = 2;

inline CoefficientMultiset branch_multiset(const SpectralForm& sf,
                                           const BranchSpec& branch,
                                           double zero_tol = kZeroTol,
                                           bool include_identity = true) {
  auto c = walsh_coefficients(detail::shifted_phases(sf, branch));
  if (!include_identity) c[0] = 0.0;
  return make_multiset(std::move(c), zero_tol);
}

inline double branch_objective(const CoefficientMultiset& m, BranchObjective obj) {
  return obj == BranchObjective::SharedMax ? m.max_square() : m.sum_squares();
}

/**
 * Minimizes max lambda^2 or sum lambda^2 over eigenphase offsets in
 * [-B, B]^dim. The principal branch is kept unless a strictly better branch
 * exists; among equally good improvements the lexicographically smallest
 * offset vector wins.
 */
inline BranchOptimum optimize_branch(const ComplexMatrix& u, BranchObjective objective,
                                     const BranchSearch& search = {}) {
  const SpectralForm sf = spectral_decompose_unitary(u);
  const std::size_t dim = static_cast<std::size_t>(u.rows());
  const int bound = search.offset_bound;
  if (bound < 0) throw Error(ErrorKind::InvalidArgument, "offset bound must be >= 0");

  auto evaluate = [&](const BranchSpec& b) {
    auto m = branch_multiset(sf, b, search.zero_tol, search.include_identity);
    double v = branch_objective(m, objective);
    return std::pair{std::move(m), v};
  };
  auto better = [](double candidate, double best) {
    return candidate < best - 1e-12 * std::max(1.0, best);
  };

  BranchOptimum best;
  best.branch = BranchSpec::principal(dim);
  std::tie(best.multiset, best.objective_value) = evaluate(best.branch);
  best.principal_value = best.objective_value;
  best.evaluations = 1;

  if (search.strategy == SearchStrategy::Exhaustive) {
    if (dim > kExhaustiveMaxDim || bound > kExhaustiveMaxBound) {
      throw Error(ErrorKind::TooLarge,
                  "exhaustive branch search is limited to dim <= 8 and bound <= 2");
    }
    BranchSpec cur{std::vector<long long>(dim, -bound)};
    while (true) {
      auto [m, v] = evaluate(cur);
      ++best.evaluations;
      if (better(v, best.objective_value)) {
        best.branch = cur;
        best.multiset = std::move(m);
        best.objective_value = v;
      }
      // Odometer increment, last index fastest, so visits are lexicographic.
      std::size_t pos = dim;
      while (pos > 0 && cur.offsets[pos - 1] == bound) cur.offsets[--pos] = -bound;
      if (pos == 0) break;
      ++cur.offsets[pos - 1];
    }
    return best;
  }

  // Coordinate descent with unit steps, first improving move taken.
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t j = 0; j < dim && !improved; ++j) {
      for (long long step : {-1LL, 1LL}) {
        BranchSpec cand = best.branch;
        cand.offsets[j] += step;
        if (std::llabs(cand.offsets[j]) > bound) continue;
        auto [m, v] = evaluate(cand);
        ++best.evaluations;
        if (better(v, best.objective_value)) {
          best.branch = std::move(cand);
          best.multiset = std::move(m);
          best.objective_value = v;
          improved = true;
          break;
        }
      }
    }
  }
  return best;
}

}  // namespace hamgate
