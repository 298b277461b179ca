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


#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "hamgate/decomposition.hpp"
#include "hamgate/energetics.hpp"
#include "hamgate/gate_library.hpp"
#include "oracles.hpp"

namespace hamgate {
namespace {

// Values computed with 30-digit arithmetic.
constexpr double kBoundHalfPi = 6168.50275068084913677155687492;
constexpr double kBoundQuarterPi = 1542.12568767021228419288921873;
constexpr double kIndependentX = 123.370055013616982735431137498;
constexpr double kSharedX = 61.6850275068084913677155687492;
constexpr double kFourOverPiSq = 0.405284734569351085775517852839;

ComplexMatrix gate(GateKind kind, std::vector<double> params = {}, int controls = 0) {
  return standard_gate(make_gate(kind, std::move(params), controls));
}

CoefficientMultiset wht_multiset(const ComplexMatrix& u) {
  return coefficient_multiset(wht_decompose(u));
}

FieldConfig single_mode(double omega, Complex alpha, double g, double tau) {
  FieldConfig f;
  f.modes.push_back(FieldMode{omega, alpha, g});
  f.tau = tau;
  return f;
}

TEST(PerTermBound, Examples) {
  EXPECT_NEAR(per_term_bound(kPi / 2, 1.0, 0.01), kBoundHalfPi, 1e-12 * kBoundHalfPi);
  EXPECT_EQ(per_term_bound(0.0, 1.0, 0.01), 0.0);
  EXPECT_NEAR(per_term_bound(kPi / 4, 1.0, 0.01), kBoundQuarterPi, 1e-12 * kBoundQuarterPi);
}

TEST(PerTermBound, ZeroErrorIsInfinite) {
  EXPECT_TRUE(std::isinf(per_term_bound(0.3, 1.0, 0.0)));
  EXPECT_THROW(per_term_bound(0.3, 0.0, 0.1), Error);
  EXPECT_THROW(per_term_bound(0.3, 1.0, -0.1), Error);
}

TEST(PerTermBound, Monotonicity) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double lam = u(rng), eps = u(rng), w = u(rng);
    EXPECT_LT(per_term_bound(lam, w, eps * 1.01), per_term_bound(lam, w, eps));
    EXPECT_GT(per_term_bound(lam * 1.01, w, eps), per_term_bound(lam, w, eps));
    EXPECT_GT(per_term_bound(-lam * 1.01, w, eps), per_term_bound(lam, w, eps));
  }
}

TEST(IndependentBound, Examples) {
  const auto x = wht_multiset(pauli::X());
  EXPECT_NEAR(independent_bound(x, 1.0, 0.1), kIndependentX, 1e-12 * kIndependentX);
  EXPECT_EQ(independent_bound(CoefficientMultiset{}, 1.0, 0.1), 0.0);
  for (int n = 0; n <= 5; ++n) {
    const auto m = wht_multiset(gate(GateKind::CNX, {}, n));
    const double want = kPi * kPi / std::ldexp(1.0, n + 1) / (4 * 0.01);
    EXPECT_NEAR(independent_bound(m, 1.0, 0.1), want, 1e-12 * want);
  }
}

TEST(IndependentBound, PerTermListForm) {
  const std::vector<double> lam{kPi / 2, -kPi / 4}, om{1.0, 2.0}, eps{0.01, 0.02};
  const double want = kBoundHalfPi + 2.0 * kBoundQuarterPi / 4.0;
  EXPECT_NEAR(independent_bound(lam, om, eps), want, 1e-12 * want);
  const std::vector<double> short_list{1.0};
  EXPECT_THROW(independent_bound(lam, short_list, eps), Error);
}

TEST(SharedBound, Examples) {
  const auto x = wht_multiset(pauli::X());
  EXPECT_NEAR(shared_bound(x, 1.0, 0.1), kSharedX, 1e-12 * kSharedX);
  EXPECT_EQ(shared_bound(CoefficientMultiset{}, 1.0, 0.1), 0.0);

  const auto h1 = wht_multiset(kron(pauli::X(), pauli::X()));
  const std::pair<int, ComplexMatrix> logs[] = {{0, principal_log(pauli::X())},
                                                {1, principal_log(pauli::X())}};
  const auto terms = pauli_decompose(local_sum_hamiltonian(2, logs));
  const auto h2 = coefficient_multiset(std::span<const PauliTerm>(terms));
  EXPECT_NEAR(shared_bound(h1, 1.0, 0.1) / shared_bound(h2, 1.0, 0.1), 0.25, 1e-12);

  for (int n = 1; n <= 5; ++n) {
    const double ratio = shared_bound(wht_multiset(gate(GateKind::CNX, {}, n)), 1.0, 0.1) /
                         shared_bound(wht_multiset(gate(GateKind::CNX, {}, n - 1)), 1.0, 0.1);
    EXPECT_NEAR(ratio, 0.25, 1e-12);
  }
}

TEST(Bounds, SharedNeverExceedsIndependent) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> v(1 + i % 7);
    for (double& x : v) x = u(rng);
    const auto m = make_multiset(v);
    const double sh = shared_bound(m, 0.7, 0.05), ind = independent_bound(m, 0.7, 0.05);
    EXPECT_GE(sh, 0.0);
    EXPECT_LE(sh, ind);
  }
}

TEST(EnergyReport, InfiniteFlag) {
  const auto r = energy_report("X", wht_multiset(pauli::X()), 1.0, 0.0);
  EXPECT_TRUE(r.infinite);
  EXPECT_TRUE(std::isinf(r.shared));
  const auto ok = energy_report("X", wht_multiset(pauli::X()), 1.0, 0.1);
  EXPECT_FALSE(ok.infinite);
  EXPECT_EQ(ok.per_term.size(), 2u);
  EXPECT_NEAR(ok.shared, kSharedX, 1e-9);
  const auto id = energy_report("I", wht_multiset(identity(2)), 1.0, 0.0);
  EXPECT_FALSE(id.infinite);
  EXPECT_EQ(id.shared, 0.0);
}

TEST(LambdaMean, Examples) {
  EXPECT_EQ(lambda_mean(single_mode(kPi, 0.0, 1.0, 1.0)), 0.0);
  EXPECT_NEAR(lambda_mean(single_mode(kPi, Complex(0, kPi / 4), 1.0, 1.0)), -1.0, 1e-15);
  EXPECT_NEAR(lambda_mean(single_mode(2 * kPi, Complex(0.7, -1.3), 1.0, 1.0)), 0.0, 1e-15);
}

TEST(LambdaMean, MatchesQuadratureOfDrive) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int i = 0; i < 20; ++i) {
    FieldConfig f;
    f.tau = u(rng);
    for (int k = 0; k < 3; ++k) f.modes.push_back({u(rng), Complex(u(rng) - 1.5, u(rng) - 1.5), u(rng)});
    // lambda = -int_0^tau sum_k 2 g_k Re(alpha_k e^{-i w_k t}) dt
    const double want = -oracle::simpson(
        [&](double t) {
          double s = 0.0;
          for (const auto& m : f.modes) s += 2 * m.g * (m.alpha * std::polar(1.0, -m.omega * t)).real();
          return s;
        },
        0.0, f.tau);
    EXPECT_NEAR(lambda_mean(f), want, 1e-10 * std::max(1.0, std::abs(want)));
  }
  const std::vector<double> wrong{1.0, 2.0};
  EXPECT_THROW(lambda_mean(single_mode(1.0, 1.0, 1.0, 1.0), wrong), Error);
}

TEST(LambdaVariance, Examples) {
  EXPECT_NEAR(lambda_variance(single_mode(kPi, 0.0, 1.0, 1.0)), kFourOverPiSq, 1e-15);
  EXPECT_EQ(lambda_variance(single_mode(kPi, 0.0, 0.0, 1.0)), 0.0);
  EXPECT_NEAR(lambda_variance(single_mode(2 * kPi, 0.0, 1.0, 1.0)), 0.0, 1e-30);
}

TEST(LambdaVariance, ClosedFormMatchesSimpsonOracle) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> g(0.1, 2.0), w(0.1, 20.0), tau(0.1, 5.0);
  for (int i = 0; i < 100; ++i) {
    const double gi = g(rng), wi = w(rng), ti = tau(rng);
    const double closed = lambda_variance(single_mode(wi, 0.0, gi, ti));
    const double quad = oracle::drive_variance([gi](double) { return gi; }, wi, ti);
    EXPECT_NEAR(closed, quad, 1e-8 * quad) << gi << " " << wi << " " << ti;
  }
}

TEST(LambdaVariance, TimeDependentQuadratureMatchesOracle) {
  FieldConfig f;
  f.tau = 2.0;
  f.modes = {{1.3, 0.0, 1.0}, {4.0, 0.0, 1.0}};
  const std::vector<CouplingProfile> profiles{
      [](double t) { return 1.0 + 0.5 * std::sin(3.0 * t); },
      [](double t) { return 0.3 * std::exp(-t); }};
  const double want = oracle::drive_variance(profiles[0], 1.3, 2.0) +
                      oracle::drive_variance(profiles[1], 4.0, 2.0);
  EXPECT_NEAR(lambda_variance(profiles, f), want, 1e-10 * want);

  const std::vector<CouplingProfile> constant{[](double) { return 1.0; },
                                              [](double) { return 1.0; }};
  EXPECT_NEAR(lambda_variance(constant, f), lambda_variance(f), 1e-12);
}

TEST(FieldEnergy, Examples) {
  EXPECT_EQ(field_energy(FieldConfig{}), 0.0);
  EXPECT_NEAR(field_energy(single_mode(1.0, Complex(0.0, 2.0), 1.0, 1.0)), 4.0, 1e-15);
  FieldConfig f;
  f.modes = {{1.0, Complex(1.0, 0.0), 1.0}, {2.0, Complex(1.0, std::sqrt(2.0)), 1.0}};
  EXPECT_NEAR(field_energy(f), 7.0, 1e-14);
}

TEST(SynthesizeSingleMode, Examples) {
  EXPECT_EQ(std::abs(synthesize_single_mode(0.0, kPi, 1.0, 1.0).alpha), 0.0);
  const auto m = synthesize_single_mode(-1.0, kPi, 1.0, 1.0);
  EXPECT_NEAR(std::abs(m.alpha), kPi / 4, 1e-15);
  EXPECT_NEAR(lambda_mean(single_mode(m.omega, m.alpha, m.g, 1.0)), -1.0, 1e-12);
  try {
    synthesize_single_mode(1.0, 2 * kPi, 1.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateDrive);
  }
}

TEST(SynthesizeSingleMode, RoundTripAndTightness) {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> lam(-3.0, 3.0), w(0.2, 10.0), tau(0.2, 3.0), g(0.1, 2.0);
  for (int i = 0; i < 100; ++i) {
    const double l = lam(rng), wi = w(rng), ti = tau(rng), gi = g(rng);
    if (std::abs(drive_integral(wi, ti)) < 1e-3) continue;
    const auto m = synthesize_single_mode(l, wi, gi, ti);
    const auto f = single_mode(wi, m.alpha, gi, ti);
    EXPECT_NEAR(lambda_mean(f), l, 1e-10);
    const double eps = std::sqrt(lambda_variance(f));
    const double bound = per_term_bound(l, wi, eps);
    const double energy = field_energy(f);
    EXPECT_GE(energy, bound * (1.0 - 1e-12));
    EXPECT_LE(energy, 100.0 * bound);
  }
}

// Brute force over all offsets with the defining transform.
double brute_force_optimum(const ComplexMatrix& u, BranchObjective obj, int bound) {
  const auto sf = spectral_decompose_unitary(u);
  const auto dim = static_cast<std::size_t>(u.rows());
  std::vector<int> off(dim, -bound);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<double> phases(dim);
    for (std::size_t j = 0; j < dim; ++j) phases[j] = sf.eigenphases(j) + 2 * kPi * off[j];
    double value = 0.0;
    for (double c : oracle::wht(phases)) {
      if (std::abs(c) <= kZeroTol) continue;
      value = obj == BranchObjective::SharedMax ? std::max(value, c * c) : value + c * c;
    }
    best = std::min(best, value);
    std::size_t p = dim;
    while (p > 0 && off[p - 1] == bound) off[--p] = -bound;
    if (p == 0) break;
    ++off[p - 1];
  }
  return best;
}

TEST(OptimizeBranch, PauliXPrincipalIsOptimal) {
  const auto r = optimize_branch(pauli::X(), BranchObjective::SharedMax);
  EXPECT_TRUE(r.branch.is_principal());
  EXPECT_NEAR(r.objective_value, kPi * kPi / 4, 1e-12);
  EXPECT_EQ(r.evaluations, 1u + 25u);
}

TEST(OptimizeBranch, FullRotationBranchIsNineTimesWorse) {
  const auto sf = spectral_decompose_unitary(pauli::X());
  const auto m = branch_multiset(sf, BranchSpec{{0, 1}});
  const auto mags = m.magnitudes();
  ASSERT_EQ(mags.size(), 2u);
  EXPECT_NEAR(mags[0], 3 * kPi / 2, 1e-12);
  EXPECT_NEAR(mags[1], 3 * kPi / 2, 1e-12);
  const double principal = branch_objective(branch_multiset(sf, BranchSpec{{0, 0}}),
                                            BranchObjective::SharedMax);
  EXPECT_NEAR(branch_objective(m, BranchObjective::SharedMax) / principal, 9.0, 1e-12);
}

TEST(OptimizeBranch, IdentityHasZeroObjective) {
  const auto r = optimize_branch(identity(2), BranchObjective::IndependentSum);
  EXPECT_TRUE(r.branch.is_principal());
  EXPECT_EQ(r.objective_value, 0.0);
}

TEST(OptimizeBranch, MatchesBruteForceOnRandomGates) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 12; ++trial) {
    const Eigen::Index dim = trial < 8 ? 2 : 4;
    const auto u = oracle::random_unitary(dim, rng);
    for (auto obj : {BranchObjective::SharedMax, BranchObjective::IndependentSum}) {
      const int bound = dim == 2 ? 2 : 1;
      BranchSearch search;
      search.offset_bound = bound;
      const auto r = optimize_branch(u, obj, search);
      const double want = brute_force_optimum(u, obj, bound);
      EXPECT_NEAR(r.objective_value, want, 1e-12 * std::max(1.0, want));
      EXPECT_LE(r.objective_value, r.principal_value);
      const auto again = optimize_branch(u, obj, search);
      EXPECT_EQ(again.branch, r.branch);
    }
  }
}

TEST(OptimizeBranch, LocalSearchNeverWorsensPrincipal) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = oracle::random_unitary(8, rng);
    BranchSearch search;
    search.strategy = SearchStrategy::LocalSearch;
    const auto r = optimize_branch(u, BranchObjective::IndependentSum, search);
    EXPECT_LE(r.objective_value, r.principal_value);
    for (auto k : r.branch.offsets) EXPECT_LE(std::llabs(k), 2);
  }
}

TEST(OptimizeBranch, ExhaustiveBudgetIsEnforced) {
  BranchSearch search;
  try {
    optimize_branch(gate(GateKind::CNX, {}, 3), BranchObjective::SharedMax, search);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooLarge);
  }
  search.offset_bound = 3;
  EXPECT_THROW(optimize_branch(pauli::X(), BranchObjective::SharedMax, search), Error);
}

}  // namespace
}  // namespace hamgate
