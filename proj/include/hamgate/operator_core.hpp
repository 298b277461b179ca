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

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "hamgate/error.hpp"

namespace hamgate {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
/// Mixed states are plain matrices; validity is checked where it matters.
using DensityMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/** Default tolerances. Structural checks vs. equality assertions. */
struct Tolerance {
  static constexpr double structural = 1e-10;
  static constexpr double equality = 1e-12;
};

inline constexpr bool is_power_of_two(std::size_t n) {
  return n != 0 && (n & (n - 1)) == 0;
}

/// Number of qubits for a dimension 2^N. Throws DimMismatch otherwise.
inline int qubit_count(Eigen::Index dim) {
  if (dim < 1 || !is_power_of_two(static_cast<std::size_t>(dim))) {
    throw Error(ErrorKind::DimMismatch,
                "dimension " + std::to_string(dim) + " is not a power of two");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

/// Bit of qubit `q` in an N-qubit computational index; qubit 0 is the MSB.
inline constexpr std::uint64_t qubit_bit(int q, int n_qubits) {
  return std::uint64_t{1} << (n_qubits - 1 - q);
}

inline ComplexMatrix identity(Eigen::Index dim) {
  return ComplexMatrix::Identity(dim, dim);
}

namespace pauli {

inline ComplexMatrix I() { return ComplexMatrix::Identity(2, 2); }

inline ComplexMatrix X() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline ComplexMatrix Y() {
  ComplexMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

inline ComplexMatrix Z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace pauli

/** Kronecker product; the first factor is the most significant qubit. */
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

inline double max_abs_entry(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimMismatch, "matrix shapes differ");
  }
  return max_abs_entry(a - b);
}

inline bool is_square(const ComplexMatrix& a) { return a.rows() == a.cols(); }

/// True iff max |a a^dagger - I| <= tol.
inline bool is_unitary(const ComplexMatrix& a,
                       double tol = Tolerance::structural) {
  if (!is_square(a) || a.rows() == 0) return false;
  return max_abs_entry(a * a.adjoint() - identity(a.rows())) <= tol;
}

inline bool is_hermitian(const ComplexMatrix& a,
                         double tol = Tolerance::structural) {
  if (!is_square(a)) return false;
  return max_abs_entry(a - a.adjoint()) <= tol;
}

/// Largest singular value.
inline double operator_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

/**
 * Eigen-decomposition of a unitary, U = W diag(exp(i theta)) W^dagger.
 *
 * Column j of `eigenvectors` is the eigenvector assigned to computational
 * basis index j. For gates diagonal in the computational basis this makes W
 * the identity.
 */
struct SpectralForm {
  RealVector eigenphases;     // each in (-pi, pi]
  ComplexMatrix eigenvectors; // W, unitary

  ComplexMatrix reconstruct() const {
    StateVector phases = (kI * eigenphases.cast<Complex>()).array().exp();
    return eigenvectors * phases.asDiagonal() * eigenvectors.adjoint();
  }
};

struct SpectralOptions {
  double unitary_tol = Tolerance::structural;
  /// Eigenphases closer than this share an eigenspace.
  double degeneracy_tol = 1e-8;
  /// Minimum residual norm for a projected basis vector to be kept.
  double pick_tol = 1e-6;
  double residual_tol = Tolerance::structural;
};

namespace detail {

// Maps an angle into (-pi, pi]; values within `snap` of -pi land on +pi.
inline double wrap_phase(double theta, double snap = 1e-10) {
  theta = std::remainder(theta, 2.0 * kPi);
  if (theta <= -kPi + snap) theta += 2.0 * kPi;
  if (theta > kPi) theta = kPi;
  return theta;
}

// Orthonormal basis of span(P e_0, P e_1, ...) picked by Gram-Schmidt in
// computational index order, where P projects onto span(cols).
inline ComplexMatrix canonical_eigenspace_basis(const ComplexMatrix& cols,
                                                double pick_tol) {
  const Eigen::Index dim = cols.rows();
  const Eigen::Index m = cols.cols();
  ComplexMatrix projector = cols * cols.adjoint();
  ComplexMatrix basis(dim, m);
  Eigen::Index found = 0;
  for (Eigen::Index j = 0; j < dim && found < m; ++j) {
    StateVector v = projector.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index p = 0; p < found; ++p) {
        v -= basis.col(p) * basis.col(p).dot(v);
      }
    }
    double nv = v.norm();
    if (nv > pick_tol) basis.col(found++) = v / nv;
  }
  if (found != m) {
    throw Error(ErrorKind::NumericalFailure,
                "could not span a degenerate eigenspace");
  }
  return basis;
}

}  // namespace detail

/**
 * Spectral decomposition of a unitary with a deterministic eigenbasis.
 *
 * Degenerate eigenspaces are re-spanned by Gram-Schmidt against the
 * computational basis in index order. Eigenvectors are then matched to basis
 * indices greedily by largest overlap |<j|w>| (ties: lowest index, then lowest
 * eigenphase), and each column is rotated so that its entry at the matched
 * index is real and positive.
 */
inline SpectralForm spectral_decompose_unitary(const ComplexMatrix& u,
                                               const SpectralOptions& opts = {}) {
  if (!is_unitary(u, opts.unitary_tol)) {
    throw Error(ErrorKind::NotUnitary, "matrix is not unitary");
  }
  const Eigen::Index dim = u.rows();
  Eigen::ComplexSchur<ComplexMatrix> schur(u);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalFailure, "Schur decomposition failed");
  }
  const ComplexMatrix& t = schur.matrixT();
  const ComplexMatrix& q = schur.matrixU();

  std::vector<double> phase(dim);
  std::vector<Eigen::Index> order(dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    phase[c] = detail::wrap_phase(std::arg(t(c, c)));
    order[c] = c;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return phase[a] < phase[b]; });

  // Sorted eigenvectors with degenerate clusters canonicalized.
  ComplexMatrix vecs(dim, dim);
  std::vector<double> vec_phase(dim);
  for (Eigen::Index start = 0; start < dim;) {
    Eigen::Index stop = start + 1;
    while (stop < dim &&
           phase[order[stop]] - phase[order[stop - 1]] < opts.degeneracy_tol) {
      ++stop;
    }
    const Eigen::Index m = stop - start;
    ComplexMatrix cols(dim, m);
    double mean = 0.0;
    for (Eigen::Index p = 0; p < m; ++p) {
      cols.col(p) = q.col(order[start + p]);
      mean += phase[order[start + p]];
    }
    mean /= static_cast<double>(m);
    if (m > 1) cols = detail::canonical_eigenspace_basis(cols, opts.pick_tol);
    for (Eigen::Index p = 0; p < m; ++p) {
      vecs.col(start + p) = cols.col(p);
      vec_phase[start + p] = m > 1 ? mean : phase[order[start + p]];
    }
    start = stop;
  }

  // Greedy overlap matching; overlaps are quantized so near-ties resolve by
  // index instead of rounding noise.
  struct Candidate {
    std::int64_t key;
    Eigen::Index row;
    Eigen::Index col;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(dim * dim));
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      candidates.push_back(
          {std::llround(std::abs(vecs(j, c)) * 1e9), j, c});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              return std::tie(b.key, a.row, a.col) <
                     std::tie(a.key, b.row, b.col);
            });
  std::vector<bool> row_used(dim, false), col_used(dim, false);
  SpectralForm out{RealVector(dim), ComplexMatrix(dim, dim)};
  Eigen::Index assigned = 0;
  for (const auto& cand : candidates) {
    if (row_used[cand.row] || col_used[cand.col]) continue;
    row_used[cand.row] = col_used[cand.col] = true;
    StateVector w = vecs.col(cand.col);
    Complex pivot = w(cand.row);
    if (std::abs(pivot) > 0.0) w *= std::conj(pivot) / std::abs(pivot);
    out.eigenvectors.col(cand.row) = w;
    out.eigenphases(cand.row) = vec_phase[cand.col];
    if (++assigned == dim) break;
  }

  if (max_abs_diff(out.reconstruct(), u) > opts.residual_tol) {
    throw Error(ErrorKind::NumericalFailure,
                "spectral reconstruction residual exceeds tolerance");
  }
  return out;
}

/// exp(i k) for Hermitian k.
inline ComplexMatrix exp_i_generator(const ComplexMatrix& k,
                                     double tol = Tolerance::structural) {
  if (!is_hermitian(k, tol)) {
    throw Error(ErrorKind::NotHermitian, "generator is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(
      (k + k.adjoint()) * Complex(0.5));
  StateVector phases = (kI * eig.eigenvalues().cast<Complex>()).array().exp();
  return eig.eigenvectors() * phases.asDiagonal() *
         eig.eigenvectors().adjoint();
}

/**
 * Embeds an operator acting on `qubits` (first listed = most significant
 * local bit) into the full N-qubit space.
 */
inline ComplexMatrix embed_operator(const ComplexMatrix& local,
                                    std::span<const int> qubits,
                                    int n_qubits) {
  const int k = static_cast<int>(qubits.size());
  if (local.rows() != (Eigen::Index{1} << k) || !is_square(local)) {
    throw Error(ErrorKind::DimMismatch,
                "local operator does not match qubit count");
  }
  std::uint64_t target_mask = 0;
  for (int q : qubits) {
    if (q < 0 || q >= n_qubits) {
      throw Error(ErrorKind::BadIndex, "qubit " + std::to_string(q) +
                                           " out of range");
    }
    std::uint64_t bit = qubit_bit(q, n_qubits);
    if (target_mask & bit) {
      throw Error(ErrorKind::BadIndex, "repeated qubit " + std::to_string(q));
    }
    target_mask |= bit;
  }
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  const std::uint64_t ldim = std::uint64_t{1} << k;
  auto scatter = [&](std::uint64_t local_index) {
    std::uint64_t bits = 0;
    for (int p = 0; p < k; ++p) {
      if (local_index & (std::uint64_t{1} << (k - 1 - p))) {
        bits |= qubit_bit(qubits[p], n_qubits);
      }
    }
    return bits;
  };
  std::vector<std::uint64_t> scattered(ldim);
  for (std::uint64_t l = 0; l < ldim; ++l) scattered[l] = scatter(l);

  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & target_mask) continue;  // iterate environment patterns only
    for (std::uint64_t r = 0; r < ldim; ++r) {
      for (std::uint64_t c = 0; c < ldim; ++c) {
        out(i | scattered[r], i | scattered[c]) = local(r, c);
      }
    }
  }
  return out;
}

inline DensityMatrix density_from_pure(const StateVector& psi) {
  return psi * psi.adjoint();
}

inline bool is_normalized(const StateVector& psi,
                          double tol = Tolerance::structural) {
  return std::abs(psi.norm() - 1.0) <= tol;
}

inline bool is_density_operator(const DensityMatrix& rho,
                                double tol = Tolerance::structural) {
  if (!is_hermitian(rho, tol)) return false;
  if (std::abs(rho.trace() - Complex(1.0)) > tol) return false;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(
      (rho + rho.adjoint()) * Complex(0.5), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() >= -tol;
}

/**
 * Reduced density operator on the qubits in `keep` (sorted ascending in the
 * output ordering).
 */
inline DensityMatrix partial_trace(const DensityMatrix& rho,
                                   std::vector<int> keep) {
  const int n = qubit_count(rho.rows());
  if (!is_square(rho)) throw Error(ErrorKind::DimMismatch, "not square");
  std::sort(keep.begin(), keep.end());
  if (keep.empty() || std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw Error(ErrorKind::BadIndex, "keep set must be nonempty and distinct");
  }
  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (!std::binary_search(keep.begin(), keep.end(), q)) traced.push_back(q);
  }
  for (int q : keep) {
    if (q < 0 || q >= n) {
      throw Error(ErrorKind::BadIndex, "qubit " + std::to_string(q) +
                                           " out of range");
    }
  }
  auto scatter = [n](std::uint64_t value, const std::vector<int>& qs) {
    const int k = static_cast<int>(qs.size());
    std::uint64_t bits = 0;
    for (int p = 0; p < k; ++p) {
      if (value & (std::uint64_t{1} << (k - 1 - p))) bits |= qubit_bit(qs[p], n);
    }
    return bits;
  };
  const std::uint64_t kd = std::uint64_t{1} << keep.size();
  const std::uint64_t ed = std::uint64_t{1} << traced.size();
  std::vector<std::uint64_t> kb(kd), eb(ed);
  for (std::uint64_t r = 0; r < kd; ++r) kb[r] = scatter(r, keep);
  for (std::uint64_t e = 0; e < ed; ++e) eb[e] = scatter(e, traced);

  DensityMatrix out = DensityMatrix::Zero(kd, kd);
  for (std::uint64_t r = 0; r < kd; ++r) {
    for (std::uint64_t s = 0; s < kd; ++s) {
      Complex acc = 0.0;
      for (std::uint64_t e = 0; e < ed; ++e) acc += rho(kb[r] | eb[e], kb[s] | eb[e]);
      out(r, s) = acc;
    }
  }
  return out;
}

/// Reduced density operator of a pure state.
inline DensityMatrix partial_trace(const StateVector& psi,
                                   const std::vector<int>& keep) {
  return partial_trace(density_from_pure(psi), keep);
}

}  // namespace hamgate
