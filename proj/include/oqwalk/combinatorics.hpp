/**
 * This code is part of oqwalk.
 *
 * (C) Copyright oqwalk contributors 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 *
 * Any modifications or derivative works of this code must retain this
 * copyright notice, and modified files need to carry a notice indicating
 * that they have been altered from the originals.
 */

#ifndef _oqwalk_combinatorics_hpp_
#define _oqwalk_combinatorics_hpp_

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "oqwalk/core.hpp"
#include "oqwalk/rng.hpp"

namespace oqwalk {

// Exact nonnegative counts. All path counting is done in arbitrary
// precision; conversion to double happens only at the final probability
// multiply (binom(40,20) already strains 64 bits once multiplied).
using BigCount = boost::multiprecision::cpp_int;

// binom(n,k) with the total convention: 0 whenever k < 0 or k > n.
// This makes the reflection-principle formula below case-free.
inline BigCount big_binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n)
    return 0;
  if (k > n - k)
    k = n - k;
  BigCount out = 1;
  for (long t = 0; t < k; ++t) {
    out *= (n - t);
    out /= (t + 1); // always divides exactly at this point
  }
  return out;
}

inline BigCount catalan(long k) {
  if (k < 0)
    throw ConfigError("catalan: k must be >= 0");
  return big_binomial(2 * k, k) / (k + 1);
}

// Number of n-step nearest-neighbor walks i -> j on the half-line
// (positions stay >= 0), by the reflection principle:
//   N(i,j,n) = binom(n, (n+i-j)/2) - binom(n, (n+i+j)/2 + 1)
// when n+i+j is even, zero otherwise.
inline BigCount count_paths(long i, long j, long n) {
  if (i < 0 || j < 0 || n < 0)
    throw ConfigError("count_paths: arguments must be >= 0");
  if ((n + i + j) % 2 != 0)
    return 0;
  return big_binomial(n, (n + i - j) / 2) - big_binomial(n, (n + i + j) / 2 + 1);
}

inline double to_double(const BigCount &c) { return c.convert_to<double>(); }

// DP oracle used by the tests: exact enumeration of half-line walks.
inline BigCount count_paths_dp(long i, long j, long n, long space_cap = -1) {
  long cap = space_cap > 0 ? space_cap : std::max(i, j) + n + 1;
  std::vector<BigCount> cur(static_cast<std::size_t>(cap) + 2, 0);
  cur[static_cast<std::size_t>(i)] = 1;
  for (long s = 0; s < n; ++s) {
    std::vector<BigCount> nxt(cur.size(), 0);
    for (long v = 0; v <= cap; ++v) {
      if (cur[static_cast<std::size_t>(v)] == 0)
        continue;
      if (v > 0)
        nxt[static_cast<std::size_t>(v - 1)] += cur[static_cast<std::size_t>(v)];
      if (v < cap)
        nxt[static_cast<std::size_t>(v + 1)] += cur[static_cast<std::size_t>(v)];
    }
    cur = std::move(nxt);
  }
  return cur[static_cast<std::size_t>(j)];
}

//============================================================================
// Closed matrix-polynomial expression
//============================================================================

// P_n = sum_{j<=n/2} (-1)^j binom(n-j, j) P1^{n-2j}, the closed form of the
// constant-coefficient three-term recurrence with P1 = x A^{-1} - A^{-1} B.
inline ComplexMatrix closed_poly_eval(const ComplexMatrix &p1, long n) {
  if (p1.rows() != p1.cols())
    throw ConfigError("closed_poly_eval: P1 must be square");
  if (n < 0)
    throw ConfigError("closed_poly_eval: degree must be >= 0");
  const Eigen::Index d = p1.rows();
  // powers of P1 up to n, ascending
  std::vector<ComplexMatrix> pw;
  pw.reserve(static_cast<std::size_t>(n) + 1);
  pw.push_back(ComplexMatrix::Identity(d, d));
  for (long t = 1; t <= n; ++t)
    pw.push_back(pw.back() * p1);
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (long j = 0; 2 * j <= n; ++j) {
    double coeff = to_double(big_binomial(n - j, j));
    if (j % 2 == 1)
      coeff = -coeff;
    out += coeff * pw[static_cast<std::size_t>(n - 2 * j)];
  }
  return out;
}

// Helper building P1 from the recurrence data (A invertible).
inline ComplexMatrix closed_poly_p1(const ComplexMatrix &a,
                                    const ComplexMatrix &b, double x) {
  Eigen::FullPivLU<ComplexMatrix> lu(a);
  if (!lu.isInvertible())
    throw InapplicableRoute("closed_poly_p1: singular A");
  ComplexMatrix ainv = lu.inverse();
  return x * ainv - ainv * b;
}

//============================================================================
// Closed block powers for lazy-free walks
//============================================================================

// (T^n)_ij = N(i,j,n) A^n for the loop-free homogeneous block matrix.
inline ComplexMatrix block_power_zero_loop(const ComplexMatrix &a, long i,
                                           long j, long n) {
  BigCount cnt = count_paths(i, j, n);
  const Eigen::Index d = a.rows();
  if (cnt == 0)
    return ComplexMatrix::Zero(d, d);
  ComplexMatrix an = ComplexMatrix::Identity(d, d);
  for (long t = 0; t < n; ++t)
    an = an * a;
  return to_double(cnt) * an;
}

// The Catalan double sum; equals N(i,j,n) as an integer identity.
inline BigCount catalan_double_sum(long i, long j, long n) {
  if ((n + i + j) % 2 != 0)
    return 0;
  BigCount acc = 0;
  for (long l = 0; 2 * l <= i; ++l)
    for (long r = 0; 2 * r <= j; ++r) {
      long idx = (n + i + j) / 2 - l - r;
      if (idx < 0)
        continue;
      BigCount term = big_binomial(i - l, l) * big_binomial(j - r, r) *
                      catalan(idx);
      if ((l + r) % 2 == 0)
        acc += term;
      else
        acc -= term;
    }
  return acc;
}

inline ComplexMatrix catalan_double_sum_block(const ComplexMatrix &a, long i,
                                              long j, long n) {
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      if (r != c && std::abs(a(r, c)) > 0.0)
        throw ConfigError("catalan_double_sum_block: A must be diagonal");
  BigCount cnt = catalan_double_sum(i, j, n);
  const Eigen::Index d = a.rows();
  if (cnt == 0)
    return ComplexMatrix::Zero(d, d);
  ComplexMatrix an = ComplexMatrix::Identity(d, d);
  for (long t = 0; t < n; ++t)
    an = an * a;
  return to_double(cnt) * an;
}

// Commuting off-diagonal/diagonal blocks A, B:
//   (T^n)_ij = sum_k binom(n,k) N(i,j,k) A^k B^{n-k}.
// No worked value exists for B != 0; the exact-evolution oracle is the
// only cross-check.
inline ComplexMatrix commuting_block_power(const ComplexMatrix &a,
                                           const ComplexMatrix &b, long i,
                                           long j, long n) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw ConfigError("commuting_block_power: A, B must be square, equal");
  if (max_abs(a * b - b * a) > 1e-10)
    throw InapplicableRoute("commuting_block_power: A and B do not commute");
  const Eigen::Index d = a.rows();
  std::vector<ComplexMatrix> apw{ComplexMatrix::Identity(d, d)};
  std::vector<ComplexMatrix> bpw{ComplexMatrix::Identity(d, d)};
  for (long t = 1; t <= n; ++t) {
    apw.push_back(apw.back() * a);
    bpw.push_back(bpw.back() * b);
  }
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (long k = 0; k <= n; ++k) {
    BigCount coeff = big_binomial(n, k) * count_paths(i, j, k);
    if (coeff == 0)
      continue;
    out += to_double(coeff) * apw[static_cast<std::size_t>(k)] *
           bpw[static_cast<std::size_t>(n - k)];
  }
  return out;
}

//============================================================================
// Closed probabilities
//============================================================================

// L = diag(sqrt(p_k)), R = diag(sqrt(1-p_k)):
// p_rho(i -n-> j) = N(i,j,n) sum_k rho_kk sqrt(p_k^{i-j+n} (1-p_k)^{-i+j+n}).
inline double diagonal_walk_probability(const std::vector<double> &p,
                                        const DensityMatrix &rho, long i,
                                        long j, long n) {
  if (static_cast<Eigen::Index>(p.size()) != rho.order())
    throw ConfigError("diagonal_walk_probability: dimension mismatch");
  for (double pk : p)
    if (!(pk > 0.0 && pk < 1.0))
      throw ConfigError("diagonal_walk_probability: p_k must be in (0,1)");
  BigCount cnt = count_paths(i, j, n);
  if (cnt == 0)
    return 0.0;
  double lefts = double(i - j + n) / 2.0;  // exponent of p_k after the sqrt
  double rights = double(-i + j + n) / 2.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    double w = std::pow(p[k], lefts) * std::pow(1.0 - p[k], rights);
    acc += rho.mat()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k))
               .real() *
           w;
  }
  return to_double(cnt) * acc;
}

//============================================================================
// Simultaneously unitarily diagonalizable pairs
//============================================================================

// Unitary W such that W* M W is diagonal for every matrix in `mats`,
// assuming they are normal and pairwise commuting. Found by
// eigendecomposing a random Hermitian combination of the Hermitian and
// anti-Hermitian parts, then verifying.
inline ComplexMatrix
joint_unitary_diagonalizer(const std::vector<ComplexMatrix> &mats,
                           double tol = 1e-10, std::uint64_t seed = 12345) {
  if (mats.empty())
    throw ConfigError("joint_unitary_diagonalizer: empty input");
  const Eigen::Index d = mats.front().rows();
  std::vector<ComplexMatrix> herms;
  for (const auto &m : mats) {
    if (m.rows() != d || m.cols() != d)
      throw ConfigError("joint_unitary_diagonalizer: order mismatch");
    herms.push_back(0.5 * (m + m.adjoint()));
    herms.push_back(Complex(0, -0.5) * (m - m.adjoint()));
  }
  Rng rng(seed);
  for (int attempt = 0; attempt < 16; ++attempt) {
    ComplexMatrix h = ComplexMatrix::Zero(d, d);
    for (const auto &hm : herms)
      h += (rng.next_double() + 0.25) * hm;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    if (es.info() != Eigen::Success)
      continue;
    ComplexMatrix w = es.eigenvectors();
    bool ok = true;
    for (const auto &m : mats) {
      ComplexMatrix t = w.adjoint() * m * w;
      for (Eigen::Index r = 0; r < d && ok; ++r)
        for (Eigen::Index c = 0; c < d; ++c)
          if (r != c && std::abs(t(r, c)) > tol) {
            ok = false;
            break;
          }
    }
    if (ok)
      return w;
  }
  throw InapplicableRoute("joint_unitary_diagonalizer: matrices are not "
                          "simultaneously unitarily diagonalizable");
}

// Closed n-step block for a walk whose moves G (left) and D (right) are
// simultaneously unitarily diagonalizable:
//   block = N(i,j,n) * W diag_G^{(n+i-j)/2} diag_D^{(n-i+j)/2} W*.
// Both half-exponents are integers whenever the count is nonzero, so no
// branch choice arises: this is the eigendirection-wise evaluation of
// (D^{n+i-j} G^{n-i+j})^{1/2}.
inline ComplexMatrix unitary_diag_block(const ComplexMatrix &g,
                                        const ComplexMatrix &d, long i, long j,
                                        long n) {
  if (g.rows() != g.cols() || d.rows() != d.cols() || g.rows() != d.rows())
    throw ConfigError("unitary_diag_block: G, D must be square, equal order");
  if (max_abs(g * d - d * g) > 1e-10)
    throw InapplicableRoute("unitary_diag_block: G and D do not commute "
                            "(not simultaneously unitarily diagonalizable)");
  BigCount cnt = count_paths(i, j, n);
  const Eigen::Index m = g.rows();
  if (cnt == 0)
    return ComplexMatrix::Zero(m, m);
  ComplexMatrix w = joint_unitary_diagonalizer({g, d});
  ComplexVector gd = (w.adjoint() * g * w).diagonal();
  ComplexVector dd = (w.adjoint() * d * w).diagonal();
  long lefts = (n + i - j) / 2, rights = (n - i + j) / 2;
  ComplexVector entry(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    Complex v = 1.0;
    for (long t = 0; t < lefts; ++t)
      v *= gd(k);
    for (long t = 0; t < rights; ++t)
      v *= dd(k);
    entry(k) = v;
  }
  return to_double(cnt) * (w * entry.asDiagonal() * w.adjoint());
}

} // namespace oqwalk

#endif
