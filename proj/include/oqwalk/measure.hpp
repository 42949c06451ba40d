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

#ifndef _oqwalk_measure_hpp_
#define _oqwalk_measure_hpp_

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "oqwalk/channel.hpp"
#include "oqwalk/combinatorics.hpp"
#include "oqwalk/core.hpp"
#include "oqwalk/polynomials.hpp"

namespace oqwalk {

//============================================================================
// Gauss-Legendre quadrature
//============================================================================

// Nodes and weights on [-1, 1], by Newton iteration on the Legendre
// recurrence. Cached per order.
struct GaussLegendreRule {
  std::vector<double> nodes, weights;
};

inline const GaussLegendreRule &gauss_legendre(int n) {
  static std::map<int, GaussLegendreRule> cache;
  auto it = cache.find(n);
  if (it != cache.end())
    return it->second;
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15)
        break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

//============================================================================
// Matrix measures
//============================================================================

// One support component of a matrix measure: a scalar density on a compact
// interval, attached to an eigendirection of the basis. The density already
// carries the 1/(2 pi) normalization; the A^{-1/2} factors live in
// MatrixMeasure::left_factor. A direction usually owns one interval, but
// the pointwise construction can produce several disjoint bumps per sorted
// eigenvalue branch, each kept as its own component so the quadrature sees
// clean square-root endpoints.
struct ScalarWeight {
  double lo = 0.0, hi = 0.0;
  int direction = 0;
  std::function<double(double)> density;

  bool empty() const { return !(lo < hi); }
};

// dW(x) = left_factor * U(x) * diag(w_k(x)) * U(x)* * left_factor dx.
// When the defining pair commutes the basis U is x-independent and the
// per-direction weights have closed-form square-root densities. For
// non-commuting pairs the assembled density is also exposed directly
// (full_density_fn): the per-direction split is ill-behaved there because
// sorted eigenvalue branches swap frames at interior crossings, while the
// assembled matrix function is smooth between eigenvalue zero-crossings.
struct MatrixMeasure {
  int order = 0;
  bool fixed_basis = true;
  ComplexMatrix basis;                            // U, when fixed
  std::function<ComplexMatrix(double)> basis_fn;  // U(x), otherwise
  std::function<ComplexMatrix(double)> full_density_fn; // assembled dW(x)
  std::vector<ScalarWeight> weights;              // support components
  ComplexMatrix left_factor;                      // A^{-1/2}

  ComplexMatrix basis_at(double x) const {
    return fixed_basis ? basis : basis_fn(x);
  }

  // Rank-one frame for direction k at x, excluding the scalar weight:
  // left * U(x) E_kk U(x)* * left.
  ComplexMatrix frame(int k, double x) const {
    ComplexMatrix u = basis_at(x);
    ComplexVector col = left_factor * u.col(k);
    return col * col.adjoint();
  }

  // Density matrix of the measure at x (zero outside all supports).
  ComplexMatrix evaluate(double x) const {
    if (full_density_fn)
      return full_density_fn(x);
    ComplexMatrix out = ComplexMatrix::Zero(order, order);
    for (const auto &w : weights) {
      if (w.empty() || x < w.lo || x > w.hi)
        continue;
      double wk = w.density(x);
      if (wk != 0.0)
        out += wk * frame(w.direction, x);
    }
    return out;
  }
};

// Nonsingular symmetrizers R_n conjugating the walk's block matrix into a
// symmetric chain; R_0 = I.
struct SymmetrizerSequence {
  std::function<ComplexMatrix(int)> gen;

  ComplexMatrix at(int n) const {
    if (n < 0)
      throw ConfigError("symmetrizer index must be >= 0");
    return gen(n);
  }

  static SymmetrizerSequence identity(int order) {
    return {[order](int) { return ComplexMatrix::Identity(order, order); }};
  }
};

//============================================================================
// Constructions
//============================================================================

namespace detail {

// Semicircle-type direction weight sqrt(4 a^2 - (x-b)^2)/(2 pi a), i.e.
// sqrt(D+)/2pi for eigenvalue d(x) = 4 - (x-b)^2/a^2.
inline ScalarWeight semicircle_direction(double a, double b, int direction) {
  ScalarWeight w;
  w.lo = b - 2.0 * a;
  w.hi = b + 2.0 * a;
  w.direction = direction;
  w.density = [a, b](double x) {
    double d = 4.0 - (x - b) * (x - b) / (a * a);
    return d <= 0.0 ? 0.0 : std::sqrt(d) / (2.0 * kPi);
  };
  return w;
}

inline ComplexMatrix hermitian_inverse_sqrt(const ComplexMatrix &a,
                                            const char *what) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
  if (es.info() != Eigen::Success)
    throw NumericalFailure(std::string(what) + ": eigendecomposition failed");
  double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::VectorXd inv_sqrt(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    double ev = es.eigenvalues()(k);
    if (ev <= 1e-12 * std::max(1.0, scale))
      throw InapplicableRoute(std::string(what) +
                              ": matrix is not positive definite");
    inv_sqrt(k) = 1.0 / std::sqrt(ev);
  }
  return es.eigenvectors() * inv_sqrt.asDiagonal() *
         es.eigenvectors().adjoint();
}

} // namespace detail

// Measure for the absorbing walk induced by diagonal L, R with entries in
// (0,1): a diagonal of scaled semicircles, one per (p,q) index pair with
// half-amplitude parameter c_{pq} = sqrt(l_p l_q r_p r_q). Entries (1,1)
// and (N^2,N^2) are the trace-relevant ones for order-2 walks. For N > 2
// the same entrywise construction is applied (extrapolated coverage).
inline MatrixMeasure diag_measure(const ComplexMatrix &l,
                                  const ComplexMatrix &r) {
  const Eigen::Index n = l.rows();
  if (l.rows() != l.cols() || r.rows() != r.cols() || r.rows() != n)
    throw ConfigError("diag_measure: L, R must be square of equal order");
  auto diag_entries = [n](const ComplexMatrix &m,
                          const char *name) -> std::vector<double> {
    std::vector<double> d;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j && std::abs(m(i, j)) > 1e-14)
          throw ConfigError(std::string("diag_measure: ") + name +
                            " is not diagonal");
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(m(i, i).imag()) > 1e-14)
        throw ConfigError(std::string("diag_measure: ") + name +
                          " has non-real diagonal");
      d.push_back(m(i, i).real());
    }
    return d;
  };
  std::vector<double> ld = diag_entries(l, "L"), rd = diag_entries(r, "R");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(ld[static_cast<std::size_t>(i)] > 0.0 &&
          ld[static_cast<std::size_t>(i)] < 1.0) ||
        !(rd[static_cast<std::size_t>(i)] > 0.0 &&
          rd[static_cast<std::size_t>(i)] < 1.0))
      throw InapplicableRoute(
          "diag_measure: diagonal entries must lie in (0,1); a zero entry "
          "makes A singular and Dette's hypotheses fail");
  }
  auto chk = check_kraus_normalization({l, r});
  if (!chk.ok)
    throw ConfigError("diag_measure: L*L + R*R != I (residual " +
                      std::to_string(chk.residual) + ")");

  const int order = static_cast<int>(n * n);
  MatrixMeasure m;
  m.order = order;
  m.fixed_basis = true;
  m.basis = ComplexMatrix::Identity(order, order);
  Eigen::VectorXd inv_sqrt_a(order);
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = 0; q < n; ++q) {
      double c = std::sqrt(ld[static_cast<std::size_t>(p)] *
                           ld[static_cast<std::size_t>(q)] *
                           rd[static_cast<std::size_t>(p)] *
                           rd[static_cast<std::size_t>(q)]);
      m.weights.push_back(detail::semicircle_direction(
          c, 0.0, static_cast<int>(p * n + q)));
      inv_sqrt_a(p * n + q) = 1.0 / std::sqrt(c);
    }
  ComplexMatrix lf = ComplexMatrix::Zero(order, order);
  lf.diagonal() = inv_sqrt_a.cast<Complex>();
  m.left_factor = lf;
  return m;
}

// The symmetrizers R_k = ([L]^{-1}[R])^{k/2} for diagonal L, R.
inline SymmetrizerSequence diag_symmetrizer(const ComplexMatrix &l,
                                            const ComplexMatrix &r) {
  const Eigen::Index n = l.rows();
  const int order = static_cast<int>(n * n);
  Eigen::VectorXd ratio(order);
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = 0; q < n; ++q) {
      double lv = (l(p, p) * std::conj(l(q, q))).real();
      double rv = (r(p, p) * std::conj(r(q, q))).real();
      if (lv <= 0.0)
        throw InapplicableRoute("diag_symmetrizer: singular [L]");
      ratio(p * n + q) = rv / lv;
    }
  return {[ratio, order](int k) {
    ComplexMatrix rk = ComplexMatrix::Zero(order, order);
    for (int t = 0; t < order; ++t)
      rk(t, t) = std::pow(ratio(t), 0.5 * double(k));
    return rk;
  }};
}

// Duran's construction: the matrix weight for the Chebyshev-like recurrence
// with A positive definite and B Hermitian. Pointwise,
//   H(x) = A^{-1/2}(B - xI) A^{-1} (B - xI) A^{-1/2} - 4I,
//   -H(x) = U(x) D(x) U(x)^{-1},  dW = (1/2pi) A^{-1/2} U D+^{1/2} U* A^{-1/2}.
// When A and B commute the basis is x-independent and each direction is a
// shifted semicircle; otherwise the eigenproblem is solved per evaluation
// point with eigenvector phases aligned to the previous node.
inline MatrixMeasure duran_measure(const ComplexMatrix &a,
                                   const ComplexMatrix &b,
                                   bool force_pointwise = false) {
  const Eigen::Index d = a.rows();
  if (a.rows() != a.cols() || b.rows() != b.cols() || b.rows() != d)
    throw ConfigError("duran_measure: A, B must be square of equal order");
  if (max_abs(a - a.adjoint()) > 1e-10)
    throw ConfigError("duran_measure: A must be Hermitian");
  if (max_abs(b - b.adjoint()) > 1e-10)
    throw ConfigError("duran_measure: B must be Hermitian");

  MatrixMeasure m;
  m.order = static_cast<int>(d);
  m.left_factor = detail::hermitian_inverse_sqrt(a, "duran_measure");

  if (!force_pointwise && max_abs(a * b - b * a) <= 1e-12) {
    // Commuting pair: joint eigenbasis computed once.
    ComplexMatrix v = joint_unitary_diagonalizer({a, b});
    m.fixed_basis = true;
    m.basis = v;
    for (Eigen::Index k = 0; k < d; ++k) {
      double ak = (v.adjoint() * a * v)(k, k).real();
      double bk = (v.adjoint() * b * v)(k, k).real();
      m.weights.push_back(
          detail::semicircle_direction(ak, bk, static_cast<int>(k)));
    }
    return m;
  }

  // Generic pair: pointwise Hermitian eigendecomposition of -H(x).
  ComplexMatrix ainv_sqrt = m.left_factor;
  Eigen::FullPivLU<ComplexMatrix> alu(a);
  ComplexMatrix ainv = alu.inverse();
  auto minus_h = [ainv_sqrt, ainv, b, d](double x) {
    ComplexMatrix shift = b - x * ComplexMatrix::Identity(d, d);
    ComplexMatrix h = ainv_sqrt * shift * ainv * shift * ainv_sqrt -
                      4.0 * ComplexMatrix::Identity(d, d);
    return ComplexMatrix(-h);
  };

  // Shared continuity cache: phases of U(x) are fixed against the
  // previously evaluated node.
  auto prev = std::make_shared<ComplexMatrix>();
  auto eigb = [minus_h, prev, d](double x) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(minus_h(x));
    if (es.info() != Eigen::Success)
      throw NumericalFailure("duran_measure: pointwise eigenproblem failed");
    ComplexMatrix u = es.eigenvectors();
    if (prev->size() == u.size()) {
      for (Eigen::Index k = 0; k < d; ++k) {
        Complex ov = (prev->col(k).adjoint() * u.col(k))(0, 0);
        if (std::abs(ov) > 1e-8)
          u.col(k) *= std::conj(ov) / std::abs(ov);
      }
    }
    *prev = u;
    return u;
  };
  m.fixed_basis = false;
  m.basis_fn = eigb;
  ComplexMatrix lf = m.left_factor;
  m.full_density_fn = [minus_h, lf, d](double x) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(minus_h(x));
    if (es.info() != Eigen::Success)
      throw NumericalFailure("duran_measure: pointwise eigenproblem failed");
    Eigen::VectorXd w(d);
    for (Eigen::Index k = 0; k < d; ++k) {
      double ev = es.eigenvalues()(k);
      w(k) = ev <= 0.0 ? 0.0 : std::sqrt(ev) / (2.0 * kPi);
    }
    ComplexMatrix u = es.eigenvectors();
    return ComplexMatrix(lf * u * w.asDiagonal() * u.adjoint() * lf);
  };

  auto eigenvalue_k = [minus_h](int k, double x) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(minus_h(x));
    return es.eigenvalues()(k);
  };

  // The support of every direction lies inside
  // [min eig(B) - 2 max eig(A), max eig(B) + 2 max eig(A)].
  auto bev = hermitian_eigenvalues(0.5 * (b + b.adjoint()));
  auto aev = hermitian_eigenvalues(0.5 * (a + a.adjoint()));
  double amax = 0.0;
  for (double e : aev)
    amax = std::max(amax, std::abs(e));
  double lo_brk = bev.front() - 2.0 * amax - 1e-6;
  double hi_brk = bev.back() + 2.0 * amax + 1e-6;

  // Each sorted branch may be positive on several disjoint intervals
  // (branches of the two shifted parabolas can interleave); every connected
  // component becomes its own support so the endpoint substitution applies.
  const int scan = 2048;
  const double step = (hi_brk - lo_brk) / double(scan);
  for (int k = 0; k < m.order; ++k) {
    auto bisect = [&](double inside, double outside) {
      for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (inside + outside);
        if (eigenvalue_k(k, mid) > 0.0)
          inside = mid;
        else
          outside = mid;
      }
      return 0.5 * (inside + outside);
    };
    bool in_run = false;
    double run_start = 0.0;
    double prev_x = lo_brk;
    for (int t = 0; t <= scan; ++t) {
      double x = lo_brk + step * double(t);
      bool pos = eigenvalue_k(k, x) > 0.0;
      if (pos && !in_run) {
        run_start = t == 0 ? x : bisect(x, prev_x);
        in_run = true;
      } else if (!pos && in_run) {
        ScalarWeight w;
        w.lo = run_start;
        w.hi = bisect(prev_x, x);
        w.direction = k;
        w.density = [eigenvalue_k, k](double xx) {
          double ev = eigenvalue_k(k, xx);
          return ev <= 0.0 ? 0.0 : std::sqrt(ev) / (2.0 * kPi);
        };
        m.weights.push_back(std::move(w));
        in_run = false;
      }
      prev_x = x;
    }
    if (in_run) {
      ScalarWeight w;
      w.lo = run_start;
      w.hi = hi_brk;
      w.direction = k;
      w.density = [eigenvalue_k, k](double xx) {
        double ev = eigenvalue_k(k, xx);
        return ev <= 0.0 ? 0.0 : std::sqrt(ev) / (2.0 * kPi);
      };
      m.weights.push_back(std::move(w));
    }
  }
  return m;
}

//============================================================================
// Dette's existence conditions
//============================================================================

struct DetteReport {
  bool ok = true;
  int first_failure = -1;
  std::string detail;
  double max_symmetry_residual = 0.0;
  double max_product_residual = 0.0;
};

// Verifies, up to `depth`, that (1) R_n B_n R_n^{-1} is symmetric and
// (2) R_n^T R_n = C_n^{-1}...C_1^{-1} (R_0^T R_0) A_0...A_{n-1}, for the
// chain read off the channel blocks (A_n above the diagonal, C_n^T below).
// Singular A_n or C_n means the theorem is inapplicable (as for the
// Hadamard split, whose [L] and [R] are rank one).
inline DetteReport check_dette_conditions(const BlockTridiagonalChannel &ch,
                                          const SymmetrizerSequence &sym,
                                          int depth, double tol = 1e-9) {
  if (depth < 1 || depth >= ch.sites)
    throw ConfigError("check_dette_conditions: depth out of range");
  const int n2 = ch.dim * ch.dim;
  DetteReport rep;

  ComplexMatrix r0 = sym.at(0);
  if (!approx_equal(r0, ComplexMatrix::Identity(n2, n2), 1e-12))
    throw ConfigError("check_dette_conditions: R_0 must be the identity");

  ComplexMatrix left_acc = ComplexMatrix::Identity(n2, n2);  // C_n^{-1}...C_1^{-1}
  ComplexMatrix right_acc = ComplexMatrix::Identity(n2, n2); // A_0...A_{n-1}

  for (int n = 0; n <= depth; ++n) {
    ComplexMatrix rn = sym.at(n);
    Eigen::FullPivLU<ComplexMatrix> rlu(rn);
    if (!rlu.isInvertible())
      throw Error("check_dette_conditions: singular R_" + std::to_string(n));

    // Condition (1): symmetry of R_n B_n R_n^{-1}.
    ComplexMatrix bn = ch.block_or_zero(n, n);
    ComplexMatrix s = rn * bn * rlu.inverse();
    double res1 = max_abs(s - s.transpose());
    rep.max_symmetry_residual = std::max(rep.max_symmetry_residual, res1);
    if (res1 > tol && rep.ok) {
      rep.ok = false;
      rep.first_failure = n;
      rep.detail = "R_n B_n R_n^{-1} not symmetric at n=" + std::to_string(n);
    }

    if (n >= 1) {
      const ComplexMatrix *an_prev = ch.block(n - 1, n); // A_{n-1}
      const ComplexMatrix *cn_blk = ch.block(n, n - 1);  // C_n^T
      if (an_prev == nullptr || cn_blk == nullptr)
        throw ConfigError("check_dette_conditions: missing off-diagonal "
                          "block at n=" + std::to_string(n));
      ComplexMatrix cn = cn_blk->transpose();
      Eigen::FullPivLU<ComplexMatrix> clu(cn);
      Eigen::FullPivLU<ComplexMatrix> alu(*an_prev);
      if (!clu.isInvertible() || !alu.isInvertible())
        throw InapplicableRoute(
            "singular A_n or C_n at n=" + std::to_string(n) +
            ": Dette's Theorem inapplicable (no matrix measure available "
            "by this criterion)");
      left_acc = clu.inverse() * left_acc;
      right_acc = right_acc * (*an_prev);

      ComplexMatrix target = left_acc * right_acc; // R_0^T R_0 = I
      ComplexMatrix lhs = rn.transpose() * rn;
      double res2 = max_abs(lhs - target) / std::max(1.0, max_abs(target));
      rep.max_product_residual = std::max(rep.max_product_residual, res2);
      if (res2 > tol && rep.ok) {
        rep.ok = false;
        rep.first_failure = n;
        rep.detail =
            "R_n^T R_n != C_n^{-1}..C_1^{-1} A_0..A_{n-1} at n=" +
            std::to_string(n);
      }
    }
  }
  return rep;
}

//============================================================================
// Karlin-McGregor integrals
//============================================================================

namespace detail {

// Integral of x^n Q_i(x) dW(x) Q_j^T(x) over a single direction's support,
// with the substitution x = m + r cos(theta) flattening the square-root
// endpoint behavior; Gauss-Legendre in theta, nodes doubled until stable.
inline ComplexMatrix
km_direction_integral(const MatrixMeasure &measure, const ScalarWeight &w,
                      const MatrixPolynomialSeq::Evaluator &polys, int i,
                      int j, int n, double tol) {
  const int order = measure.order;
  if (w.empty())
    return ComplexMatrix::Zero(order, order);
  const int k = w.direction;
  const double mid = 0.5 * (w.lo + w.hi);
  const double rad = 0.5 * (w.hi - w.lo);

  ComplexMatrix frame_fixed;
  if (measure.fixed_basis)
    frame_fixed = measure.frame(k, mid);

  auto evaluate = [&](int nodes) {
    const auto &rule = gauss_legendre(nodes);
    ComplexMatrix acc = ComplexMatrix::Zero(order, order);
    for (int t = 0; t < nodes; ++t) {
      // theta in (0, pi): theta = pi*(s+1)/2 for s in (-1,1)
      double theta = 0.5 * kPi * (rule.nodes[static_cast<std::size_t>(t)] + 1.0);
      double jac = 0.5 * kPi * rule.weights[static_cast<std::size_t>(t)];
      double x = mid + rad * std::cos(theta);
      double wx = w.density(x);
      if (wx == 0.0)
        continue;
      double scalar = std::pow(x, n) * wx * rad * std::sin(theta) * jac;
      auto q = polys(x);
      const ComplexMatrix &frame =
          measure.fixed_basis ? frame_fixed : measure.frame(k, x);
      acc += scalar * (q[static_cast<std::size_t>(i)] * frame *
                       q[static_cast<std::size_t>(j)].transpose());
    }
    return acc;
  };

  ComplexMatrix prev = evaluate(48);
  for (int nodes = 96; nodes <= 3072; nodes *= 2) {
    ComplexMatrix cur = evaluate(nodes);
    if (max_abs(cur - prev) <= tol * std::max(1.0, max_abs(cur)))
      return cur;
    prev = cur;
  }
  throw NumericalFailure(
      "km_block: quadrature non-convergence (interval refinement exhausted)");
}

// Integral of x^n Q_i(x) dW(x) Q_j^T(x) over one cell of an assembled
// (pointwise) measure. Between consecutive eigenvalue zero-crossings the
// density is an analytic matrix function with at most square-root decay
// at the cell ends, which the cosine substitution flattens.
inline ComplexMatrix
km_cell_integral(const MatrixMeasure &measure, double lo, double hi,
                 const MatrixPolynomialSeq::Evaluator &polys, int i, int j,
                 int n, double tol) {
  const int order = measure.order;
  const double mid = 0.5 * (lo + hi);
  const double rad = 0.5 * (hi - lo);

  auto evaluate = [&](int nodes) {
    const auto &rule = gauss_legendre(nodes);
    ComplexMatrix acc = ComplexMatrix::Zero(order, order);
    for (int t = 0; t < nodes; ++t) {
      double theta = 0.5 * kPi * (rule.nodes[static_cast<std::size_t>(t)] + 1.0);
      double jac = 0.5 * kPi * rule.weights[static_cast<std::size_t>(t)];
      double x = mid + rad * std::cos(theta);
      ComplexMatrix dw = measure.evaluate(x);
      double scalar = std::pow(x, n) * rad * std::sin(theta) * jac;
      auto q = polys(x);
      acc += scalar * (q[static_cast<std::size_t>(i)] * dw *
                       q[static_cast<std::size_t>(j)].transpose());
    }
    return acc;
  };

  ComplexMatrix prev = evaluate(48);
  for (int nodes = 96; nodes <= 3072; nodes *= 2) {
    ComplexMatrix cur = evaluate(nodes);
    if (max_abs(cur - prev) <= tol * std::max(1.0, max_abs(cur)))
      return cur;
    prev = cur;
  }
  throw NumericalFailure(
      "km_block: quadrature non-convergence (interval refinement exhausted)");
}

} // namespace detail

// (Q^n)_{ij} = int x^n Q_i(x) dW(x) Q_j^T(x) for the symmetrized chain.
// Fixed-basis measures integrate per direction with closed-form weights;
// assembled pointwise measures integrate cell by cell, where the cells are
// delimited by the eigenvalue zero-crossings recorded in the weights.
inline ComplexMatrix km_block(const MatrixMeasure &measure,
                              const MatrixPolynomialSeq &polys, int i, int j,
                              int n) {
  if (i < 0 || j < 0 || n < 0)
    throw ConfigError("km_block: negative argument");
  if (polys.order() != measure.order)
    throw ConfigError("km_block: measure and polynomials disagree on order");
  auto ev = polys.make_evaluator(std::max(i, j));
  ComplexMatrix total = ComplexMatrix::Zero(measure.order, measure.order);
  if (measure.fixed_basis || !measure.full_density_fn) {
    for (const auto &w : measure.weights)
      total += detail::km_direction_integral(measure, w, ev, i, j, n, 1e-12);
    return total;
  }
  std::vector<double> cuts;
  for (const auto &w : measure.weights) {
    if (w.empty())
      continue;
    cuts.push_back(w.lo);
    cuts.push_back(w.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    double lo = cuts[c], hi = cuts[c + 1];
    if (hi - lo < 1e-13)
      continue;
    // Skip cells where every direction is zero.
    bool active = false;
    double probe = 0.5 * (lo + hi);
    for (const auto &w : measure.weights)
      if (!w.empty() && probe > w.lo && probe < w.hi) {
        active = true;
        break;
      }
    if (!active)
      continue;
    total += detail::km_cell_integral(measure, lo, hi, ev, i, j, n, 1e-12);
  }
  return total;
}

// Unsymmetrized probability: (P^n)_{ij} = R_i^{-1} (Q^n)_{ij} R_j, then
// p = Tr( unvec( (P^n)_{ij} vec(rho) ) ).
inline double km_probability(const MatrixMeasure &measure,
                             const MatrixPolynomialSeq &polys,
                             const SymmetrizerSequence &sym,
                             const DensityMatrix &rho, int i, int j, int n) {
  ComplexMatrix q = km_block(measure, polys, i, j, n);
  ComplexMatrix ri = sym.at(i);
  Eigen::FullPivLU<ComplexMatrix> lu(ri);
  if (!lu.isInvertible())
    throw Error("km_probability: singular R_i");
  ComplexMatrix p = lu.inverse() * q * sym.at(j);
  const Eigen::Index nn = rho.order();
  if (measure.order != nn * nn)
    throw ConfigError("km_probability: density order does not match measure");
  return unvec(p * vec(rho.mat()), nn, nn).trace().real();
}

// Moments of the scaled semicircle weight sqrt(4c^2 - x^2)/(2 pi c^2):
// c^k Catalan(k/2) for even k, zero for odd k.
inline double semicircle_moment(double c, long k) {
  if (k < 0)
    throw ConfigError("semicircle_moment: k must be >= 0");
  if (k % 2 == 1)
    return 0.0;
  return std::pow(c, double(k)) * to_double(catalan(k / 2));
}

//============================================================================
// Route dispatcher for walk rules
//============================================================================

// Everything needed to run the spectral route on one walk: the measure,
// the matching polynomial recurrence, the symmetrizers, and the unitary
// change of basis to apply to the density (identity except for the
// normal non-diagonal case).
struct KmRoute {
  MatrixMeasure measure;
  MatrixPolynomialSeq polys;
  SymmetrizerSequence sym;
  ComplexMatrix density_basis; // N x N; probabilities use rho' = U* rho U
};

inline bool is_diagonal(const ComplexMatrix &m, double tol = 1e-12) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (r != c && std::abs(m(r, c)) > tol)
        return false;
  return true;
}

inline bool is_normal(const ComplexMatrix &m, double tol = 1e-10) {
  return max_abs(m * m.adjoint() - m.adjoint() * m) <= tol;
}

inline KmRoute make_km_route(const NearestNeighborRule &rule) {
  const ComplexMatrix &l = rule.base_left();
  const ComplexMatrix &r = rule.base_right();
  const Eigen::Index n = l.rows();
  const ComplexMatrix id_n = ComplexMatrix::Identity(n, n);

  if (!rule.base_loop()) {
    // Case 1: diagonal transitions.
    if (is_diagonal(l) && is_diagonal(r)) {
      MatrixMeasure m = diag_measure(l, r);
      ComplexMatrix a = ComplexMatrix::Zero(m.order, m.order);
      ComplexMatrix lrep = conj_rep(l), rrep = conj_rep(r);
      for (int t = 0; t < m.order; ++t)
        a(t, t) = std::sqrt((lrep(t, t) * rrep(t, t)).real());
      return KmRoute{std::move(m),
                     MatrixPolynomialSeq::chebyshev_like(
                         a, ComplexMatrix::Zero(m.order, m.order)),
                     diag_symmetrizer(l, r), id_n};
    }
    // Case 2: normal pair, reduced to the diagonal case in the joint
    // eigenbasis of L*L (which also diagonalizes R*R = I - L*L).
    if (is_normal(l) && is_normal(r)) {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
          ComplexMatrix(l.adjoint() * l));
      if (es.info() != Eigen::Success)
        throw NumericalFailure("make_km_route: eigenproblem failed");
      ComplexMatrix u = es.eigenvectors();
      ComplexMatrix ld = ComplexMatrix::Zero(n, n),
                    rd = ComplexMatrix::Zero(n, n);
      for (Eigen::Index k = 0; k < n; ++k) {
        double lam = es.eigenvalues()(k);
        if (!(lam > 1e-12 && lam < 1.0 - 1e-12))
          throw InapplicableRoute(
              "make_km_route: left/right moduli not in (0,1); Dette's "
              "hypotheses fail for this normal pair");
        ld(k, k) = std::sqrt(lam);
        rd(k, k) = std::sqrt(1.0 - lam);
      }
      MatrixMeasure m = diag_measure(ld, rd);
      ComplexMatrix a = ComplexMatrix::Zero(m.order, m.order);
      ComplexMatrix lrep = conj_rep(ld), rrep = conj_rep(rd);
      for (int t = 0; t < m.order; ++t)
        a(t, t) = std::sqrt((lrep(t, t) * rrep(t, t)).real());
      return KmRoute{std::move(m),
                     MatrixPolynomialSeq::chebyshev_like(
                         a, ComplexMatrix::Zero(m.order, m.order)),
                     diag_symmetrizer(ld, rd), u};
    }
  } else {
    // Case 3: lazy walk with equal off-diagonal representations and a
    // Hermitian representation pair; Duran's Theorem applies directly.
    ComplexMatrix lrep = conj_rep(l), rrep = conj_rep(r);
    ComplexMatrix brep = conj_rep(*rule.base_loop());
    if (approx_equal(lrep, rrep, 1e-10) &&
        max_abs(lrep - lrep.adjoint()) <= 1e-10 &&
        max_abs(brep - brep.adjoint()) <= 1e-10) {
      MatrixMeasure m = duran_measure(lrep, brep);
      int order = m.order;
      return KmRoute{std::move(m),
                     MatrixPolynomialSeq::chebyshev_like(lrep, brep),
                     SymmetrizerSequence::identity(order), id_n};
    }
  }

  // No constructive measure. Distinguish the singular-block diagnosis
  // (e.g. the Hadamard split, whose representation blocks are rank one).
  Eigen::FullPivLU<ComplexMatrix> llu(conj_rep(l)), rlu(conj_rep(r));
  if (!llu.isInvertible() || !rlu.isInvertible())
    throw InapplicableRoute(
        "singular A_n: Dette's Theorem inapplicable -- the representation "
        "blocks [L], [R] are singular, so no matrix measure is available");
  throw InapplicableRoute(
      "make_km_route: no constructive matrix measure known for this walk "
      "(supported: diagonal pairs, normal pairs, symmetric lazy walks)");
}

inline double km_probability_for_rule(const NearestNeighborRule &rule,
                                      const DensityMatrix &rho, int i, int j,
                                      int n) {
  KmRoute route = make_km_route(rule);
  ComplexMatrix rho2 =
      route.density_basis.adjoint() * rho.mat() * route.density_basis;
  // Re-hermitize against roundoff before revalidation.
  rho2 = 0.5 * (rho2 + rho2.adjoint());
  return km_probability(route.measure, route.polys, route.sym,
                        DensityMatrix(rho2), i, j, n);
}

} // namespace oqwalk

#endif
