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

#ifndef _oqwalk_polynomials_hpp_
#define _oqwalk_polynomials_hpp_

#include <functional>
#include <vector>

#include "oqwalk/core.hpp"

namespace oqwalk {

// Matrix-valued polynomials defined by the block three-term recurrence
//   x Q_n(x) = A_n Q_{n+1}(x) + B_n Q_n(x) + C_n^T Q_{n-1}(x),
// with Q_{-1} = 0, Q_0 = I. Coefficients are supplied per index so both the
// constant-coefficient (Chebyshev-like) case and genuinely varying chains
// fit the same evaluator.
class MatrixPolynomialSeq {
public:
  using CoeffFn = std::function<ComplexMatrix(int)>;

  MatrixPolynomialSeq(int order, CoeffFn a, CoeffFn b, CoeffFn c_transposed)
      : order_(order), a_(std::move(a)), b_(std::move(b)),
        ct_(std::move(c_transposed)) {}

  // x U_n = A* U_{n+1} + B U_n + A U_{n-1}: the recurrence of the matrix
  // Chebyshev polynomials of the second kind.
  static MatrixPolynomialSeq chebyshev_like(const ComplexMatrix &a,
                                            const ComplexMatrix &b) {
    int order = static_cast<int>(a.rows());
    ComplexMatrix astar = a.adjoint();
    return MatrixPolynomialSeq(
        order, [astar](int) { return astar; }, [b](int) { return b; },
        [a](int) { return a; });
  }

  int order() const { return order_; }
  ComplexMatrix coeff_a(int n) const { return a_(n); }
  ComplexMatrix coeff_b(int n) const { return b_(n); }
  ComplexMatrix coeff_c_transposed(int n) const { return ct_(n); }

  // Precomputes the A_n inverses once so that quadrature loops evaluating
  // the polynomials at hundreds of nodes pay only matrix multiplies.
  class Evaluator {
  public:
    Evaluator(int order, int depth, std::vector<ComplexMatrix> ainv,
              std::vector<ComplexMatrix> b, std::vector<ComplexMatrix> ct)
        : order_(order), depth_(depth), ainv_(std::move(ainv)),
          b_(std::move(b)), ct_(std::move(ct)) {}

    int depth() const { return depth_; }

    // Q_0(x) .. Q_depth(x).
    std::vector<ComplexMatrix> operator()(double x) const {
      std::vector<ComplexMatrix> q;
      q.reserve(static_cast<std::size_t>(depth_) + 1);
      q.push_back(ComplexMatrix::Identity(order_, order_));
      ComplexMatrix prev = ComplexMatrix::Zero(order_, order_);
      for (int n = 0; n < depth_; ++n) {
        ComplexMatrix rhs =
            x * q.back() - b_[static_cast<std::size_t>(n)] * q.back() -
            ct_[static_cast<std::size_t>(n)] * prev;
        prev = q.back();
        q.push_back(ainv_[static_cast<std::size_t>(n)] * rhs);
      }
      return q;
    }

  private:
    int order_, depth_;
    std::vector<ComplexMatrix> ainv_, b_, ct_;
  };

  Evaluator make_evaluator(int up_to) const {
    if (up_to < 0)
      throw ConfigError("eval_polynomials: degree must be >= 0");
    std::vector<ComplexMatrix> ainv, b, ct;
    for (int n = 0; n < up_to; ++n) {
      ComplexMatrix an = a_(n);
      Eigen::FullPivLU<ComplexMatrix> lu(an);
      if (!lu.isInvertible())
        throw InapplicableRoute("eval_polynomials: singular A_" +
                                std::to_string(n));
      ainv.push_back(lu.inverse());
      b.push_back(b_(n));
      ct.push_back(ct_(n));
    }
    return Evaluator(order_, up_to, std::move(ainv), std::move(b),
                     std::move(ct));
  }

  // Q_0(x) .. Q_k(x) by forward recurrence.
  std::vector<ComplexMatrix> eval(double x, int up_to) const {
    return make_evaluator(up_to)(x);
  }

private:
  int order_;
  CoeffFn a_, b_, ct_;
};

inline std::vector<ComplexMatrix>
eval_polynomials(const MatrixPolynomialSeq &seq, double x, int up_to) {
  return seq.eval(x, up_to);
}

} // namespace oqwalk

#endif
