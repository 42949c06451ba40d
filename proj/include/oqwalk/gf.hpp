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

#ifndef _oqwalk_gf_hpp_
#define _oqwalk_gf_hpp_

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <utility>
#include <vector>

#include "oqwalk/combinatorics.hpp"
#include "oqwalk/core.hpp"

namespace oqwalk {

using ExactRational = boost::multiprecision::cpp_rational;

inline double to_double(const ExactRational &r) {
  return r.convert_to<double>();
}

//============================================================================
// Exact integer polynomials and rational generating functions
//============================================================================

class IntPolynomial {
public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigCount> coeffs)
      : c_(std::move(coeffs)) {
    trim();
  }

  static IntPolynomial constant(BigCount v) {
    return IntPolynomial(std::vector<BigCount>{std::move(v)});
  }

  static IntPolynomial monomial(BigCount v, std::size_t power) {
    std::vector<BigCount> c(power + 1, BigCount(0));
    c[power] = std::move(v);
    return IntPolynomial(std::move(c));
  }

  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  BigCount coeff(long k) const {
    if (k < 0 || k >= static_cast<long>(c_.size()))
      return 0;
    return c_[static_cast<std::size_t>(k)];
  }

  const std::vector<BigCount> &coeffs() const { return c_; }

  IntPolynomial operator+(const IntPolynomial &o) const {
    std::vector<BigCount> out(std::max(c_.size(), o.c_.size()), BigCount(0));
    for (std::size_t k = 0; k < c_.size(); ++k)
      out[k] += c_[k];
    for (std::size_t k = 0; k < o.c_.size(); ++k)
      out[k] += o.c_[k];
    return IntPolynomial(std::move(out));
  }

  IntPolynomial operator-(const IntPolynomial &o) const {
    std::vector<BigCount> out(std::max(c_.size(), o.c_.size()), BigCount(0));
    for (std::size_t k = 0; k < c_.size(); ++k)
      out[k] += c_[k];
    for (std::size_t k = 0; k < o.c_.size(); ++k)
      out[k] -= o.c_[k];
    return IntPolynomial(std::move(out));
  }

  IntPolynomial operator*(const IntPolynomial &o) const {
    if (is_zero() || o.is_zero())
      return IntPolynomial();
    std::vector<BigCount> out(c_.size() + o.c_.size() - 1, BigCount(0));
    for (std::size_t a = 0; a < c_.size(); ++a)
      for (std::size_t b = 0; b < o.c_.size(); ++b)
        out[a + b] += c_[a] * o.c_[b];
    return IntPolynomial(std::move(out));
  }

  IntPolynomial shifted(std::size_t power) const {
    if (is_zero())
      return IntPolynomial();
    std::vector<BigCount> out(c_.size() + power, BigCount(0));
    for (std::size_t k = 0; k < c_.size(); ++k)
      out[k + power] = c_[k];
    return IntPolynomial(std::move(out));
  }

  IntPolynomial derivative() const {
    if (c_.size() <= 1)
      return IntPolynomial();
    std::vector<BigCount> out(c_.size() - 1, BigCount(0));
    for (std::size_t k = 1; k < c_.size(); ++k)
      out[k - 1] = c_[k] * k;
    return IntPolynomial(std::move(out));
  }

  ExactRational eval(const ExactRational &z) const {
    ExactRational acc = 0;
    for (std::size_t k = c_.size(); k-- > 0;)
      acc = acc * z + ExactRational(c_[k]);
    return acc;
  }

  Complex eval(Complex z) const {
    Complex acc = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;)
      acc = acc * z + Complex(to_double(c_[k]), 0.0);
    return acc;
  }

private:
  void trim() {
    while (!c_.empty() && c_.back() == 0)
      c_.pop_back();
  }

  std::vector<BigCount> c_;
};

// numerator / denominator with nonzero constant denominator term, so the
// series expansion at z = 0 exists. The z^s shift of the path generating
// functions is folded into the numerator.
struct RationalGF {
  IntPolynomial num, den;
};

//============================================================================
// Fibonacci polynomials and Kobayashi's boundary-restricted counts
//============================================================================

// f(z,t) = sum_i (-1)^i binom(t-i, i) z^{2i}; f(sqrt(-1), t) walks the
// Fibonacci numbers, whence the name.
inline IntPolynomial fibonacci_poly(long t) {
  if (t < 0)
    throw ConfigError("fibonacci_poly: t must be >= 0");
  std::vector<BigCount> c(static_cast<std::size_t>(t) + 1, BigCount(0));
  for (long i = 0; 2 * i <= t; ++i) {
    BigCount term = big_binomial(t - i, i);
    c[static_cast<std::size_t>(2 * i)] = (i % 2 == 0) ? term : -term;
  }
  return IntPolynomial(std::move(c));
}

// B(z,s,t) = z^s f(z,t) / f(z,t+s+1): the generating function counting
// lattice paths from 0 to s restricted to the strip [-t, s].
inline RationalGF boundary_gf(long s, long t) {
  if (s < 0 || t < 0)
    throw ConfigError("boundary_gf: s and t must be >= 0");
  RationalGF gf;
  gf.num = fibonacci_poly(t).shifted(static_cast<std::size_t>(s));
  gf.den = fibonacci_poly(t + s + 1);
  return gf;
}

// Power-series coefficients [z^0..z^k] by exact long division. The
// Fibonacci denominators have constant term 1, so the coefficients are
// integers; this is asserted rather than assumed.
inline std::vector<BigCount> series_coeffs(const RationalGF &gf, long up_to) {
  if (up_to < 0)
    throw ConfigError("series_coeffs: up_to must be >= 0");
  BigCount d0 = gf.den.coeff(0);
  if (d0 == 0)
    throw ConfigError("series_coeffs: denominator constant term is zero");
  std::vector<BigCount> c(static_cast<std::size_t>(up_to) + 1, BigCount(0));
  for (long k = 0; k <= up_to; ++k) {
    BigCount acc = gf.num.coeff(k);
    for (long m = 1; m <= k; ++m)
      acc -= gf.den.coeff(m) * c[static_cast<std::size_t>(k - m)];
    if (acc % d0 != 0)
      throw NumericalFailure("series_coeffs: non-integer series coefficient");
    c[static_cast<std::size_t>(k)] = acc / d0;
  }
  return c;
}

inline ExactRational gf_eval(const RationalGF &gf, const ExactRational &z) {
  ExactRational den = gf.den.eval(z);
  if (den == 0)
    throw NumericalFailure("gf_eval: pole at evaluation point");
  return gf.num.eval(z) / den;
}

// d/dz of num/den at z, by the quotient rule on the integer polynomials.
inline ExactRational gf_derivative_eval(const RationalGF &gf,
                                        const ExactRational &z) {
  ExactRational den = gf.den.eval(z);
  if (den == 0)
    throw NumericalFailure("gf_derivative_eval: pole at evaluation point");
  ExactRational num = gf.num.eval(z);
  ExactRational dnum = gf.num.derivative().eval(z);
  ExactRational dden = gf.den.derivative().eval(z);
  return (dnum * den - num * dden) / (den * den);
}

//============================================================================
// Gambler's ruin for the Hadamard walk, generating-function route
//============================================================================

// Counts of interior-confined paths of length j from k to M-1 whose first
// step is up resp. down. In strip coordinates s = M-1-k, t = k-1:
//   u(j) = [z^{j-1}] B(z, s-1, t+1),   d(j) = [z^{j-1}] B(z, s+1, t-1),
// with u = 0 when k = M-1 (an up-first path would leave the strip) and
// d = 0 when k = 1 (a down-first play is immediate ruin).
inline std::pair<BigCount, BigCount> first_move_counts(long k, long m, long j) {
  if (m < 3 || k < 1 || k > m - 1)
    throw ConfigError("first_move_counts: need M >= 3 and 1 <= k <= M-1");
  if (j < 1)
    throw ConfigError("first_move_counts: path length must be >= 1");
  long s = m - 1 - k, t = k - 1;
  BigCount u = 0, d = 0;
  if (s >= 1)
    u = series_coeffs(boundary_gf(s - 1, t + 1), j - 1).back();
  if (t >= 1)
    d = series_coeffs(boundary_gf(s + 1, t - 1), j - 1).back();
  return {u, d};
}

// A value affine in Re(rho_12): value = constant + coefficient * Re(rho_12).
// All of the Hadamard gambler's-ruin statistics have this form, so the
// tables can be produced exactly without picking a density.
struct AffineRational {
  ExactRational constant{0};
  ExactRational coefficient{0};

  double at(double re12) const {
    return to_double(constant) + to_double(coefficient) * re12;
  }

  AffineRational &operator+=(const AffineRational &o) {
    constant += o.constant;
    coefficient += o.coefficient;
    return *this;
  }
};

struct HadamardGamblerExact {
  AffineRational p_reach, p_ruin, expected_time;
};

namespace detail {

// With g(z) = sum_m g_m z^m and path counts c(j) = g_{j-1}:
//   sum_j c(j) / 2^{j+1}       = g(1/2) / 4
//   sum_j (j+1) c(j) / 2^{j+1} = g(1/2)/2 + g'(1/2)/8.
// Both are evaluated exactly; no series truncation is involved.
struct BranchSums {
  ExactRational prob, time;
};

inline BranchSums branch_sums(const RationalGF &g) {
  ExactRational half(1, 2);
  ExactRational v = gf_eval(g, half);
  ExactRational dv = gf_derivative_eval(g, half);
  return {v / 4, v / 2 + dv / 8};
}

// weight (1 +/- 2 Re rho12) as an affine pair scaled by `scale`.
inline AffineRational weighted(const ExactRational &scale, bool plus) {
  AffineRational a;
  a.constant = scale;
  a.coefficient = plus ? scale * 2 : scale * (-2);
  return a;
}

} // namespace detail

// Exact absorption statistics of the Hadamard gambler's ruin on {0..M}
// from initial fortune k: the probability of reaching M before 0 and the
// expected absorption time, both affine in Re(rho_12). Sums over path
// lengths are evaluated as the rational generating functions at z = 1/2;
// the ruin branch reuses the goal machinery with the strip reflected
// (s and t swapped) and the up/down weights exchanged.
inline HadamardGamblerExact hadamard_gambler_exact(long k, long m) {
  if (m < 3 || k < 1 || k > m - 1)
    throw ConfigError("hadamard_gambler_exact: need M >= 3, 1 <= k <= M-1");
  long s = m - 1 - k, t = k - 1;
  HadamardGamblerExact out;
  ExactRational half(1, 2);

  // Goal branch: interior path of length j to M-1, then one step up.
  if (s == 0) {
    // Already adjacent to the goal: the empty path contributes at tau = 1.
    out.p_reach += detail::weighted(half, true);
    out.expected_time += detail::weighted(half, true);
  } else {
    auto su = detail::branch_sums(boundary_gf(s - 1, t + 1));
    out.p_reach += detail::weighted(su.prob, true);
    out.expected_time += detail::weighted(su.time, true);
  }
  if (t >= 1) {
    auto sd = detail::branch_sums(boundary_gf(s + 1, t - 1));
    out.p_reach += detail::weighted(sd.prob, false);
    out.expected_time += detail::weighted(sd.time, false);
  }

  // Ruin branch: reflected strip, weights exchanged.
  if (t == 0) {
    out.p_ruin += detail::weighted(half, false);
    out.expected_time += detail::weighted(half, false);
  } else {
    auto su = detail::branch_sums(boundary_gf(t - 1, s + 1));
    out.p_ruin += detail::weighted(su.prob, false);
    out.expected_time += detail::weighted(su.time, false);
  }
  if (s >= 1) {
    auto sd = detail::branch_sums(boundary_gf(t + 1, s - 1));
    out.p_ruin += detail::weighted(sd.prob, true);
    out.expected_time += detail::weighted(sd.time, true);
  }

  if (out.p_reach.constant + out.p_ruin.constant != 1 ||
      out.p_reach.coefficient + out.p_ruin.coefficient != 0)
    throw NumericalFailure(
        "hadamard_gambler_exact: reach and ruin do not sum to one");
  return out;
}

struct RuinStats {
  double p_reach = 0.0;
  double expected_time = 0.0;
};

inline RuinStats hadamard_ruin_stats(long k, long m, const DensityMatrix &rho) {
  auto exact = hadamard_gambler_exact(k, m);
  double re12 = rho.re_offdiag();
  return {exact.p_reach.at(re12), exact.expected_time.at(re12)};
}

// The closed forms p = k/M + (2/M) Re(rho12), E = k(M-k) + (2M-4k) Re(rho12).
inline HadamardGamblerExact hadamard_closed_form_exact(long k, long m) {
  if (m < 3 || k < 1 || k > m - 1)
    throw ConfigError("hadamard_closed_form: need M >= 3, 1 <= k <= M-1");
  HadamardGamblerExact out;
  out.p_reach.constant = ExactRational(k, m);
  out.p_reach.coefficient = ExactRational(2, m);
  out.p_ruin.constant = 1 - out.p_reach.constant;
  out.p_ruin.coefficient = -out.p_reach.coefficient;
  out.expected_time.constant = ExactRational(k * (m - k));
  out.expected_time.coefficient = ExactRational(2 * m - 4 * k);
  return out;
}

inline RuinStats hadamard_closed_form(long k, long m, const DensityMatrix &rho) {
  auto exact = hadamard_closed_form_exact(k, m);
  double re12 = rho.re_offdiag();
  return {exact.p_reach.at(re12), exact.expected_time.at(re12)};
}

// Helper for rendering exact rationals ("2/3", "4").
inline std::string rational_string(const ExactRational &r) {
  BigCount num = boost::multiprecision::numerator(r);
  BigCount den = boost::multiprecision::denominator(r);
  if (den == 1)
    return num.str();
  return num.str() + "/" + den.str();
}

} // namespace oqwalk

#endif
