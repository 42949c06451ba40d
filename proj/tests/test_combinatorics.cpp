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

#include <catch2/catch_amalgamated.hpp>

#include "oqwalk/channel.hpp"
#include "oqwalk/combinatorics.hpp"
#include "oqwalk/walk_spec.hpp"
#include "test_util.hpp"

using namespace oqwalk;
using oqwalk_test::random_commuting_normal_pair;
using oqwalk_test::random_density;
using oqwalk_test::random_matrix;

TEST_CASE("catalan numbers") {
  REQUIRE(catalan(0) == 1);
  REQUIRE(catalan(2) == 2);
  REQUIRE(catalan(10) == 16796);

  // Segner's recurrence C_{n+1} = sum C_i C_{n-i} as an independent oracle.
  std::vector<BigCount> seg{1};
  for (int n = 0; n < 15; ++n) {
    BigCount next = 0;
    for (int i = 0; i <= n; ++i)
      next += seg[static_cast<std::size_t>(i)] *
              seg[static_cast<std::size_t>(n - i)];
    seg.push_back(next);
  }
  for (int n = 0; n <= 15; ++n)
    REQUIRE(catalan(n) == seg[static_cast<std::size_t>(n)]);
}

TEST_CASE("path counts match the enumeration oracle exactly") {
  REQUIRE(count_paths(0, 0, 4) == 2);
  REQUIRE(count_paths(0, 1, 2) == 0); // parity
  for (long i = 0; i <= 8; ++i)
    for (long j = 0; j <= 8; ++j)
      for (long n = 0; n <= 20; ++n) {
        REQUIRE(count_paths(i, j, n) == count_paths_dp(i, j, n));
        REQUIRE(count_paths(i, j, n) == count_paths(j, i, n));
      }
  for (long k = 0; k <= 10; ++k)
    REQUIRE(count_paths(0, 0, 2 * k) == catalan(k));
}

TEST_CASE("closed polynomial form") {
  Rng rng(31);

  SECTION("degree zero is the identity") {
    ComplexMatrix p1 = random_matrix(rng, 3, 3);
    REQUIRE(approx_equal(closed_poly_eval(p1, 0),
                         ComplexMatrix::Identity(3, 3), 0.0));
  }

  SECTION("B = 0 cubic: x^3 A^-3 - 2x A^-1") {
    ComplexMatrix a = random_matrix(rng, 2, 2);
    a += 3.0 * ComplexMatrix::Identity(2, 2); // keep well-conditioned
    double x = 0.7351;
    ComplexMatrix p1 = closed_poly_p1(a, ComplexMatrix::Zero(2, 2), x);
    ComplexMatrix ainv = a.inverse();
    ComplexMatrix expect =
        x * x * x * ainv * ainv * ainv - 2.0 * x * ainv;
    REQUIRE(approx_equal(closed_poly_eval(p1, 3), expect, 1e-10));
  }

  SECTION("matches the forward recurrence up to degree 12") {
    for (int trial = 0; trial < 6; ++trial) {
      ComplexMatrix a = random_matrix(rng, 2, 2);
      a += 3.0 * ComplexMatrix::Identity(2, 2);
      ComplexMatrix b = random_matrix(rng, 2, 2);
      double x = 2.0 * rng.next_double() - 1.0;
      // Recurrence with A_n = A, B_n = B, C_n^T = A: P_{n+1} =
      // A^{-1}((x-B) P_n - A P_{n-1}).
      ComplexMatrix ainv = a.inverse();
      ComplexMatrix prev = ComplexMatrix::Zero(2, 2);
      ComplexMatrix cur = ComplexMatrix::Identity(2, 2);
      ComplexMatrix p1 = closed_poly_p1(a, b, x);
      for (int n = 0; n <= 12; ++n) {
        REQUIRE(approx_equal(closed_poly_eval(p1, n), cur, 1e-9));
        ComplexMatrix next =
            ainv * ((x * ComplexMatrix::Identity(2, 2) - b) * cur - a * prev);
        prev = cur;
        cur = next;
      }
    }
  }

  SECTION("singular A is rejected") {
    REQUIRE_THROWS_AS(
        closed_poly_p1(ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2),
                       0.5),
        InapplicableRoute);
  }
}

TEST_CASE("zero-loop block powers") {
  ComplexMatrix half = 0.5 * ComplexMatrix::Identity(4, 4);

  SECTION("N(0,0,4) A^4 with A = I/2") {
    REQUIRE(approx_equal(block_power_zero_loop(half, 0, 0, 4),
                         0.125 * ComplexMatrix::Identity(4, 4), 1e-14));
  }

  SECTION("parity zero") {
    REQUIRE(max_abs(block_power_zero_loop(half, 0, 1, 4)) == 0.0);
  }

  SECTION("matches the channel block power") {
    auto ch = build_channel(ccase1_rule(), 9);
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j <= 3; ++j)
        for (int n = 0; n <= 5; ++n)
          REQUIRE(approx_equal(block_power_zero_loop(half, i, j, n),
                               block_power_entry(ch, i, j, n), 1e-12));
  }
}

TEST_CASE("catalan double sum telescopes to the path count") {
  for (long i = 0; i <= 8; ++i)
    for (long j = 0; j <= 8; ++j)
      for (long n = 0; n <= 20; ++n)
        REQUIRE(catalan_double_sum(i, j, n) == count_paths(i, j, n));

  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 0.4;
  a(1, 1) = 0.7;
  ComplexMatrix blk = catalan_double_sum_block(a, 0, 0, 6);
  ComplexMatrix a6 = a;
  for (int t = 1; t < 6; ++t)
    a6 = a6 * a;
  REQUIRE(approx_equal(blk, to_double(catalan(3)) * a6, 1e-13));
  REQUIRE(max_abs(catalan_double_sum_block(a, 0, 1, 6)) == 0.0);

  ComplexMatrix notdiag(2, 2);
  notdiag << 1, 1, 0, 1;
  REQUIRE_THROWS_AS(catalan_double_sum_block(notdiag, 0, 0, 2), ConfigError);
}

TEST_CASE("diagonal walk probabilities") {
  Rng rng(37);
  DensityMatrix rho = random_density(rng, 2);

  SECTION("fair coin gives N(i,j,n)/2^n") {
    std::vector<double> p{0.5, 0.5};
    for (long i = 0; i <= 4; ++i)
      for (long n = 0; n <= 10; ++n)
        for (long j = 0; j <= 6; ++j) {
          double expect = to_double(count_paths(i, j, n)) / std::pow(2.0, n);
          REQUIRE(diagonal_walk_probability(p, rho, i, j, n) ==
                  Catch::Approx(expect).margin(1e-12));
        }
  }

  SECTION("four-step return formula") {
    std::vector<double> p{0.23, 0.61};
    double expect = 2.0 * (p[0] * p[0] * (1 - p[0]) * (1 - p[0]) *
                               rho.mat()(0, 0).real() +
                           p[1] * p[1] * (1 - p[1]) * (1 - p[1]) *
                               rho.mat()(1, 1).real());
    REQUIRE(diagonal_walk_probability(p, rho, 0, 0, 4) ==
            Catch::Approx(expect).margin(1e-13));
  }

  SECTION("equal parameters are density independent") {
    std::vector<double> p{0.37, 0.37};
    DensityMatrix other = random_density(rng, 2);
    REQUIRE(diagonal_walk_probability(p, rho, 1, 3, 6) ==
            Catch::Approx(diagonal_walk_probability(p, other, 1, 3, 6))
                .margin(1e-14));
  }

  SECTION("out-of-range parameters are rejected") {
    REQUIRE_THROWS_AS(
        diagonal_walk_probability({1.2, 0.5}, rho, 0, 0, 2), ConfigError);
  }
}

TEST_CASE("commuting lazy blocks against the exact evolution") {
  // A = alpha I and the antidiagonal loop representation commute, so the
  // binomial-weighted sum over path lengths must reproduce the channel.
  auto rule = lazy_duran_rule(0.45);
  ComplexMatrix a = conj_rep(rule.base_right());
  ComplexMatrix b = conj_rep(*rule.base_loop());
  auto ch = build_channel(rule, 12);
  for (long i = 0; i <= 3; ++i)
    for (long j = 0; j <= 3; ++j)
      for (long n = 0; n <= 6; ++n)
        REQUIRE(approx_equal(
            commuting_block_power(a, b, i, j, n),
            block_power_entry(ch, static_cast<int>(i), static_cast<int>(j),
                              static_cast<int>(n)),
            1e-10));

  ComplexMatrix g(2, 2), d(2, 2);
  g << 1, 1, 0, 1;
  d << 1, 0, 1, 1;
  REQUIRE_THROWS_AS(commuting_block_power(g, d, 0, 0, 2), InapplicableRoute);
}

TEST_CASE("unitarily diagonalizable block powers") {
  Rng rng(41);

  SECTION("diagonal input reduces to the closed diagonal block") {
    ComplexMatrix g = ComplexMatrix::Zero(2, 2), d = ComplexMatrix::Zero(2, 2);
    g(0, 0) = 0.6;
    g(1, 1) = 0.5;
    d(0, 0) = 0.8;
    d(1, 1) = std::sqrt(1.0 - 0.25);
    ComplexMatrix blk = unitary_diag_block(g, d, 1, 3, 4);
    // one left, three right moves
    ComplexMatrix expect = ComplexMatrix::Zero(2, 2);
    expect(0, 0) = to_double(count_paths(1, 3, 4)) * g(0, 0) * d(0, 0) *
                   d(0, 0) * d(0, 0);
    expect(1, 1) = to_double(count_paths(1, 3, 4)) * g(1, 1) * d(1, 1) *
                   d(1, 1) * d(1, 1);
    REQUIRE(approx_equal(blk, expect, 1e-12));
  }

  SECTION("matches the exact channel evolution") {
    for (int trial = 0; trial < 4; ++trial) {
      auto [l, r] = random_commuting_normal_pair(rng, 2);
      NearestNeighborRule rule(l, r);
      auto ch = build_channel(rule, 10);
      ComplexMatrix g = conj_rep(l), d = conj_rep(r);
      for (auto [i, j, n] : {std::tuple<int, int, int>{1, 3, 4},
                             {2, 2, 4},
                             {0, 2, 6},
                             {3, 1, 4}})
        REQUIRE(approx_equal(unitary_diag_block(g, d, i, j, n),
                             block_power_entry(ch, i, j, n), 1e-9));
    }
  }

  SECTION("parity zero and non-commuting rejection") {
    auto [l, r] = random_commuting_normal_pair(rng, 2);
    REQUIRE(max_abs(unitary_diag_block(conj_rep(l), conj_rep(r), 0, 1, 4)) ==
            0.0);
    ComplexMatrix g(2, 2), d(2, 2);
    g << 1, 1, 0, 1;
    d << 1, 0, 1, 1;
    REQUIRE_THROWS_AS(unitary_diag_block(g, d, 0, 0, 2), InapplicableRoute);
  }
}
