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
#include <json.hpp>

#include "oqwalk/core.hpp"
#include "test_util.hpp"

using namespace oqwalk;
using oqwalk_test::random_density;
using oqwalk_test::random_matrix;

TEST_CASE("vec stacks rows") {
  ComplexMatrix a(2, 2);
  a << Complex(1, 2), Complex(3, -1), Complex(0, 4), Complex(-2, 0);
  ComplexVector v = vec(a);
  REQUIRE(v(0) == a(0, 0));
  REQUIRE(v(1) == a(0, 1));
  REQUIRE(v(2) == a(1, 0));
  REQUIRE(v(3) == a(1, 1));

  ComplexVector vi = vec(ComplexMatrix::Identity(2, 2));
  REQUIRE(vi(0) == Complex(1, 0));
  REQUIRE(vi(1) == Complex(0, 0));
  REQUIRE(vi(2) == Complex(0, 0));
  REQUIRE(vi(3) == Complex(1, 0));
}

TEST_CASE("vec and unvec invert each other") {
  Rng rng(7);
  ComplexMatrix m = random_matrix(rng, 3, 3);
  REQUIRE(approx_equal(unvec(vec(m), 3, 3), m, 0.0));

  ComplexVector v(4);
  v << 1, 0, 0, 1;
  REQUIRE(approx_equal(unvec(v, 2, 2), ComplexMatrix::Identity(2, 2), 0.0));

  ComplexMatrix rho(2, 2);
  rho << 0.5, 0.5, 0.5, 0.5;
  REQUIRE(approx_equal(unvec(vec(rho), 2, 2), rho, 0.0));

  REQUIRE_THROWS_AS(unvec(v, 3, 2), ConfigError);

  // Rectangular shapes round-trip too.
  ComplexMatrix rect = random_matrix(rng, 2, 5);
  REQUIRE(approx_equal(unvec(vec(rect), 2, 5), rect, 0.0));
}

TEST_CASE("conj_rep of a diagonal matrix") {
  double l1 = 0.3, l2 = 0.8;
  ComplexMatrix l = ComplexMatrix::Zero(2, 2);
  l(0, 0) = l1;
  l(1, 1) = l2;
  ComplexMatrix rep = conj_rep(l);
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect(0, 0) = l1 * l1;
  expect(1, 1) = l1 * l2;
  expect(2, 2) = l1 * l2;
  expect(3, 3) = l2 * l2;
  REQUIRE(approx_equal(rep, expect, 1e-15));

  REQUIRE(approx_equal(conj_rep(ComplexMatrix::Identity(2, 2)),
                       ComplexMatrix::Identity(4, 4), 0.0));
}

TEST_CASE("amplitude damping representation") {
  double p = 0.37;
  ComplexMatrix v1 = ComplexMatrix::Zero(2, 2), v2 = ComplexMatrix::Zero(2, 2);
  v1(0, 0) = 1.0;
  v1(1, 1) = std::sqrt(1.0 - p);
  v2(0, 1) = std::sqrt(p);
  ComplexMatrix rep = conj_rep(v1) + conj_rep(v2);
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect(0, 0) = 1.0;
  expect(0, 3) = p;
  expect(1, 1) = std::sqrt(1.0 - p);
  expect(2, 2) = std::sqrt(1.0 - p);
  expect(3, 3) = 1.0 - p;
  REQUIRE(approx_equal(rep, expect, 1e-14));
}

TEST_CASE("conj_rep acts as conjugation on vec") {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    int n = 2 + static_cast<int>(rng.next_u64() % 2);
    ComplexMatrix b = random_matrix(rng, n, n);
    ComplexMatrix x = random_matrix(rng, n, n);
    ComplexMatrix lhs = unvec(conj_rep(b) * vec(x), n, n);
    REQUIRE(approx_equal(lhs, conjugate_by(b, x), 1e-12));
  }
}

TEST_CASE("conj_rep is functorial") {
  Rng rng(13);
  for (int t = 0; t < 40; ++t) {
    ComplexMatrix b1 = random_matrix(rng, 2, 2);
    ComplexMatrix b2 = random_matrix(rng, 2, 2);
    REQUIRE(approx_equal(conj_rep(b1 * b2), conj_rep(b1) * conj_rep(b2),
                         1e-12));
  }
}

TEST_CASE("conjugation by the Hadamard right piece") {
  // R rho R* lands in the (1,1) corner with weight (1 + 2 Re rho12)/2.
  ComplexMatrix r(2, 2);
  double s = 1.0 / std::sqrt(2.0);
  r << s, s, 0, 0;
  Rng rng(17);
  DensityMatrix rho = random_density(rng, 2);
  ComplexMatrix out = conjugate_by(r, rho.mat());
  double expect = 0.5 * (1.0 + 2.0 * rho.mat()(0, 1).real());
  REQUIRE(out(0, 0).real() == Catch::Approx(expect).margin(1e-14));
  REQUIRE(std::abs(out(0, 1)) < 1e-14);
  REQUIRE(std::abs(out(1, 0)) < 1e-14);
  REQUIRE(std::abs(out(1, 1)) < 1e-14);

  ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  REQUIRE(approx_equal(conjugate_by(zero, rho.mat()), zero, 0.0));
}

TEST_CASE("thirteen-factor word trace") {
  // Word RRRRLLLRRLRLR applied right-to-left; the trace picks up
  // |a^4 b^3 c^3 d^2|^2 g_R(rho) for row matrices R = [[a,b],[0,0]],
  // L = [[0,0],[c,d]].
  Complex a(0.52, 0.31), b(0.47, -0.62), c(0.55, 0.12), d(-0.61, 0.33);
  ComplexMatrix r = ComplexMatrix::Zero(2, 2), l = ComplexMatrix::Zero(2, 2);
  r(0, 0) = a;
  r(0, 1) = b;
  l(1, 0) = c;
  l(1, 1) = d;
  Rng rng(19);
  DensityMatrix rho = random_density(rng, 2);

  const std::string word = "RRRRLLLRRLRLR"; // leftmost applied last
  ComplexMatrix acc = rho.mat();
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    acc = conjugate_by(*it == 'R' ? r : l, acc);

  Complex g_r = a * (rho.mat()(0, 0) * std::conj(a) +
                     rho.mat()(0, 1) * std::conj(b)) +
                b * (rho.mat()(1, 0) * std::conj(a) +
                     rho.mat()(1, 1) * std::conj(b));
  double factor = std::pow(std::abs(a), 8) * std::pow(std::abs(b), 6) *
                  std::pow(std::abs(c), 6) * std::pow(std::abs(d), 4);
  REQUIRE(acc.trace().real() ==
          Catch::Approx(factor * g_r.real()).margin(1e-12));
}

TEST_CASE("kraus normalization check") {
  double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix r(2, 2), l(2, 2);
  r << s, s, 0, 0;
  l << 0, 0, s, -s;
  REQUIRE(check_kraus_normalization({l, r}).ok);
  REQUIRE(check_kraus_normalization({ComplexMatrix::Identity(3, 3)}).ok);

  auto bad = check_kraus_normalization(
      {ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)});
  REQUIRE_FALSE(bad.ok);
  REQUIRE(bad.residual == Catch::Approx(1.0));
}

TEST_CASE("density matrix validation") {
  ComplexMatrix ok(2, 2);
  ok << 0.5, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.5;
  REQUIRE_NOTHROW(DensityMatrix(ok));

  ComplexMatrix not_herm(2, 2);
  not_herm << 0.5, 0.3, 0.1, 0.5;
  REQUIRE_THROWS_AS(DensityMatrix(not_herm), ConfigError);

  ComplexMatrix bad_trace(2, 2);
  bad_trace << 0.6, 0, 0, 0.6;
  REQUIRE_THROWS_AS(DensityMatrix(bad_trace), ConfigError);

  // Hermitian, unit trace, but indefinite.
  ComplexMatrix neg(2, 2);
  neg << 1.2, 0, 0, -0.2;
  REQUIRE_THROWS_AS(DensityMatrix(neg), ConfigError);
}

TEST_CASE("bloch conversion") {
  Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    double x = 2.0 * rng.next_double() - 1.0;
    double y = 2.0 * rng.next_double() - 1.0;
    double z = 2.0 * rng.next_double() - 1.0;
    double nrm = std::sqrt(x * x + y * y + z * z);
    if (nrm > 1.0) {
      x /= nrm * 1.01;
      y /= nrm * 1.01;
      z /= nrm * 1.01;
    }
    BlochPoint p{x, y, z};
    DensityMatrix rho = DensityMatrix::from_bloch(p);
    REQUIRE(rho.mat().trace().real() == Catch::Approx(1.0).margin(1e-14));
    auto evs = hermitian_eigenvalues(rho.mat());
    REQUIRE(evs[0] == Catch::Approx(0.5 * (1.0 - p.norm())).margin(1e-12));
    REQUIRE(evs[1] == Catch::Approx(0.5 * (1.0 + p.norm())).margin(1e-12));
  }
  REQUIRE_THROWS_AS(DensityMatrix::from_bloch({1.0, 1.0, 0.0}), ConfigError);
}

TEST_CASE("matrix json round trip") {
  using nlohmann::json;
  Rng rng(29);
  ComplexMatrix m = random_matrix(rng, 2, 3);
  json j = matrix_to_json<json>(m);
  REQUIRE(approx_equal(matrix_from_json(j), m, 0.0));

  json bad = j;
  bad["extra"] = 1;
  REQUIRE_THROWS_AS(matrix_from_json(bad), ConfigError);
}
