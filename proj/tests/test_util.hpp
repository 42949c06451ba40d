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

#ifndef _oqwalk_test_util_hpp_
#define _oqwalk_test_util_hpp_

#include <utility>
#include <vector>

#include "oqwalk/combinatorics.hpp"
#include "oqwalk/core.hpp"
#include "oqwalk/rng.hpp"

namespace oqwalk_test {

using oqwalk::BigCount;
using oqwalk::Complex;
using oqwalk::ComplexMatrix;
using oqwalk::DensityMatrix;
using oqwalk::Rng;

inline ComplexMatrix random_matrix(Rng &rng, int rows, int cols) {
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      m(r, c) = Complex(rng.next_normal(), rng.next_normal());
  return m;
}

inline ComplexMatrix random_hermitian(Rng &rng, int n) {
  ComplexMatrix m = random_matrix(rng, n, n);
  return ComplexMatrix(0.5 * (m + m.adjoint()));
}

inline DensityMatrix random_density(Rng &rng, int n) {
  ComplexMatrix g = random_matrix(rng, n, n);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(rho);
}

inline ComplexMatrix random_unitary(Rng &rng, int n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(rng, n, n));
  ComplexMatrix q = qr.householderQ();
  return q;
}

// Random (L, R) with L*L + R*R = I: the top/bottom halves of the first N
// columns of a random 2N x 2N unitary.
inline std::pair<ComplexMatrix, ComplexMatrix> random_lr_pair(Rng &rng,
                                                              int n) {
  ComplexMatrix u = random_unitary(rng, 2 * n);
  ComplexMatrix iso = u.leftCols(n);
  return {iso.topRows(n), iso.bottomRows(n)};
}

// Simultaneously unitarily diagonalizable pair with |b_k|^2 + |c_k|^2 = 1.
inline std::pair<ComplexMatrix, ComplexMatrix>
random_commuting_normal_pair(Rng &rng, int n) {
  ComplexMatrix s = random_unitary(rng, n);
  ComplexMatrix bl = ComplexMatrix::Zero(n, n), cr = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double lam = 0.15 + 0.7 * rng.next_double(); // modulus^2 of the left move
    double phl = 2.0 * oqwalk::kPi * rng.next_double();
    double phr = 2.0 * oqwalk::kPi * rng.next_double();
    bl(k, k) = std::sqrt(lam) * Complex(std::cos(phl), std::sin(phl));
    cr(k, k) = std::sqrt(1.0 - lam) * Complex(std::cos(phr), std::sin(phr));
  }
  return {s * bl * s.adjoint(), s * cr * s.adjoint()};
}

// Exact count of lattice paths from 0 to `end` of length `len` confined to
// the strip [-t, s] (used against the generating-function coefficients).
inline BigCount strip_path_count(long s, long t, long end, long len) {
  std::vector<BigCount> cur(static_cast<std::size_t>(s + t) + 1, BigCount(0));
  // height h is stored at index h + t
  cur[static_cast<std::size_t>(t)] = 1;
  for (long step = 0; step < len; ++step) {
    std::vector<BigCount> nxt(cur.size(), BigCount(0));
    for (long h = -t; h <= s; ++h) {
      const auto &c = cur[static_cast<std::size_t>(h + t)];
      if (c == 0)
        continue;
      if (h + 1 <= s)
        nxt[static_cast<std::size_t>(h + 1 + t)] += c;
      if (h - 1 >= -t)
        nxt[static_cast<std::size_t>(h - 1 + t)] += c;
    }
    cur = std::move(nxt);
  }
  return cur[static_cast<std::size_t>(end + t)];
}

} // namespace oqwalk_test

#endif
