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

// Computes one transition probability by all three routes (exact block
// evolution, spectral formula, path counting) and one gambler's-ruin
// statistic by resolvent, generating function and closed form.

#include <cstdio>

#include "oqwalk/channel.hpp"
#include "oqwalk/combinatorics.hpp"
#include "oqwalk/first_visit.hpp"
#include "oqwalk/gf.hpp"
#include "oqwalk/measure.hpp"
#include "oqwalk/walk_spec.hpp"

int main() {
  using namespace oqwalk;

  // Diagonal walk with L = diag(1/sqrt3, 1/sqrt2), R = diag(sqrt2/sqrt3,
  // 1/sqrt2): probability of moving 0 -> 2 in two steps.
  auto rule = ccase3_rule();
  DensityMatrix rho = density_e11();

  auto channel = build_channel(rule, 5);
  double p_block = transition_probability(channel, rho, 0, 2, 2);
  double p_km = km_probability_for_rule(rule, rho, 0, 2, 2);
  std::vector<double> probs{1.0 / 3.0, 1.0 / 2.0};
  double p_count = diagonal_walk_probability(probs, rho, 0, 2, 2);

  std::printf("p(0 -> 2 in 2), three routes:\n");
  std::printf("  block power      %.12f\n", p_block);
  std::printf("  spectral formula %.12f\n", p_km);
  std::printf("  path counting    %.12f   (expected 4/9)\n", p_count);

  // Hadamard gambler's ruin, M = 6, k = 3.
  auto seg = build_segment(hadamard_left(), hadamard_right(), 6);
  auto res = absorption_stats(seg, density_plus(), 3);
  auto gf = hadamard_ruin_stats(3, 6, density_plus());
  auto closed = hadamard_closed_form(3, 6, density_plus());
  std::printf("\ngambler M=6 k=3, Re(rho12)=1/2:\n");
  std::printf("  resolvent  p=%.12f E=%.12f\n", res.p_reach,
              res.expected_time);
  std::printf("  gen.func.  p=%.12f E=%.12f\n", gf.p_reach, gf.expected_time);
  std::printf("  closed     p=%.12f E=%.12f\n", closed.p_reach,
              closed.expected_time);
  return 0;
}
