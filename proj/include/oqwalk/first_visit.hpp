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

#ifndef _oqwalk_first_visit_hpp_
#define _oqwalk_first_visit_hpp_

#include <cmath>
#include <limits>
#include <memory>

#include "oqwalk/core.hpp"

namespace oqwalk {

//============================================================================
// Segment channel: the gambler's-ruin walk on {0..M}
//============================================================================

// Full representation of the segment OQW on the (M+1) N^2 dimensional
// vec-space, with identity loops at 0 and M. phi acts on stacked
// column states (site-major, vec(rho_i) per site); block (j,i) of phi is
// [B_i^j]. The LU factorization of (I - Q phi) is computed once and
// shared read-only across absorption queries.
struct SegmentChannel {
  int m = 0;   // goal site
  int dim = 0; // internal dimension N
  ComplexMatrix phi;
  ComplexMatrix q_phi; // interior projection after one application of phi
  double spectral_margin = 0.0;
  std::shared_ptr<Eigen::PartialPivLU<ComplexMatrix>> lu; // of I - q_phi

  int block_size() const { return dim * dim; }
  int space_dim() const { return (m + 1) * block_size(); }

  Eigen::VectorXcd site_component(const ComplexVector &v, int site) const {
    return v.segment(site * block_size(), block_size());
  }

  double site_trace(const ComplexVector &v, int site) const {
    ComplexVector blk = site_component(v, site);
    double tr = 0.0;
    for (int t = 0; t < dim; ++t)
      tr += blk(t * dim + t).real();
    return tr;
  }
};

struct FirstVisitResult {
  double p_reach = 0.0;
  double p_ruin = 0.0;
  double expected_time = 0.0;
  double spectral_margin = std::numeric_limits<double>::quiet_NaN();
  // Unnormalized absorption operators (diagnostics; their traces are the
  // probabilities above).
  ComplexMatrix goal_density;
  ComplexMatrix ruin_density;
};

namespace detail {

inline double spectral_radius_power_iteration(const ComplexMatrix &m,
                                              int iters = 600) {
  if (m.rows() == 0)
    return 0.0;
  ComplexVector v = ComplexVector::Ones(m.rows());
  v.normalize();
  double lambda = 0.0;
  for (int t = 0; t < iters; ++t) {
    ComplexVector w = m * v;
    double nrm = w.norm();
    if (nrm < 1e-300)
      return 0.0;
    lambda = nrm;
    v = w / nrm;
  }
  return lambda;
}

} // namespace detail

// Assemble the segment walk for transitions L (left), R (right) with
// identity loops at the two ends. M >= 3 is required by the theory (the
// interior must have at least two sites).
inline SegmentChannel build_segment(const ComplexMatrix &l,
                                    const ComplexMatrix &r, int m) {
  if (m < 3)
    throw ConfigError("build_segment: M must be >= 3 (M in {1,2} rejected)");
  auto chk = check_kraus_normalization({l, r});
  if (!chk.ok)
    throw ConfigError("build_segment: L*L + R*R != I (residual " +
                      std::to_string(chk.residual) + ")");
  SegmentChannel seg;
  seg.m = m;
  seg.dim = static_cast<int>(l.rows());
  const int bs = seg.block_size();
  const int dim = seg.space_dim();
  seg.phi = ComplexMatrix::Zero(dim, dim);

  ComplexMatrix lrep = conj_rep(l), rrep = conj_rep(r);
  ComplexMatrix irep = ComplexMatrix::Identity(bs, bs);
  auto put = [&](int dst, int src, const ComplexMatrix &blk) {
    seg.phi.block(dst * bs, src * bs, bs, bs) = blk;
  };
  put(0, 0, irep);
  put(m, m, irep);
  for (int k = 1; k <= m - 1; ++k) {
    put(k - 1, k, lrep);
    put(k + 1, k, rrep);
  }

  seg.q_phi = seg.phi;
  seg.q_phi.middleRows(0, bs).setZero();
  seg.q_phi.middleRows(m * bs, bs).setZero();

  seg.spectral_margin =
      1.0 - detail::spectral_radius_power_iteration(seg.q_phi);
  if (seg.spectral_margin > 1e-12) {
    ComplexMatrix sys = ComplexMatrix::Identity(dim, dim) - seg.q_phi;
    seg.lu = std::make_shared<Eigen::PartialPivLU<ComplexMatrix>>(sys);
  }
  return seg;
}

// Solve (I - z Q phi) x = v. For z in (0,1) the Neumann series always
// converges; at z = 1 convergence is exactly the absorption condition,
// certified by the spectral margin computed at build time.
inline ComplexVector resolvent_apply(const SegmentChannel &seg, double z,
                                     const ComplexVector &v) {
  if (z < 0.0 || z > 1.0)
    throw ConfigError("resolvent_apply: z must lie in [0, 1]");
  if (v.size() != seg.space_dim())
    throw ConfigError("resolvent_apply: state dimension mismatch");
  if (z == 0.0)
    return v;
  if (z == 1.0) {
    if (!seg.lu)
      throw NumericalFailure("resolvent_apply: interior not absorbing "
                             "(spectral margin <= 1e-12)");
    return seg.lu->solve(v);
  }
  ComplexMatrix sys =
      ComplexMatrix::Identity(seg.space_dim(), seg.space_dim()) - z * seg.q_phi;
  return Eigen::PartialPivLU<ComplexMatrix>(sys).solve(v);
}

inline ComplexVector segment_state(const SegmentChannel &seg,
                                   const DensityMatrix &rho, int k) {
  ComplexVector v = ComplexVector::Zero(seg.space_dim());
  v.segment(k * seg.block_size(), seg.block_size()) = vec(rho.mat());
  return v;
}

// Absorption statistics from site k: probability of reaching M before 0
// via F(1) = P phi (I - Q phi)^{-1}, ruin via (S - P), and the expected
// time via 1 + Tr(G'(1) .) with the resolvent-derivative identity
// G'(1) = S phi K (Q phi) K, K = (I - Q phi)^{-1}  (two linear solves).
inline FirstVisitResult absorption_stats(const SegmentChannel &seg,
                                         const DensityMatrix &rho, int k) {
  if (k < 1 || k > seg.m - 1)
    throw ConfigError("absorption_stats: k must be in 1..M-1");
  if (!seg.lu)
    throw NumericalFailure("absorption_stats: interior not absorbing "
                           "(spectral margin <= 1e-12)");
  ComplexVector v = segment_state(seg, rho, k);

  ComplexVector x = seg.lu->solve(v);
  ComplexVector y = seg.phi * x;
  FirstVisitResult res;
  res.spectral_margin = seg.spectral_margin;
  res.p_reach = seg.site_trace(y, seg.m);
  res.p_ruin = seg.site_trace(y, 0);
  res.goal_density = unvec(seg.site_component(y, seg.m), seg.dim, seg.dim);
  res.ruin_density = unvec(seg.site_component(y, 0), seg.dim, seg.dim);

  ComplexVector x2 = seg.lu->solve(ComplexVector(seg.q_phi * x));
  ComplexVector g = seg.phi * x2;
  res.expected_time = 1.0 + seg.site_trace(g, 0) + seg.site_trace(g, seg.m);

  if (std::abs(res.p_reach + res.p_ruin - 1.0) > 1e-9)
    throw NumericalFailure("absorption_stats: p_reach + p_ruin != 1 "
                           "(got " + std::to_string(res.p_reach + res.p_ruin) +
                           ")");
  return res;
}

//============================================================================
// Rotation family
//============================================================================

// L = [[0,0],[sqrt(1-t^2), -t]], R = [[t, sqrt(1-t^2)],[0,0]], 0 < t < 1.
inline ComplexMatrix rotation_left(double t) {
  ComplexMatrix l(2, 2);
  l << 0, 0, std::sqrt(1.0 - t * t), -t;
  return l;
}

inline ComplexMatrix rotation_right(double t) {
  ComplexMatrix r(2, 2);
  r << t, std::sqrt(1.0 - t * t), 0, 0;
  return r;
}

// Closed forms for the rotation family on {0..M}:
//   p = [2t sqrt(1-t^2) Re r12 + rho11((k-1)-(k-2)t^2) + rho22 k(1-t^2)]
//       / (M-1-(M-2)t^2)
//   E = 1 + (f(M,M-k)/t^2 + g(M,M-k)) rho11 + (f(M,k)/t^2 + g(M,k)) rho22
//         + ((2M-4k)/t) sqrt(1-t^2) Re r12
// with f(M,k) = k(M-k) - k and g(M,k) = -(k(M-k) - (2k-1)).
inline FirstVisitResult rotation_closed_form(double t, int m, int k,
                                             const DensityMatrix &rho) {
  if (!(t > 0.0 && t < 1.0))
    throw ConfigError("rotation_closed_form: t must lie in (0,1)");
  if (m < 3 || k < 1 || k > m - 1)
    throw ConfigError("rotation_closed_form: need M >= 3, 1 <= k <= M-1");
  if (rho.order() != 2)
    throw ConfigError("rotation_closed_form: density must have order 2");
  const double r11 = rho.mat()(0, 0).real();
  const double r22 = rho.mat()(1, 1).real();
  const double re12 = rho.re_offdiag();
  const double t2 = t * t;
  const double root = std::sqrt(1.0 - t2);

  FirstVisitResult res;
  res.p_reach = (2.0 * t * root * re12 + r11 * ((k - 1) - (k - 2) * t2) +
                 r22 * double(k) * (1.0 - t2)) /
                (double(m - 1) - double(m - 2) * t2);
  res.p_ruin = 1.0 - res.p_reach;

  auto f = [m](int kk) { return double(kk * (m - kk) - kk); };
  auto g = [m](int kk) { return -double(kk * (m - kk) - (2 * kk - 1)); };
  res.expected_time = 1.0 + (f(m - k) / t2 + g(m - k)) * r11 +
                      (f(k) / t2 + g(k)) * r22 +
                      (double(2 * m - 4 * k) / t) * root * re12;
  return res;
}

// The degenerate ends of the rotation family, treated separately since the
// interior is no longer absorbing. At t = 0 the moves are the nilpotent
// E12/E21 pair: absorption can only happen at the first step, and the
// stated expected times are conditional on absorption. Paper-case M = 3.
inline FirstVisitResult degenerate_rotation(double t, int m, int k,
                                            const DensityMatrix &rho) {
  if (m != 3)
    throw ConfigError("degenerate_rotation: only M = 3 is tabulated");
  if (k < 1 || k > 2)
    throw ConfigError("degenerate_rotation: k must be 1 or 2");
  if (rho.order() != 2)
    throw ConfigError("degenerate_rotation: density must have order 2");
  const double r11 = rho.mat()(0, 0).real();
  FirstVisitResult res;
  res.spectral_margin = 0.0;
  if (t == 0.0) {
    res.p_reach = (k == 1) ? 0.0 : 1.0 - r11;
    res.expected_time = 1.0;
  } else if (t == 1.0) {
    res.p_reach = r11;
    res.expected_time = (k == 1) ? 1.0 + r11 : 2.0 - r11;
  } else {
    throw ConfigError("degenerate_rotation: t must be exactly 0 or 1");
  }
  res.p_ruin = 1.0 - res.p_reach;
  return res;
}

// Affine decomposition of a statistic over order-2 densities:
//   value(rho) = c0 + c11 rho11 + cx Re(rho12) + cy Im(rho12),
// with rho22 = 1 - rho11 folded into c0. Used to reproduce the paper-style
// tables without fixing a density, and by the conjecture probe.
struct AffineStat {
  double c0 = 0.0, c11 = 0.0, cx = 0.0, cy = 0.0;

  double at(const DensityMatrix &rho) const {
    return c0 + c11 * rho.mat()(0, 0).real() + cx * rho.mat()(0, 1).real() +
           cy * (-rho.mat()(0, 1).imag());
  }
};

template <typename Fn> AffineStat affine_decompose(Fn &&stat) {
  // Evaluate at I/2 and the three Bloch axis points.
  DensityMatrix center = maximally_mixed(2);
  DensityMatrix zx = DensityMatrix::from_bloch({1, 0, 0});
  DensityMatrix zy = DensityMatrix::from_bloch({0, 1, 0});
  DensityMatrix zz = DensityMatrix::from_bloch({0, 0, 1});
  double vc = stat(center), vx = stat(zx), vy = stat(zy), vz = stat(zz);
  AffineStat a;
  // center: rho11 = 1/2, Re = Im = 0; zz: rho11 = 1.
  a.c11 = 2.0 * (vz - vc);
  a.c0 = vc - 0.5 * a.c11;
  a.cx = 2.0 * (vx - vc);
  a.cy = 2.0 * (vy - vc);
  return a;
}

} // namespace oqwalk

#endif
