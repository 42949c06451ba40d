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

#ifndef _oqwalk_channel_hpp_
#define _oqwalk_channel_hpp_

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <thread>
#include <utility>
#include <vector>

#include "oqwalk/core.hpp"
#include "oqwalk/rng.hpp"

namespace oqwalk {

//============================================================================
// Boundary conditions and nearest-neighbor rules
//============================================================================

struct ReflectingBoundary {
  ComplexMatrix b00; // loop at site 0
  ComplexMatrix b01; // move 0 -> 1
};

// Site 0 behavior of a half-line walk.
//  - absorbing: the left move out of site 0 is deleted; the first block row
//    becomes sub-stochastic and the missing mass counts as absorbed.
//  - reflecting: explicit (B00, B01) with B00*B00 + B01*B01 = I.
//  - absorbing_segment(M): identity loops at both 0 and M; the walk lives
//    on the segment {0..M} and boundary mass never leaves (gambler's ruin).
struct BoundaryCondition {
  enum class Kind { absorbing, reflecting, absorbing_segment };

  Kind kind = Kind::absorbing;
  std::optional<ReflectingBoundary> reflect;
  int segment_end = -1;

  static BoundaryCondition absorbing() { return {}; }

  static BoundaryCondition reflecting(ComplexMatrix b00, ComplexMatrix b01) {
    BoundaryCondition b;
    b.kind = Kind::reflecting;
    b.reflect = ReflectingBoundary{std::move(b00), std::move(b01)};
    return b;
  }

  static BoundaryCondition segment(int m) {
    if (m < 1)
      throw ConfigError("segment boundary: M must be >= 1");
    BoundaryCondition b;
    b.kind = Kind::absorbing_segment;
    b.segment_end = m;
    return b;
  }
};

// Per-site override of the transition triple.
struct SiteTriple {
  std::optional<ComplexMatrix> left, loop, right;
};

// Moves available at one site: destination plus the transition matrix.
struct Move {
  int destination;
  ComplexMatrix op;
};

// The data defining a nearest-neighbor OQW on the half-line: move matrices
// L (left), R (right), optional lazy loop B, a boundary condition at 0 and
// sparse per-site overrides. Immutable after construction; the constructor
// verifies the probability rule L*L + R*R (+ B*B) = I at every site.
class NearestNeighborRule {
public:
  NearestNeighborRule(ComplexMatrix left, ComplexMatrix right,
                      std::optional<ComplexMatrix> loop = std::nullopt,
                      BoundaryCondition boundary = BoundaryCondition::absorbing(),
                      std::map<int, SiteTriple> overrides = {})
      : left_(std::move(left)), right_(std::move(right)),
        loop_(std::move(loop)), boundary_(std::move(boundary)),
        overrides_(std::move(overrides)) {
    dim_ = static_cast<int>(left_.rows());
    if (left_.rows() != left_.cols() || right_.rows() != right_.cols() ||
        left_.rows() != right_.rows())
      throw ConfigError("rule: L and R must be square of equal order");
    if (loop_ && (loop_->rows() != dim_ || loop_->cols() != dim_))
      throw ConfigError("rule: loop matrix order mismatch");
    check_normalized(left_, right_, loop_, "base rule");
    for (const auto &[site, triple] : overrides_) {
      if (site < 0)
        throw ConfigError("rule: override site must be >= 0");
      check_normalized(triple.left ? *triple.left : left_,
                       triple.right ? *triple.right : right_,
                       triple.loop ? *triple.loop
                                   : (loop_ ? loop_ : std::optional<ComplexMatrix>{}),
                       "override at site " + std::to_string(site));
    }
    if (boundary_.kind == BoundaryCondition::Kind::reflecting) {
      const auto &rb = *boundary_.reflect;
      auto chk = check_kraus_normalization({rb.b00, rb.b01});
      if (!chk.ok)
        throw ConfigError("reflecting boundary: B00*B00 + B01*B01 != I "
                          "(residual " + std::to_string(chk.residual) + ")");
    }
    if (boundary_.kind == BoundaryCondition::Kind::absorbing) {
      // Sub-stochastic block row at 0: I - sum of outgoing effects is PSD.
      ComplexMatrix acc = right_at(0).adjoint() * right_at(0);
      if (auto b = loop_at(0))
        acc += b->adjoint() * (*b);
      if (min_hermitian_eigenvalue(ComplexMatrix::Identity(dim_, dim_) - acc) <
          -kDefaultTol)
        throw ConfigError("absorbing boundary: outgoing effects at 0 exceed I");
    }
  }

  int dim() const { return dim_; }
  const BoundaryCondition &boundary() const { return boundary_; }
  const ComplexMatrix &base_left() const { return left_; }
  const ComplexMatrix &base_right() const { return right_; }
  const std::optional<ComplexMatrix> &base_loop() const { return loop_; }

  ComplexMatrix left_at(int site) const {
    auto it = overrides_.find(site);
    if (it != overrides_.end() && it->second.left)
      return *it->second.left;
    return left_;
  }

  ComplexMatrix right_at(int site) const {
    auto it = overrides_.find(site);
    if (it != overrides_.end() && it->second.right)
      return *it->second.right;
    return right_;
  }

  std::optional<ComplexMatrix> loop_at(int site) const {
    auto it = overrides_.find(site);
    if (it != overrides_.end() && it->second.loop)
      return *it->second.loop;
    return loop_;
  }

  // Moves leaving `site`, after boundary handling. Under the plain
  // absorbing boundary the left move at 0 is deleted (its mass is the
  // absorbed mass); on a segment, sites 0 and M hold identity loops.
  std::vector<Move> moves_at(int site) const {
    using K = BoundaryCondition::Kind;
    std::vector<Move> out;
    if (boundary_.kind == K::absorbing_segment &&
        (site == 0 || site == boundary_.segment_end)) {
      out.push_back({site, ComplexMatrix::Identity(dim_, dim_)});
      return out;
    }
    if (site == 0) {
      if (boundary_.kind == K::reflecting) {
        out.push_back({0, boundary_.reflect->b00});
        out.push_back({1, boundary_.reflect->b01});
        return out;
      }
      // absorbing: keep loop and right move only
      if (auto b = loop_at(0))
        out.push_back({0, *b});
      out.push_back({1, right_at(0)});
      return out;
    }
    out.push_back({site - 1, left_at(site)});
    if (auto b = loop_at(site))
      out.push_back({site, *b});
    out.push_back({site + 1, right_at(site)});
    return out;
  }

  // True when a site is a terminal state of the dynamics (segment ends).
  bool is_terminal(int site) const {
    return boundary_.kind == BoundaryCondition::Kind::absorbing_segment &&
           (site == 0 || site == boundary_.segment_end);
  }

private:
  static void check_normalized(const ComplexMatrix &l, const ComplexMatrix &r,
                               const std::optional<ComplexMatrix> &b,
                               const std::string &what) {
    std::vector<ComplexMatrix> mats{l, r};
    if (b)
      mats.push_back(*b);
    auto chk = check_kraus_normalization(mats);
    if (!chk.ok)
      throw ConfigError("rule normalization violated (" + what +
                        "): residual " + std::to_string(chk.residual));
  }

  ComplexMatrix left_, right_;
  std::optional<ComplexMatrix> loop_;
  BoundaryCondition boundary_;
  std::map<int, SiteTriple> overrides_;
  int dim_ = 0;
};

//============================================================================
// Finite block-tridiagonal truncation
//============================================================================

// Finite truncation of the block matrix whose (i,j) block is the
// conjugation representation [B_i^j] (order N^2), nonzero only
// for |i-j| <= 1.
struct BlockTridiagonalChannel {
  int sites = 0;
  int dim = 0; // internal dimension N; blocks have order N^2
  // True when the truncation cut off a rightward move at sites-1, so a
  // state reaching that edge would evolve incorrectly. Segments are
  // self-contained and keep this false.
  bool edge_open = false;
  std::map<std::pair<int, int>, ComplexMatrix> blocks;

  const ComplexMatrix *block(int i, int j) const {
    auto it = blocks.find({i, j});
    return it == blocks.end() ? nullptr : &it->second;
  }

  ComplexMatrix block_or_zero(int i, int j) const {
    if (const auto *b = block(i, j))
      return *b;
    return ComplexMatrix::Zero(dim * dim, dim * dim);
  }
};

inline BlockTridiagonalChannel build_channel(const NearestNeighborRule &rule,
                                             int sites) {
  if (sites < 2)
    throw ConfigError("build_channel: need at least 2 sites");
  if (rule.boundary().kind == BoundaryCondition::Kind::absorbing_segment &&
      sites < rule.boundary().segment_end + 1)
    throw ConfigError("build_channel: truncation smaller than segment");
  BlockTridiagonalChannel ch;
  ch.sites = sites;
  ch.dim = rule.dim();
  for (int i = 0; i < sites; ++i)
    for (const auto &mv : rule.moves_at(i)) {
      if (mv.destination >= sites) {
        ch.edge_open = true; // truncation cut off this move
        continue;
      }
      auto key = std::make_pair(i, mv.destination);
      ComplexMatrix rep = conj_rep(mv.op);
      auto [it, inserted] = ch.blocks.emplace(key, rep);
      if (!inserted)
        it->second += rep;
    }
  return ch;
}

//============================================================================
// Exact evolution
//============================================================================

// A state on the lattice: unnormalized PSD blocks per occupied site.
// `absorbed` accumulates mass lost through the absorbing edge at 0.
struct LatticeState {
  std::map<int, ComplexMatrix> entries;
  double absorbed = 0.0;

  double total_trace() const {
    double t = 0.0;
    for (const auto &[site, m] : entries)
      t += m.trace().real();
    return t;
  }
};

inline LatticeState make_site_state(const DensityMatrix &rho, int site) {
  LatticeState s;
  s.entries[site] = rho.mat();
  return s;
}

// One application of the channel: rho'_k = sum_i B_i^k rho_i B_i^k*.
// The representation never creates off-site blocks, so the per-site map
// is the complete description of the evolved state.
inline LatticeState step(const BlockTridiagonalChannel &ch,
                         const LatticeState &state) {
  const int n = ch.dim;
  for (const auto &[site, m] : state.entries) {
    if (site < 0 || site >= ch.sites)
      throw ConfigError("step: state outside truncation");
    if (ch.edge_open && site == ch.sites - 1 && max_abs(m) > 1e-15)
      throw NumericalFailure("step: support reached the truncation edge; "
                             "rebuild with a larger truncation");
  }
  LatticeState out;
  out.absorbed = state.absorbed;
  double before = state.total_trace();
  for (const auto &[site, m] : state.entries) {
    ComplexVector v = vec(m);
    for (int k = std::max(0, site - 1); k <= site + 1 && k < ch.sites; ++k) {
      if (const auto *b = ch.block(site, k)) {
        ComplexMatrix contrib = unvec((*b) * v, n, n);
        auto it = out.entries.find(k);
        if (it == out.entries.end())
          out.entries[k] = contrib;
        else
          it->second += contrib;
      }
    }
  }
  double after = out.total_trace();
  out.absorbed += std::max(0.0, before - after);
  return out;
}

// Effective n-step block for the transition i -> j: the sum over all
// length-n site paths of the composed conjugation representations, applied
// in chronological order. For the diagonal and commuting examples this is
// exactly the (i,j) block of the n-th block-matrix power.
inline ComplexMatrix block_power_entry(const BlockTridiagonalChannel &ch,
                                       int i, int j, int n) {
  if (i < 0 || j < 0 || n < 0)
    throw ConfigError("block_power_entry: negative argument");
  if (ch.edge_open && ch.sites < std::max(i, j) + n + 1)
    throw ConfigError("block_power_entry: truncation too small; need " +
                      std::to_string(std::max(i, j) + n + 1) + " sites");
  const int n2 = ch.dim * ch.dim;
  std::map<int, ComplexMatrix> cur;
  cur[i] = ComplexMatrix::Identity(n2, n2);
  for (int t = 0; t < n; ++t) {
    std::map<int, ComplexMatrix> nxt;
    for (const auto &[site, acc] : cur)
      for (int k = std::max(0, site - 1); k <= site + 1 && k < ch.sites; ++k)
        if (const auto *b = ch.block(site, k)) {
          auto it = nxt.find(k);
          if (it == nxt.end())
            nxt[k] = (*b) * acc;
          else
            it->second += (*b) * acc;
        }
    cur = std::move(nxt);
  }
  auto it = cur.find(j);
  if (it == cur.end())
    return ComplexMatrix::Zero(n2, n2);
  return it->second;
}

// p_rho(i -n-> j) = Tr(unvec((P^n)_ij vec(rho))).
inline double transition_probability(const BlockTridiagonalChannel &ch,
                                     const DensityMatrix &rho, int i, int j,
                                     int n) {
  ComplexMatrix blk = block_power_entry(ch, i, j, n);
  double p = unvec(blk * vec(rho.mat()), ch.dim, ch.dim).trace().real();
  if (p < -kDefaultTol || p > 1.0 + kDefaultTol)
    throw NumericalFailure("transition_probability outside [0,1]: " +
                           std::to_string(p));
  return std::min(1.0, std::max(0.0, p));
}

//============================================================================
// Quantum trajectories
//============================================================================

struct TrajectoryPoint {
  int site;
  ComplexMatrix density; // normalized
};

struct Trajectory {
  std::vector<TrajectoryPoint> path; // includes the initial point
  bool absorbed = false;             // left through the edge / hit a terminal
  int absorption_site = -1;          // -1 means absorbed off the half-line
};

// Branch probabilities below this are treated as exactly zero so that
// renormalization never divides by numerical noise.
inline constexpr double kBranchFloor = 1e-14;

inline Trajectory sample_trajectory(const NearestNeighborRule &rule,
                                    const DensityMatrix &rho0, int i0,
                                    int horizon, std::uint64_t seed) {
  Rng rng(seed);
  Trajectory traj;
  int site = i0;
  ComplexMatrix rho = rho0.mat();
  traj.path.push_back({site, rho});
  for (int t = 0; t < horizon; ++t) {
    if (rule.is_terminal(site)) {
      traj.absorbed = true;
      traj.absorption_site = site;
      return traj;
    }
    auto moves = rule.moves_at(site);
    std::vector<double> probs;
    double total = 0.0;
    for (const auto &mv : moves) {
      double p = (mv.op * rho * mv.op.adjoint()).trace().real();
      p = p < kBranchFloor ? 0.0 : p;
      probs.push_back(p);
      total += p;
    }
    if (total < kBranchFloor)
      throw NumericalFailure("sample_trajectory: numerically dead state");
    double u = rng.next_double(); // in [0,1); deficit from 1 = absorption
    std::size_t pick = probs.size();
    double acc = 0.0;
    for (std::size_t m = 0; m < probs.size(); ++m) {
      acc += probs[m];
      if (u < acc) {
        pick = m;
        break;
      }
    }
    if (pick == probs.size()) {
      // Sub-stochastic row: the remaining mass leaves the half-line.
      traj.absorbed = true;
      traj.absorption_site = -1;
      return traj;
    }
    rho = (moves[pick].op * rho * moves[pick].op.adjoint()) / probs[pick];
    site = moves[pick].destination;
    traj.path.push_back({site, rho});
  }
  return traj;
}

//============================================================================
// Monte-Carlo hitting estimation
//============================================================================

struct HittingEstimate {
  double probability = 0.0;
  double probability_stderr = 0.0;
  double mean_time = 0.0; // conditional on hitting
  double mean_time_stderr = 0.0;
  long trials = 0;
  long hits = 0;
  long censored = 0; // step cap reached without resolution
};

inline constexpr long kDefaultStepCap = 1000000;

// Frequency of ever hitting `targets` and the conditional mean hitting
// time. Trial t draws from the substream (seed, t), so results do not
// depend on how trials are scheduled across threads.
inline HittingEstimate
monte_carlo_hitting(const NearestNeighborRule &rule, const DensityMatrix &rho0,
                    int i0, const std::set<int> &targets, long trials,
                    std::uint64_t seed, long step_cap = kDefaultStepCap) {
  if (trials < 1)
    throw ConfigError("monte_carlo_hitting: trials must be >= 1");
  if (targets.empty())
    throw ConfigError("monte_carlo_hitting: empty target set");
  if (targets.count(i0)) {
    // p_rho(i -> A) = 1 if i is already in A, with hitting time 0.
    HittingEstimate e;
    e.probability = 1.0;
    e.mean_time = 0.0;
    e.trials = trials;
    e.hits = trials;
    return e;
  }

  struct Outcome {
    std::int8_t kind; // 0 miss, 1 hit, 2 censored
    long time;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(trials));

  auto run_range = [&](long lo, long hi) {
    for (long t = lo; t < hi; ++t) {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
      int site = i0;
      ComplexMatrix rho = rho0.mat();
      Outcome out{2, step_cap};
      for (long s = 0; s < step_cap; ++s) {
        if (rule.is_terminal(site)) {
          out = {0, s};
          break;
        }
        auto moves = rule.moves_at(site);
        double total = 0.0;
        std::vector<double> probs(moves.size());
        for (std::size_t m = 0; m < moves.size(); ++m) {
          double p = (moves[m].op * rho * moves[m].op.adjoint()).trace().real();
          probs[m] = p < kBranchFloor ? 0.0 : p;
          total += probs[m];
        }
        double u = rng.next_double();
        std::size_t pick = probs.size();
        double acc = 0.0;
        for (std::size_t m = 0; m < probs.size(); ++m) {
          acc += probs[m];
          if (u < acc) {
            pick = m;
            break;
          }
        }
        if (pick == probs.size()) {
          out = {0, s + 1}; // absorbed off the lattice: a definite miss
          break;
        }
        rho = (moves[pick].op * rho * moves[pick].op.adjoint()) / probs[pick];
        site = moves[pick].destination;
        if (targets.count(site)) {
          out = {1, s + 1};
          break;
        }
      }
      outcomes[static_cast<std::size_t>(t)] = out;
    }
  };

  unsigned workers = std::thread::hardware_concurrency();
  if (workers < 2 || trials < 4096) {
    run_range(0, trials);
  } else {
    workers = std::min<unsigned>(workers, 8);
    std::vector<std::thread> pool;
    long chunk = (trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      long lo = w * chunk, hi = std::min<long>(trials, lo + chunk);
      if (lo >= hi)
        break;
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto &th : pool)
      th.join();
  }

  HittingEstimate e;
  e.trials = trials;
  double time_sum = 0.0, time_sq = 0.0;
  for (const auto &o : outcomes) {
    if (o.kind == 1) {
      ++e.hits;
      time_sum += double(o.time);
      time_sq += double(o.time) * double(o.time);
    } else if (o.kind == 2) {
      ++e.censored;
    }
  }
  double n = double(trials);
  e.probability = double(e.hits) / n;
  e.probability_stderr =
      std::sqrt(std::max(0.0, e.probability * (1.0 - e.probability) / n));
  if (e.hits > 0) {
    e.mean_time = time_sum / double(e.hits);
    if (e.hits > 1) {
      double var = (time_sq - time_sum * time_sum / double(e.hits)) /
                   double(e.hits - 1);
      e.mean_time_stderr = std::sqrt(std::max(0.0, var) / double(e.hits));
    }
  }
  return e;
}

// Convenience constructors for walks used throughout: the split of the
// Hadamard coin, with R upper row and L lower row.
inline ComplexMatrix hadamard_left() {
  ComplexMatrix l(2, 2);
  double s = 1.0 / std::sqrt(2.0);
  l << 0, 0, s, -s;
  return l;
}

inline ComplexMatrix hadamard_right() {
  ComplexMatrix r(2, 2);
  double s = 1.0 / std::sqrt(2.0);
  r << s, s, 0, 0;
  return r;
}

} // namespace oqwalk

#endif
