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

#ifndef _oqwalk_cli_hpp_
#define _oqwalk_cli_hpp_

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oqwalk/channel.hpp"
#include "oqwalk/combinatorics.hpp"
#include "oqwalk/drift.hpp"
#include "oqwalk/first_visit.hpp"
#include "oqwalk/gf.hpp"
#include "oqwalk/measure.hpp"
#include "oqwalk/walk_spec.hpp"

namespace oqwalk {
namespace cli {

// Exit codes: 0 success, 2 inapplicable route, 3 numerical certification
// failure, 4 configuration error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInapplicable = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitConfig = 4;

inline std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct OutputOptions {
  std::string format = "json"; // json | csv | table
  std::string out_path;        // empty = stdout
};

inline void emit(const json &j, const OutputOptions &opts, std::ostream &os) {
  std::ostream *dst = &os;
  std::ofstream file;
  if (!opts.out_path.empty()) {
    file.open(opts.out_path);
    if (!file)
      throw ConfigError("cannot open output file '" + opts.out_path + "'");
    dst = &file;
  }
  if (opts.format == "json") {
    *dst << j.dump(2) << "\n";
    return;
  }
  // csv / table renderings: arrays of uniform objects become rows,
  // everything else becomes key,value lines.
  auto render_scalar = [](const json &v) -> std::string {
    if (v.is_number_float())
      return fmt12(v.get<double>());
    if (v.is_string())
      return v.get<std::string>();
    return v.dump();
  };
  const char sep = opts.format == "csv" ? ',' : '\t';
  if (j.is_array() && !j.empty() && j.front().is_object()) {
    std::vector<std::string> cols;
    for (auto it = j.front().begin(); it != j.front().end(); ++it)
      cols.push_back(it.key());
    for (std::size_t c = 0; c < cols.size(); ++c)
      *dst << cols[c] << (c + 1 < cols.size() ? sep : '\n');
    for (const auto &row : j) {
      for (std::size_t c = 0; c < cols.size(); ++c)
        *dst << (row.contains(cols[c]) ? render_scalar(row[cols[c]])
                                       : std::string())
             << (c + 1 < cols.size() ? sep : '\n');
    }
    return;
  }
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      *dst << it.key() << sep << render_scalar(it.value()) << "\n";
    return;
  }
  *dst << render_scalar(j) << "\n";
}

//============================================================================
// Route helpers
//============================================================================

inline double block_route(const NearestNeighborRule &rule, int i, int j, int n,
                          const DensityMatrix &rho) {
  int sites = std::max(i, j) + n + 1;
  if (rule.boundary().kind == BoundaryCondition::Kind::absorbing_segment)
    sites = rule.boundary().segment_end + 1;
  auto ch = build_channel(rule, sites);
  return transition_probability(ch, rho, i, j, n);
}

// Path-counting closed forms: diagonal pairs directly, normal pairs after
// the change of coordinates on the density.
inline double count_route(const NearestNeighborRule &rule, int i, int j, int n,
                          const DensityMatrix &rho) {
  if (rule.base_loop())
    throw InapplicableRoute(
        "count route needs a loop-free walk (B = 0 diagonal class)");
  const ComplexMatrix &l = rule.base_left();
  if (is_diagonal(l) && is_diagonal(rule.base_right())) {
    std::vector<double> p;
    for (Eigen::Index k = 0; k < l.rows(); ++k)
      p.push_back(std::norm(l(k, k)));
    return diagonal_walk_probability(p, rho, i, j, n);
  }
  if (is_normal(l) && is_normal(rule.base_right())) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
        ComplexMatrix(l.adjoint() * l));
    ComplexMatrix u = es.eigenvectors();
    std::vector<double> p;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      double lam = es.eigenvalues()(k);
      if (!(lam > 1e-12 && lam < 1.0 - 1e-12))
        throw InapplicableRoute("count route: left moduli not in (0,1)");
      p.push_back(lam);
    }
    ComplexMatrix rho2 = u.adjoint() * rho.mat() * u;
    rho2 = 0.5 * (rho2 + rho2.adjoint());
    return diagonal_walk_probability(p, DensityMatrix(rho2), i, j, n);
  }
  throw InapplicableRoute(
      "count route requires diagonal or normal transition pairs");
}

inline json gambler_result_json(const FirstVisitResult &r,
                                const std::string &route) {
  json j;
  j["p"] = r.p_reach;
  j["E"] = r.expected_time;
  j["p_ruin"] = r.p_ruin;
  j["route"] = route;
  if (std::isfinite(r.spectral_margin))
    j["spectral_margin"] = r.spectral_margin;
  return j;
}

inline json drift_report_json(const DriftReport &rep, bool include_samples) {
  json j;
  j["verdict"] = verdict_name(rep.verdict);
  j["sup_drift_outside_F"] = rep.sup_drift_outside_F;
  j["best_epsilon"] = rep.best_epsilon;
  j["grid"] = rep.grid_description;
  j["exhaustive"] = rep.exhaustive;
  j["notes"] = rep.notes;
  j["violations"] = json::array();
  for (const auto &v : rep.violations)
    j["violations"].push_back(
        {{"site", v.site}, {"density", v.density_index}, {"drift", v.drift}});
  if (include_samples) {
    j["samples"] = json::array();
    for (const auto &s : rep.samples)
      j["samples"].push_back(
          {{"site", s.site}, {"density", s.density_index}, {"drift", s.drift}});
  }
  return j;
}

//============================================================================
// Subcommand implementations
//============================================================================

struct Ctx {
  OutputOptions out;
  std::uint64_t seed = 12345;
  double tol = 1e-8;
};

inline int cmd_prob(const Ctx &ctx, const std::string &spec, int i, int j,
                    int n, const std::string &rho_text,
                    const std::string &route, bool all_routes,
                    std::ostream &os) {
  NearestNeighborRule rule = load_rule(spec);
  DensityMatrix rho = parse_density(rho_text, rule.dim());
  if (all_routes) {
    json routes = json::object();
    routes["block"] = block_route(rule, i, j, n, rho);
    std::map<std::string, std::string> skipped;
    try {
      routes["kmcg"] = km_probability_for_rule(rule, rho, i, j, n);
    } catch (const InapplicableRoute &e) {
      skipped["kmcg"] = e.what();
    }
    try {
      routes["count"] = count_route(rule, i, j, n, rho);
    } catch (const InapplicableRoute &e) {
      skipped["count"] = e.what();
    }
    double lo = 1e300, hi = -1e300;
    for (auto it = routes.begin(); it != routes.end(); ++it) {
      lo = std::min(lo, it.value().get<double>());
      hi = std::max(hi, it.value().get<double>());
    }
    json out;
    out["i"] = i;
    out["j"] = j;
    out["n"] = n;
    out["routes"] = routes;
    out["max_pairwise_diff"] = hi - lo;
    if (!skipped.empty())
      out["inapplicable"] = skipped;
    emit(out, ctx.out, os);
    return (hi - lo) <= ctx.tol ? kExitOk : kExitNumerical;
  }
  double p;
  if (route == "block")
    p = block_route(rule, i, j, n, rho);
  else if (route == "kmcg")
    p = km_probability_for_rule(rule, rho, i, j, n);
  else if (route == "count")
    p = count_route(rule, i, j, n, rho);
  else
    throw ConfigError("prob: unknown route '" + route + "'");
  json out;
  out["i"] = i;
  out["j"] = j;
  out["n"] = n;
  out["probability"] = p;
  out["route"] = route;
  emit(out, ctx.out, os);
  return kExitOk;
}

inline int cmd_kmcg(const Ctx &ctx, const std::string &spec, int i, int j,
                    int n, const std::string &rho_text, std::ostream &os) {
  NearestNeighborRule rule = load_rule(spec);
  DensityMatrix rho = parse_density(rho_text, rule.dim());
  double p = km_probability_for_rule(rule, rho, i, j, n);
  double oracle = block_route(rule, i, j, n, rho);
  json out;
  out["probability"] = p;
  out["oracle"] = oracle;
  out["abs_diff"] = std::abs(p - oracle);
  emit(out, ctx.out, os);
  return std::abs(p - oracle) <= ctx.tol ? kExitOk : kExitNumerical;
}

inline int cmd_count(const Ctx &ctx, int i, int j, int n, bool probability,
                     const std::string &spec, const std::string &rho_text,
                     std::ostream &os) {
  json out;
  out["i"] = i;
  out["j"] = j;
  out["n"] = n;
  out["count"] = count_paths(i, j, n).str();
  if (probability) {
    NearestNeighborRule rule = load_rule(spec);
    DensityMatrix rho = parse_density(rho_text, rule.dim());
    out["probability"] = count_route(rule, i, j, n, rho);
  }
  emit(out, ctx.out, os);
  return kExitOk;
}

inline json hadamard_tables_json() {
  json rows = json::array();
  for (int m = 3; m <= 7; ++m)
    for (int k = 1; k <= m - 1; ++k) {
      auto gf = hadamard_gambler_exact(k, m);
      auto closed = hadamard_closed_form_exact(k, m);
      json row;
      row["M"] = m;
      row["k"] = k;
      row["p_const"] = rational_string(closed.p_reach.constant);
      row["p_coeff"] = rational_string(closed.p_reach.coefficient);
      row["E_const"] = rational_string(closed.expected_time.constant);
      row["E_coeff"] = rational_string(closed.expected_time.coefficient);
      row["gf_p_const"] = rational_string(gf.p_reach.constant);
      row["gf_p_coeff"] = rational_string(gf.p_reach.coefficient);
      row["gf_E_const"] = rational_string(gf.expected_time.constant);
      row["gf_E_coeff"] = rational_string(gf.expected_time.coefficient);
      auto seg = build_segment(hadamard_left(), hadamard_right(), m);
      auto dec = affine_decompose([&](const DensityMatrix &rho) {
        return absorption_stats(seg, rho, k).p_reach;
      });
      auto dece = affine_decompose([&](const DensityMatrix &rho) {
        return absorption_stats(seg, rho, k).expected_time;
      });
      row["resolvent_p_const"] = dec.c0 + 0.5 * dec.c11; // at rho11 = 1/2
      row["resolvent_p_coeff"] = dec.cx;
      row["resolvent_E_const"] = dece.c0 + 0.5 * dece.c11;
      row["resolvent_E_coeff"] = dece.cx;
      rows.push_back(row);
    }
  return rows;
}

inline int cmd_gambler(const Ctx &ctx, const std::string &spec, bool hadamard,
                       double rotation_t, bool has_rotation, int m, int k,
                       const std::string &rho_text, const std::string &route,
                       bool tables, std::ostream &os) {
  if (tables) {
    if (!hadamard)
      throw ConfigError("gambler --tables requires --hadamard");
    emit(hadamard_tables_json(), ctx.out, os);
    return kExitOk;
  }
  DensityMatrix rho = parse_density(rho_text, 2);
  if (route == "gf") {
    if (!hadamard)
      throw InapplicableRoute("gf route requires the Hadamard walk");
    auto stats = hadamard_ruin_stats(k, m, rho);
    FirstVisitResult r;
    r.p_reach = stats.p_reach;
    r.p_ruin = 1.0 - stats.p_reach;
    r.expected_time = stats.expected_time;
    emit(gambler_result_json(r, "generating-function"), ctx.out, os);
    return kExitOk;
  }
  if (route == "closed") {
    if (hadamard) {
      auto stats = hadamard_closed_form(k, m, rho);
      FirstVisitResult r;
      r.p_reach = stats.p_reach;
      r.p_ruin = 1.0 - stats.p_reach;
      r.expected_time = stats.expected_time;
      emit(gambler_result_json(r, "closed-form"), ctx.out, os);
      return kExitOk;
    }
    if (has_rotation) {
      FirstVisitResult r =
          (rotation_t == 0.0 || rotation_t == 1.0)
              ? degenerate_rotation(rotation_t, m, k, rho)
              : rotation_closed_form(rotation_t, m, k, rho);
      emit(gambler_result_json(r, "closed-form"), ctx.out, os);
      return kExitOk;
    }
    throw InapplicableRoute(
        "closed route requires --hadamard or --rotation t");
  }
  if (route != "resolvent")
    throw ConfigError("gambler: unknown route '" + route + "'");
  ComplexMatrix l, r;
  if (hadamard) {
    l = hadamard_left();
    r = hadamard_right();
  } else if (has_rotation) {
    if (rotation_t == 0.0 || rotation_t == 1.0) {
      emit(gambler_result_json(degenerate_rotation(rotation_t, m, k, rho),
                               "degenerate-closed-form"),
           ctx.out, os);
      return kExitOk;
    }
    l = rotation_left(rotation_t);
    r = rotation_right(rotation_t);
  } else if (!spec.empty()) {
    NearestNeighborRule rule = load_rule(spec);
    l = rule.base_left();
    r = rule.base_right();
    if (rule.base_loop())
      throw InapplicableRoute(
          "gambler resolvent route supports loop-free walks only");
  } else {
    throw ConfigError("gambler: provide --spec, --hadamard, or --rotation");
  }
  auto seg = build_segment(l, r, m);
  emit(gambler_result_json(absorption_stats(seg, rho, k), "resolvent"),
       ctx.out, os);
  return kExitOk;
}

inline int cmd_simulate(const Ctx &ctx, const std::string &spec, int i0,
                        const std::string &rho_text, long trials, long horizon,
                        const std::string &targets_text, std::ostream &os) {
  NearestNeighborRule rule = load_rule(spec);
  DensityMatrix rho = parse_density(rho_text, rule.dim());
  json out;
  out["i0"] = i0;
  out["trials"] = trials;
  out["horizon"] = horizon;
  out["seed"] = ctx.seed;

  // Occupation histogram at the horizon (terminal sites keep their spot).
  std::map<int, long> hist;
  long absorbed_off = 0;
  for (long t = 0; t < trials; ++t) {
    auto traj = sample_trajectory(
        rule, rho, i0, static_cast<int>(horizon),
        Rng::stream(ctx.seed, static_cast<std::uint64_t>(t)).next_u64());
    if (traj.absorbed && traj.absorption_site < 0)
      ++absorbed_off;
    else
      ++hist[traj.path.back().site];
  }
  json histogram = json::array();
  for (const auto &[site, count] : hist)
    histogram.push_back({{"site", site},
                         {"count", count},
                         {"frequency", double(count) / double(trials)}});
  out["histogram"] = histogram;
  out["absorbed_off_lattice"] = absorbed_off;

  if (!targets_text.empty()) {
    std::set<int> targets;
    std::istringstream ss(targets_text);
    std::string tok;
    while (std::getline(ss, tok, ','))
      targets.insert(std::stoi(tok));
    auto est = monte_carlo_hitting(rule, rho, i0, targets, trials, ctx.seed,
                                   std::max<long>(horizon, 1));
    out["hitting"] = {{"targets", targets_text},
                      {"probability", est.probability},
                      {"probability_stderr", est.probability_stderr},
                      {"mean_time", est.mean_time},
                      {"mean_time_stderr", est.mean_time_stderr},
                      {"censored", est.censored}};
  }
  emit(out, ctx.out, os);
  return kExitOk;
}

inline int cmd_drift(const Ctx &ctx, const std::string &spec,
                     const std::string &h_name, const std::string &f_range,
                     double epsilon, int grid_points,
                     const std::string &check, int window_hi,
                     const std::string &grid_kind, std::ostream &os) {
  NearestNeighborRule rule = load_rule(spec);
  std::function<double(int)> h;
  if (h_name == "linear") {
    h = [](int i) { return double(i); };
  } else if (h_name == "quadratic") {
    h = [](int i) { return double(i) * double(i); };
  } else if (h_name.find(',') != std::string::npos) {
    // Inline table "h0,h1,h2,..."; extended linearly beyond the last entry.
    std::vector<double> table;
    std::istringstream ss(h_name);
    std::string tok;
    while (std::getline(ss, tok, ','))
      table.push_back(std::stod(tok));
    if (table.size() < 2)
      throw ConfigError("drift: inline h table needs at least two entries");
    h = [table](int i) {
      if (i < 0)
        throw ConfigError("drift: negative site");
      auto idx = static_cast<std::size_t>(i);
      if (idx < table.size())
        return table[idx];
      double slope = table[table.size() - 1] - table[table.size() - 2];
      return table.back() + slope * double(idx + 1 - table.size());
    };
  } else {
    throw ConfigError("drift: --h must be linear, quadratic, or an inline "
                      "comma-separated table");
  }

  std::set<int> F;
  {
    auto dots = f_range.find("..");
    if (dots == std::string::npos) {
      F.insert(std::stoi(f_range));
    } else {
      int lo = std::stoi(f_range.substr(0, dots));
      int hi = std::stoi(f_range.substr(dots + 2));
      for (int i = lo; i <= hi; ++i)
        F.insert(i);
    }
  }
  std::vector<int> window;
  for (int i = 0; i <= window_hi; ++i)
    window.push_back(i);

  DensityGrid grid;
  if (grid_kind == "orbit") {
    if (rule.dim() != 2)
      throw ConfigError("drift: orbit grids support order-2 walks only");
    grid = orbit_grid(rule, density_e11(), grid_points);
  } else if (grid_kind == "bloch" && rule.dim() == 2) {
    grid = bloch_grid(grid_points);
  } else {
    grid = random_density_grid(rule.dim(), grid_points, ctx.seed);
  }
  json out;
  if (check == "foster") {
    LyapunovSpec lspec{h, F, epsilon};
    out = drift_report_json(foster_check(rule, lspec, window, grid), false);
  } else if (check == "pakes") {
    out = drift_report_json(pakes_check(rule, window, grid, epsilon), false);
  } else if (check == "lamperti") {
    auto rep = lamperti_check(rule, window, grid, epsilon);
    out = drift_report_json(rep.base, false);
    if (rep.j0)
      out["j0"] = *rep.j0;
  } else {
    throw ConfigError("drift: --check must be foster, pakes, or lamperti");
  }
  emit(out, ctx.out, os);
  return kExitOk;
}

//============================================================================
// Entry point
//============================================================================

inline int run(std::vector<std::string> args, std::ostream &os,
               std::ostream &es) {
  CLI::App app{"open quantum walk toolkit"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand

  Ctx ctx;
  app.add_option("--format", ctx.out.format, "json | csv | table")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  app.add_option("--seed", ctx.seed, "RNG seed (64-bit)");
  app.add_option("--tol", ctx.tol, "route agreement tolerance");
  app.add_option("--out", ctx.out.out_path, "write output to a file");

  // prob
  auto *prob = app.add_subcommand("prob", "n-step transition probability");
  std::string p_spec, p_rho = "mixed", p_route = "block";
  int p_i = 0, p_j = 0, p_n = 0;
  bool p_all = false;
  prob->add_option("--spec", p_spec)->required();
  prob->add_option("--i", p_i)->required();
  prob->add_option("--j", p_j)->required();
  prob->add_option("--n", p_n)->required();
  prob->add_option("--rho", p_rho);
  prob->add_option("--route", p_route)
      ->check(CLI::IsMember({"block", "kmcg", "count"}));
  prob->add_flag("--all-routes", p_all);

  // kmcg
  auto *kmcg = app.add_subcommand("kmcg", "spectral-formula probability "
                                          "with block-power oracle");
  std::string k_spec, k_rho = "mixed";
  int k_i = 0, k_j = 0, k_n = 0;
  kmcg->add_option("--spec", k_spec)->required();
  kmcg->add_option("--i", k_i)->required();
  kmcg->add_option("--j", k_j)->required();
  kmcg->add_option("--n", k_n)->required();
  kmcg->add_option("--rho", k_rho);

  // count
  auto *count = app.add_subcommand("count", "half-line path counts");
  int c_i = 0, c_j = 0, c_n = 0;
  bool c_prob = false;
  std::string c_spec, c_rho = "mixed";
  count->add_option("--i", c_i)->required();
  count->add_option("--j", c_j)->required();
  count->add_option("--n", c_n)->required();
  count->add_flag("--probability", c_prob);
  count->add_option("--spec", c_spec);
  count->add_option("--rho", c_rho);

  // gambler
  auto *gam = app.add_subcommand("gambler", "absorption statistics on a "
                                            "segment");
  std::string g_spec, g_rho = "mixed", g_route = "resolvent";
  bool g_hadamard = false, g_tables = false;
  double g_t = -1.0;
  int g_m = 3, g_k = 1;
  gam->add_option("--spec", g_spec);
  gam->add_flag("--hadamard", g_hadamard);
  auto *g_t_opt = gam->add_option("--rotation", g_t, "rotation family t");
  gam->add_option("--M", g_m);
  gam->add_option("--k", g_k);
  gam->add_option("--rho", g_rho);
  gam->add_option("--route", g_route)
      ->check(CLI::IsMember({"resolvent", "gf", "closed"}));
  gam->add_flag("--tables", g_tables);

  // simulate
  auto *sim = app.add_subcommand("simulate", "quantum trajectory sampling");
  std::string s_spec, s_rho = "mixed", s_targets;
  int s_i0 = 0;
  long s_trials = 10000, s_horizon = 100;
  sim->add_option("--spec", s_spec)->required();
  sim->add_option("--i0", s_i0)->required();
  sim->add_option("--rho", s_rho);
  sim->add_option("--trials", s_trials);
  sim->add_option("--horizon", s_horizon);
  sim->add_option("--targets", s_targets, "comma-separated site list");

  // drift
  auto *dri = app.add_subcommand("drift", "positive-recurrence checks");
  std::string d_spec, d_h = "linear", d_f = "0..0", d_check = "foster";
  std::string d_grid_kind = "bloch";
  double d_eps = 1e-6;
  int d_grid = 64, d_window = 12;
  // frees the short -h so the Lyapunov flag can be spelled --h
  dri->set_help_flag("--help", "print help");
  dri->add_option("--spec", d_spec)->required();
  dri->add_option("--h", d_h);
  dri->add_option("--F", d_f, "finite set as lo..hi");
  dri->add_option("--epsilon", d_eps);
  dri->add_option("--grid", d_grid, "density sample count");
  dri->add_option("--grid-kind", d_grid_kind, "bloch | orbit | wishart")
      ->check(CLI::IsMember({"bloch", "orbit", "wishart"}));
  dri->add_option("--check", d_check, "foster | pakes | lamperti");
  dri->add_option("--window", d_window, "probe sites 0..window");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp &e) {
    os << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    es << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (prob->parsed())
      return cmd_prob(ctx, p_spec, p_i, p_j, p_n, p_rho, p_route, p_all, os);
    if (kmcg->parsed())
      return cmd_kmcg(ctx, k_spec, k_i, k_j, k_n, k_rho, os);
    if (count->parsed())
      return cmd_count(ctx, c_i, c_j, c_n, c_prob, c_spec, c_rho, os);
    if (gam->parsed())
      return cmd_gambler(ctx, g_spec, g_hadamard, g_t, g_t_opt->count() > 0,
                         g_m, g_k, g_rho, g_route, g_tables, os);
    if (sim->parsed())
      return cmd_simulate(ctx, s_spec, s_i0, s_rho, s_trials, s_horizon,
                          s_targets, os);
    if (dri->parsed())
      return cmd_drift(ctx, d_spec, d_h, d_f, d_eps, d_grid, d_check,
                       d_window, d_grid_kind, os);
    es << "error: no subcommand\n";
    return kExitConfig;
  } catch (const InapplicableRoute &e) {
    es << "inapplicable route: " << e.what() << "\n";
    return kExitInapplicable;
  } catch (const NumericalFailure &e) {
    es << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ConfigError &e) {
    es << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error &e) {
    es << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception &e) {
    es << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

} // namespace cli
} // namespace oqwalk

#endif
