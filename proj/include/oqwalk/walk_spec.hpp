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

#ifndef _oqwalk_walk_spec_hpp_
#define _oqwalk_walk_spec_hpp_

#include <fstream>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "oqwalk/channel.hpp"
#include "oqwalk/core.hpp"
#include "oqwalk/drift.hpp"
#include "oqwalk/first_visit.hpp"

namespace oqwalk {

using nlohmann::json;

// Walk specification JSON:
//   {"N":2, "L":{...}, "R":{...}, "B":{...}?, "boundary":"absorbing" |
//    {"segment":M} | "reflecting" | {"reflecting":{"B00":{...},"B01":{...}}},
//    "overrides":[{"site":s, "L":{...}?, "B":{...}?, "R":{...}?}, ...]?}
// Matrices use {"rows","cols","re","im"} with row-major entries. Parsing is
// strict: unknown keys are errors, never silently ignored.
inline NearestNeighborRule parse_walk_spec(const json &j) {
  if (!j.is_object())
    throw ConfigError("walk spec: expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string &k = it.key();
    if (k != "N" && k != "L" && k != "R" && k != "B" && k != "boundary" &&
        k != "overrides")
      throw ConfigError("walk spec: unknown key '" + k + "'");
  }
  if (!j.contains("N") || !j.contains("L") || !j.contains("R"))
    throw ConfigError("walk spec: required keys are N, L, R");
  const int n = j["N"].get<int>();
  ComplexMatrix l = matrix_from_json(j["L"]);
  ComplexMatrix r = matrix_from_json(j["R"]);
  if (l.rows() != n || r.rows() != n)
    throw ConfigError("walk spec: matrix order does not match N");
  std::optional<ComplexMatrix> loop;
  if (j.contains("B"))
    loop = matrix_from_json(j["B"]);

  BoundaryCondition boundary = BoundaryCondition::absorbing();
  if (j.contains("boundary")) {
    const auto &b = j["boundary"];
    if (b.is_string()) {
      std::string name = b.get<std::string>();
      if (name == "absorbing") {
        boundary = BoundaryCondition::absorbing();
      } else if (name == "reflecting") {
        // Default reflecting wall: bounce in place with the base L.
        boundary = BoundaryCondition::reflecting(l, r);
      } else {
        throw ConfigError("walk spec: unknown boundary '" + name + "'");
      }
    } else if (b.is_object()) {
      if (b.contains("segment")) {
        if (b.size() != 1)
          throw ConfigError("walk spec: boundary object has extra keys");
        boundary = BoundaryCondition::segment(b["segment"].get<int>());
      } else if (b.contains("reflecting")) {
        if (b.size() != 1)
          throw ConfigError("walk spec: boundary object has extra keys");
        const auto &rb = b["reflecting"];
        if (!rb.is_object() || !rb.contains("B00") || !rb.contains("B01") ||
            rb.size() != 2)
          throw ConfigError(
              "walk spec: reflecting boundary needs exactly B00 and B01");
        boundary = BoundaryCondition::reflecting(matrix_from_json(rb["B00"]),
                                                 matrix_from_json(rb["B01"]));
      } else {
        throw ConfigError("walk spec: unrecognized boundary object");
      }
    } else {
      throw ConfigError("walk spec: boundary must be a string or object");
    }
  }

  std::map<int, SiteTriple> overrides;
  if (j.contains("overrides")) {
    if (!j["overrides"].is_array())
      throw ConfigError("walk spec: overrides must be an array");
    for (const auto &o : j["overrides"]) {
      if (!o.is_object() || !o.contains("site"))
        throw ConfigError("walk spec: override needs a site");
      for (auto it = o.begin(); it != o.end(); ++it) {
        const std::string &k = it.key();
        if (k != "site" && k != "L" && k != "B" && k != "R")
          throw ConfigError("walk spec: unknown override key '" + k + "'");
      }
      SiteTriple t;
      if (o.contains("L"))
        t.left = matrix_from_json(o["L"]);
      if (o.contains("B"))
        t.loop = matrix_from_json(o["B"]);
      if (o.contains("R"))
        t.right = matrix_from_json(o["R"]);
      overrides[o["site"].get<int>()] = std::move(t);
    }
  }
  return NearestNeighborRule(l, r, loop, boundary, std::move(overrides));
}

inline json walk_spec_to_json(const NearestNeighborRule &rule) {
  json j;
  j["N"] = rule.dim();
  j["L"] = matrix_to_json<json>(rule.base_left());
  j["R"] = matrix_to_json<json>(rule.base_right());
  if (rule.base_loop())
    j["B"] = matrix_to_json<json>(*rule.base_loop());
  switch (rule.boundary().kind) {
  case BoundaryCondition::Kind::absorbing:
    j["boundary"] = "absorbing";
    break;
  case BoundaryCondition::Kind::absorbing_segment:
    j["boundary"] = json{{"segment", rule.boundary().segment_end}};
    break;
  case BoundaryCondition::Kind::reflecting:
    j["boundary"] =
        json{{"reflecting",
              json{{"B00", matrix_to_json<json>(rule.boundary().reflect->b00)},
                   {"B01", matrix_to_json<json>(rule.boundary().reflect->b01)}}}};
    break;
  }
  return j;
}

//============================================================================
// Built-in walks
//============================================================================

inline ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// L = R = I/sqrt(2): the symmetric diagonal walk.
inline NearestNeighborRule ccase1_rule(
    BoundaryCondition b = BoundaryCondition::absorbing()) {
  double s = 1.0 / std::sqrt(2.0);
  return NearestNeighborRule(diag2(s, s), diag2(s, s), std::nullopt, b);
}

// L = diag(1/sqrt3, 1/sqrt3), R = diag(sqrt2/sqrt3, sqrt2/sqrt3).
inline NearestNeighborRule ccase2_rule(
    BoundaryCondition b = BoundaryCondition::absorbing()) {
  double l = 1.0 / std::sqrt(3.0), r = std::sqrt(2.0) / std::sqrt(3.0);
  return NearestNeighborRule(diag2(l, l), diag2(r, r), std::nullopt, b);
}

// L = diag(1/sqrt3, 1/sqrt2), R = diag(sqrt2/sqrt3, 1/sqrt2).
inline NearestNeighborRule ccase3_rule(
    BoundaryCondition b = BoundaryCondition::absorbing()) {
  return NearestNeighborRule(
      diag2(1.0 / std::sqrt(3.0), 1.0 / std::sqrt(2.0)),
      diag2(std::sqrt(2.0) / std::sqrt(3.0), 1.0 / std::sqrt(2.0)),
      std::nullopt, b);
}

// Split of the Hadamard coin.
inline NearestNeighborRule hadamard_rule(
    BoundaryCondition b = BoundaryCondition::absorbing()) {
  return NearestNeighborRule(hadamard_left(), hadamard_right(), std::nullopt,
                             b);
}

// Lazy symmetric walk: L = R = sqrt((1-b^2)/2) I, loop = b sigma_x, whose
// representations are A = ((1-b^2)/2) I_4 and the antidiagonal B = b^2 J.
inline NearestNeighborRule lazy_duran_rule(
    double b, BoundaryCondition bc = BoundaryCondition::absorbing()) {
  if (!(b > -1.0 && b < 1.0))
    throw ConfigError("lazy_duran_rule: b must lie in (-1,1)");
  double a = std::sqrt((1.0 - b * b) / 2.0);
  ComplexMatrix loop(2, 2);
  loop << 0, b, b, 0;
  return NearestNeighborRule(diag2(a, a), diag2(a, a), loop, bc);
}

// The non-commuting recurrent pair L = (1/sqrt3)[[1,1],[0,1]],
// R = (1/sqrt3)[[1,0],[-1,1]].
inline NearestNeighborRule attal_rule(
    BoundaryCondition b = BoundaryCondition::absorbing()) {
  double s = 1.0 / std::sqrt(3.0);
  ComplexMatrix l(2, 2), r(2, 2);
  l << s, s, 0, s;
  r << s, 0, -s, s;
  return NearestNeighborRule(l, r, std::nullopt, b);
}

// Rotation family member (see first_visit.hpp for the matrices).
inline NearestNeighborRule rotation_rule(
    double t, BoundaryCondition b = BoundaryCondition::absorbing()) {
  if (!(t > 0.0 && t < 1.0))
    throw ConfigError("rotation_rule: t must lie in (0,1)");
  return NearestNeighborRule(rotation_left(t), rotation_right(t), std::nullopt,
                             b);
}

// Biased diagonal walk: L = diag(sqrt(p)), R = diag(sqrt(1-p)).
inline NearestNeighborRule biased_diagonal_rule(
    double p, BoundaryCondition b = BoundaryCondition::absorbing()) {
  if (!(p > 0.0 && p < 1.0))
    throw ConfigError("biased_diagonal_rule: p must lie in (0,1)");
  double l = std::sqrt(p), r = std::sqrt(1.0 - p);
  return NearestNeighborRule(diag2(l, l), diag2(r, r), std::nullopt, b);
}

// Built-in lookup used by the CLI: "builtin:<name>[:param]".
inline std::optional<NearestNeighborRule>
builtin_rule(const std::string &name,
             BoundaryCondition b = BoundaryCondition::absorbing()) {
  auto starts = [&](const char *p) {
    return name.rfind(p, 0) == 0;
  };
  if (name == "ccase1")
    return ccase1_rule(b);
  if (name == "ccase2")
    return ccase2_rule(b);
  if (name == "ccase3")
    return ccase3_rule(b);
  if (name == "hadamard")
    return hadamard_rule(b);
  if (name == "nonnormal")
    return nonnormal_rule();
  if (name == "attal")
    return attal_rule(b);
  if (starts("lazy:"))
    return lazy_duran_rule(std::stod(name.substr(5)), b);
  if (starts("rotation:"))
    return rotation_rule(std::stod(name.substr(9)), b);
  if (starts("biased:"))
    return biased_diagonal_rule(std::stod(name.substr(7)), b);
  return std::nullopt;
}

inline NearestNeighborRule load_rule(const std::string &spec,
                                     BoundaryCondition fallback_boundary =
                                         BoundaryCondition::absorbing()) {
  if (spec.rfind("builtin:", 0) == 0) {
    auto r = builtin_rule(spec.substr(8), fallback_boundary);
    if (!r)
      throw ConfigError("unknown builtin walk '" + spec + "'");
    return *r;
  }
  std::ifstream in(spec);
  if (!in)
    throw ConfigError("cannot open walk spec file '" + spec + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception &e) {
    throw ConfigError("walk spec parse error: " + std::string(e.what()));
  }
  return parse_walk_spec(j);
}

// Density parsing: a JSON matrix object, a Bloch triple "x,y,z", or the
// shorthands "mixed" (I/2), "e11", "plus" ((1/2)[[1,1],[1,1]]).
inline DensityMatrix parse_density(const std::string &text, int n = 2) {
  if (text == "mixed")
    return maximally_mixed(n);
  if (text == "e11")
    return density_e11();
  if (text == "plus")
    return density_plus();
  if (!text.empty() && (text[0] == '{' || text[0] == '[')) {
    json j = json::parse(text);
    return DensityMatrix(matrix_from_json(j));
  }
  if (text.find(',') != std::string::npos) {
    double x, y, z;
    char c1, c2;
    std::istringstream ss(text);
    if (!(ss >> x >> c1 >> y >> c2 >> z) || c1 != ',' || c2 != ',')
      throw ConfigError("density: expected 'x,y,z' Bloch coordinates");
    return DensityMatrix::from_bloch({x, y, z});
  }
  std::ifstream in(text);
  if (!in)
    throw ConfigError("density: cannot open file '" + text + "'");
  json j;
  in >> j;
  return DensityMatrix(matrix_from_json(j));
}

} // namespace oqwalk

#endif
