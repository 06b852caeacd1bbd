#pragma once

// JSON interchange. Rationals are strings "p/q" (or "p"); integers are JSON
// numbers when they fit in 64 bits and decimal strings otherwise. Matrices are
// lists of rows. Object keys are emitted sorted, so output is deterministic.

#include "degenkit/atlas.hpp"
#include "degenkit/functor.hpp"

#include <json.hpp>

#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace degenkit::io {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Scalars, vectors, matrices

inline Json toJson(const Int &v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return Json(v.convert_to<long long>());
  return Json(v.str());
}

inline Json toJson(const Rat &r) { return Json(toString(r)); }

inline Json toJson(const ZVec &v) {
  Json a = Json::array();
  for (const auto &x : v) a.push_back(toJson(x));
  return a;
}

inline Json toJson(const QVec &v) {
  Json a = Json::array();
  for (const auto &x : v) a.push_back(toJson(x));
  return a;
}

template <class T> Json toJson(const Matrix<T> &m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(toJson(m.row(i)));
  return a;
}

inline Json toJson(const std::vector<ZVec> &vs) {
  Json a = Json::array();
  for (const auto &v : vs) a.push_back(toJson(v));
  return a;
}

inline Int intFrom(const Json &j) {
  if (j.is_number_integer()) return Int(j.get<long long>());
  if (j.is_number_unsigned()) return Int(j.get<unsigned long long>());
  if (j.is_string()) {
    auto r = parseRat(j.get<std::string>());
    if (!isIntegral(r)) throw ParseError("expected an integer, got '" + j.get<std::string>() + "'");
    return num(r);
  }
  throw ParseError("expected an integer, got " + j.dump());
}

inline Rat ratFrom(const Json &j) {
  if (j.is_string()) return parseRat(j.get<std::string>());
  if (j.is_number_integer() || j.is_number_unsigned()) return Rat(intFrom(j));
  throw ParseError("expected a rational string, got " + j.dump());
}

inline const Json &field(const Json &j, const char *key) {
  if (!j.is_object()) throw ParseError(std::string("expected an object with key '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing key '") + key + "'");
  return *it;
}

inline const Json &arrayFrom(const Json &j) {
  if (!j.is_array()) throw ParseError("expected an array, got " + j.dump());
  return j;
}

inline ZVec zvecFrom(const Json &j) {
  ZVec v;
  for (const auto &x : arrayFrom(j)) v.push_back(intFrom(x));
  return v;
}

inline QVec qvecFrom(const Json &j) {
  QVec v;
  for (const auto &x : arrayFrom(j)) v.push_back(ratFrom(x));
  return v;
}

inline std::vector<ZVec> zvecsFrom(const Json &j) {
  std::vector<ZVec> out;
  for (const auto &x : arrayFrom(j)) out.push_back(zvecFrom(x));
  return out;
}

/// A row-major matrix; `cols` is used when there are no rows.
inline ZMat zmatFrom(const Json &j, std::size_t cols = 0) {
  auto rows = zvecsFrom(j);
  if (rows.empty()) return ZMat(0, cols);
  for (const auto &r : rows)
    if (r.size() != rows.front().size()) throw ParseError("ragged matrix");
  return ZMat::fromRows(rows, rows.front().size());
}

// ---------------------------------------------------------------------------
// Polytopes, cones, monoids

inline Json toJson(const Halfspace &h) { return Json{{"normal", toJson(h.normal)}, {"offset", toJson(h.offset)}}; }

inline Json toJson(const Polytope &p) {
  Json verts = Json::array(), hs = Json::array();
  for (const auto &v : p.vertices()) verts.push_back(toJson(v));
  for (const auto &h : p.halfspaces()) hs.push_back(toJson(h));
  return Json{{"dim", p.ambientDim()}, {"vertices", verts}, {"halfspaces", hs}};
}

/// Rebuilds the polytope from its vertices. If half-spaces are given they
/// must describe the same set.
inline Polytope polytopeFrom(const Json &j) {
  const std::size_t n = field(j, "dim").get<std::size_t>();
  std::vector<QVec> verts;
  for (const auto &v : arrayFrom(field(j, "vertices"))) {
    verts.push_back(qvecFrom(v));
    if (verts.back().size() != n) throw ParseError("vertex length differs from 'dim'");
  }
  if (verts.empty()) throw ParseError("polytope without vertices");
  Polytope p = hull(std::move(verts));
  if (auto it = j.find("halfspaces"); it != j.end()) {
    std::vector<Halfspace> hs;
    for (const auto &h : arrayFrom(*it)) {
      hs.push_back({zvecFrom(field(h, "normal")), ratFrom(field(h, "offset"))});
      if (hs.back().normal.size() != n) throw ParseError("half-space normal length differs from 'dim'");
    }
    auto q = fromHalfspaces(n, hs);
    if (!q || !(*q == p)) throw ParseError("vertex and half-space descriptions disagree");
  }
  return p;
}

inline Json toJson(const Cone &c) { return Json{{"rays", toJson(c.rays())}, {"facets", toJson(c.facets())}}; }

inline Cone coneFrom(const Json &j, std::size_t dim) {
  Cone c = Cone::generatedBy(zvecsFrom(field(j, "rays")), dim);
  if (auto it = j.find("facets"); it != j.end()) {
    Cone d = Cone::fromInequalities(zvecsFrom(*it), dim);
    if (!(c == d)) throw ParseError("ray and facet descriptions of the cone disagree");
  }
  return c;
}

inline Json toJson(const MonoidBasis &b, const std::vector<ZVec> &relations) {
  return Json{{"gens", toJson(b.elements)},
              {"pi", b.piIndex ? Json(*b.piIndex) : Json(nullptr)},
              {"relations", toJson(relations)}};
}

inline Json toJson(const MonoidBasis &b) { return toJson(b, relationLattice(b)); }

// ---------------------------------------------------------------------------
// Decompositions and reports

inline Json toJson(const PeriodicDecomposition &D) {
  Json cells = Json::array();
  for (const auto &c : D.cells()) cells.push_back(toJson(c));
  return Json{{"pairing", toJson(D.pairing().matrix())},
              {"period", toJson(D.period())},
              {"cells", cells},
              {"name", D.name()}};
}

inline PeriodicDecomposition decompositionFrom(const Json &j) {
  try {
    ZMat B = zmatFrom(field(j, "pairing"));
    ZMat H = zmatFrom(field(j, "period"), B.cols());
    std::vector<Polytope> cells;
    for (const auto &c : arrayFrom(field(j, "cells"))) cells.push_back(polytopeFrom(c));
    std::string name;
    if (auto it = j.find("name"); it != j.end() && it->is_string()) name = it->get<std::string>();
    return PeriodicDecomposition(PairingData(std::move(B)), std::move(H), std::move(cells), std::move(name));
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("malformed decomposition: ") + e.what());
  }
}

inline Json toJson(const CellRef &r) { return Json{{"cell", r.cell}, {"y", toJson(r.y)}}; }

inline Json toJson(const std::optional<CellRef> &r) { return r ? toJson(*r) : Json(nullptr); }

inline Json toJson(const std::vector<std::optional<CellRef>> &table) {
  Json a = Json::array();
  for (std::size_t i = 0; i < table.size(); ++i) a.push_back(Json{{"source", i}, {"target", toJson(table[i])}});
  return a;
}

inline Json pairJson(const std::optional<std::pair<CellRef, CellRef>> &p) {
  if (!p) return nullptr;
  return Json::array({toJson(p->first), toJson(p->second)});
}

inline Json toJson(const ValidationReport &r) {
  Json uncovered = nullptr;
  if (r.uncovered) uncovered = Json{{"lo", toJson(r.uncovered->first)}, {"hi", toJson(r.uncovered->second)}};
  return Json{{"pass", r.pass()},
              {"structural", r.structural},
              {"cover", Json{{"pass", r.cover},
                             {"cell_volume", toJson(r.cellVolume)},
                             {"period_volume", toJson(r.periodVolume)},
                             {"uncovered", uncovered},
                             {"overlap", pairJson(r.overlap)}}},
              {"face_closed", r.faceClosed},
              {"face_to_face", Json{{"pass", r.faceToFace}, {"bad_intersection", pairJson(r.badIntersection)}}},
              {"top_orbits", r.topOrbits},
              {"errors", r.errors}};
}

inline Json toJson(const FaceOrbit &o) {
  Json parents = Json::array();
  for (const auto &[p, h] : o.parents) parents.push_back(Json{{"orbit", p}, {"h", toJson(h)}});
  return Json{{"id", o.id}, {"dim", o.dim}, {"rep", toJson(o.rep)}, {"parents", parents}};
}

inline Json toJson(const std::vector<FaceOrbit> &orbits) {
  Json a = Json::array();
  for (const auto &o : orbits) a.push_back(toJson(o));
  return a;
}

inline Json toJson(const CompatibilityReport &r) {
  return Json{{"ok", r.ok}, {"h", toJson(r.h)}, {"witness", toJson(r.witness)}};
}

// ---------------------------------------------------------------------------
// Atlases

inline Json toJson(const ActionChart &a) {
  Json entries = Json::array();
  for (const auto &e : a.entries) {
    Json gens = Json::array();
    for (std::size_t k = 0; k < e.sourceGens.size(); ++k)
      gens.push_back(Json{{"from", toJson(e.sourceGens[k])}, {"to", toJson(e.images[k])}});
    entries.push_back(Json{{"target", e.target},
                           {"source", e.source},
                           {"source_shift", toJson(e.sourceShift)},
                           {"shift", toJson(e.shift)},
                           {"gens", gens}});
  }
  return Json{{"y", toJson(a.y)}, {"verified", a.verified}, {"maps", entries}};
}

inline Json toJson(const FiberComplex &F) {
  Json strata = Json::array(), closure = Json::array();
  for (const auto &s : F.strata) strata.push_back(Json{{"orbit", s.orbit}, {"dim", s.dim}});
  for (const auto &[a, b] : F.closure) closure.push_back(Json::array({a, b}));
  Json out{{"strata", strata}, {"closure", closure}};
  if (F.dualGraph) {
    Json edges = Json::array();
    for (const auto &[e, a, b] : F.dualGraph->edges) edges.push_back(Json{{"orbit", e}, {"ends", Json::array({a, b})}});
    out["dual_graph"] = Json{{"nodes", F.dualGraph->nodes}, {"edges", edges}, {"cycle", F.dualGraph->isCycle()}};
  }
  return out;
}

inline Json toJson(const ChartAtlas &A) {
  Json charts = Json::array(), gluings = Json::array(), actions = Json::array();
  for (const auto &c : A.charts) {
    Json j = toJson(c.monoid, c.relations);
    j["orbit"] = c.orbit;
    j["dim"] = c.dim;
    j["cell"] = toJson(c.cell);
    j["cone"] = toJson(c.cone);
    j["smooth"] = c.smooth;
    charts.push_back(std::move(j));
  }
  for (const auto &g : A.gluings)
    gluings.push_back(Json{{"from", g.from}, {"to", g.to}, {"h", toJson(g.h)}, {"invert", toJson(g.invert)},
                           {"verified", g.verified}});
  for (const auto &a : A.actionsSample) actions.push_back(toJson(a));
  return Json{{"pairing", toJson(A.decomposition.pairing().matrix())},
              {"period", toJson(A.decomposition.period())},
              {"decomposition", toJson(A.decomposition)},
              {"orbits", toJson(A.orbits)},
              {"charts", charts},
              {"gluings", gluings},
              {"actions_sample", actions},
              {"fiber", toJson(specialFiber(A))},
              {"level", A.level ? Json(*A.level) : Json(nullptr)},
              {"connected", A.connected},
              {"regular", A.regular}};
}

/// Accepts a decomposition document or any document embedding one under "decomposition".
inline PeriodicDecomposition embeddedDecomposition(const Json &j) {
  if (j.is_object() && j.contains("decomposition")) return decompositionFrom(j.at("decomposition"));
  return decompositionFrom(j);
}

inline Json toJson(const MappedPair &m) {
  return Json{{"map", toJson(m.L)},
              {"saturation", toJson(m.saturation)},
              {"complement", toJson(m.complement)},
              {"period_prime", toJson(m.periodPrime)},
              {"decomposition", toJson(m.sigmaPrime)},
              {"witness", toJson(m.witness)}};
}

// ---------------------------------------------------------------------------
// Text

inline std::string dump(const Json &j) { return j.dump(2) + "\n"; }

inline Json parse(const std::string &text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

/// Matrix from "a b; c d" (rows separated by ';', entries by spaces or commas).
inline ZMat parseMatrix(const std::string &text) {
  std::vector<ZVec> rows;
  std::size_t start = 0;
  for (;;) {
    auto end = text.find(';', start);
    std::string part = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    for (auto &ch : part)
      if (ch == ',') ch = ' ';
    std::istringstream in(part);
    ZVec row;
    std::string tok;
    while (in >> tok) {
      auto r = parseRat(tok);
      if (!isIntegral(r)) throw ParseError("matrix entry is not an integer: '" + tok + "'");
      row.push_back(num(r));
    }
    if (!row.empty()) rows.push_back(std::move(row));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (rows.empty()) throw ParseError("empty matrix");
  for (const auto &r : rows)
    if (r.size() != rows.front().size()) throw ParseError("ragged matrix: '" + text + "'");
  return ZMat::fromRows(rows, rows.front().size());
}

/// Rational vector from "1/2 0 -3".
inline QVec parseVector(const std::string &text) {
  std::string t = text;
  for (auto &ch : t)
    if (ch == ',') ch = ' ';
  std::istringstream in(t);
  QVec v;
  std::string tok;
  while (in >> tok) v.push_back(parseRat(tok));
  if (v.empty()) throw ParseError("empty vector");
  return v;
}

} // namespace degenkit::io
