#pragma once

// Chart atlas of a validated decomposition: one monoid chart per face orbit,
// gluing localizations, the lattice action on charts, and the stratification
// of the special fiber.

#include "degenkit/cone.hpp"
#include "degenkit/decomp.hpp"
#include "degenkit/parallel.hpp"

#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

namespace degenkit {

class InvalidDecomposition : public Error {
public:
  explicit InvalidDecomposition(ValidationReport r)
      : Error("decomposition does not validate"), report(std::move(r)) {}
  ValidationReport report;
};

struct Chart {
  std::size_t orbit = 0;
  int dim = 0;
  Polytope cell;
  Cone cone; ///< C(σ)^∨
  MonoidBasis monoid;
  std::vector<ZVec> relations;
  bool smooth = false;
};

struct GluingEdge {
  std::size_t from = 0; ///< orbit of the larger cell σ
  std::size_t to = 0;   ///< orbit of the face τ, with τ_rep + B·h ⊆ σ_rep
  ZVec h;
  ZVec invert; ///< u ∈ monoid(σ) whose inversion localizes chart(σ) to the face
  bool verified = false;
};

struct ActionEntry {
  std::size_t target = 0; ///< orbit of σ
  std::size_t source = 0; ///< orbit of y + σ
  ZVec sourceShift;       ///< σ_rep + B·y = source_rep + B·sourceShift
  ZVec shift;             ///< B·y, the π-exponent shift is x·shift
  std::vector<ZVec> sourceGens;
  std::vector<ZVec> images;
};

struct ActionChart {
  ZVec y;
  std::vector<ActionEntry> entries;
  bool verified = false;
};

struct DualGraph {
  std::vector<std::size_t> nodes; ///< vertex orbits (components of the fiber)
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> edges; ///< (edge orbit, node, node)

  /// True iff the graph is a single cycle through all nodes (a self-loop when there is one node).
  bool isCycle() const {
    if (nodes.empty() || edges.size() != nodes.size()) return false;
    std::map<std::size_t, std::size_t> degree, parent;
    for (auto n : nodes) parent[n] = n;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (const auto &[e, a, b] : edges) {
      ++degree[a];
      ++degree[b];
      parent[find(a)] = find(b);
    }
    for (auto n : nodes)
      if (degree[n] != 2 || find(n) != find(nodes.front())) return false;
    return true;
  }
};

struct Stratum {
  std::size_t orbit = 0;
  int dim = 0;
};

struct FiberComplex {
  std::vector<Stratum> strata;
  /// (i, j): cell i ⊊ cell j, so stratum j lies in the closure of stratum i.
  std::vector<std::pair<std::size_t, std::size_t>> closure;
  std::optional<DualGraph> dualGraph;
};

struct ChartAtlas {
  PeriodicDecomposition decomposition;
  std::vector<FaceOrbit> orbits;
  std::vector<Chart> charts;
  std::vector<GluingEdge> gluings;
  std::vector<ActionChart> actionsSample;
  std::optional<long> level;
  bool connected = false;
  bool regular = false;
};

namespace detail {

inline ZVec lift(const QVec &v) {
  QVec g{1};
  g.insert(g.end(), v.begin(), v.end());
  return primitive(g);
}

/// (m, x) ↦ (m + x·s, x).
inline ZVec shiftExponent(const ZVec &g, const ZVec &s) {
  ZVec out = g;
  for (std::size_t i = 0; i < s.size(); ++i) out[0] += g[i + 1] * s[i];
  return out;
}

/// g ∈ C(P)^∨, i.e. m + x·v >= 0 at every vertex v.
inline bool inDualOf(const Polytope &p, const ZVec &g) {
  for (const auto &v : p.vertices()) {
    Rat s = Rat(g[0]);
    for (std::size_t i = 0; i < v.size(); ++i) s += Rat(g[i + 1]) * v[i];
    if (s < 0) return false;
  }
  return true;
}

inline Rat pairAt(const ZVec &g, const QVec &v) {
  Rat s = Rat(g[0]);
  for (std::size_t i = 0; i < v.size(); ++i) s += Rat(g[i + 1]) * v[i];
  return s;
}

inline Chart makeChart(const FaceOrbit &o) {
  Chart c;
  c.orbit = o.id;
  c.dim = o.dim;
  c.cell = o.rep;
  c.cone = dualCone(coneOver(o.rep));
  c.monoid = withPi(hilbertBasis(c.cone));
  c.relations = relationLattice(c.monoid);
  c.smooth = isSmooth(coneOver(o.rep));
  return c;
}

} // namespace detail

/// Localization of chart(σ) at u = sum of σ's generators vanishing on the
/// face τ_rep + B·h; returns the edge with its verification verdict.
inline GluingEdge makeGluing(const PeriodicDecomposition &D, const Chart &sigma, const Chart &tau, const ZVec &h) {
  GluingEdge e;
  e.from = sigma.orbit;
  e.to = tau.orbit;
  e.h = h;
  Polytope face = tau.cell.translated(D.pairing().embed(h));
  const std::size_t n = sigma.monoid.dim;
  e.invert = ZVec(n);
  for (const auto &g : sigma.monoid.elements)
    if (std::all_of(face.vertices().begin(), face.vertices().end(),
                    [&](const QVec &v) { return detail::pairAt(g, v) == 0; }))
      e.invert = add(std::move(e.invert), g);
  bool positiveOff = true;
  for (const auto &v : sigma.cell.vertices())
    if (!face.contains(v) && detail::pairAt(e.invert, v) <= 0) positiveOff = false;
  auto gens = sigma.cone.rays();
  gens.push_back(negate(e.invert));
  e.verified = positiveOff && sigma.cell.hasFace(face) &&
               Cone::generatedBy(gens, n) == dualCone(coneOver(face));
  return e;
}

/// The action S_y on all charts: chart(y + σ) → chart(σ), (m, x) ↦ (m + x·B·y, x).
/// Requires the decomposition to be stable under y.
inline ActionChart actionChart(const ChartAtlas &A, const ZVec &y) {
  const auto &D = A.decomposition;
  if (y.size() != D.dim()) throw DimensionMismatch("action vector has the wrong length");
  if (!(translateBy(D.pairing().embed(y), D) == D))
    throw PreconditionError("decomposition is not stable under the given translation");
  std::map<Polytope, std::size_t> index;
  for (const auto &o : A.orbits) index.emplace(o.rep, o.id);
  ActionChart out;
  out.y = y;
  out.verified = true;
  const ZVec By = D.pairing().matrix() * y;
  for (const auto &chart : A.charts) {
    ActionEntry e;
    e.target = chart.orbit;
    e.shift = By;
    Polytope moved = chart.cell.translated(toRat(By));
    auto [rep, s] = D.canonicalize(moved);
    e.source = index.at(rep);
    e.sourceShift = D.toY(s);
    const Chart &src = A.charts[e.source];
    for (const auto &g : src.monoid.elements) {
      ZVec onMoved = detail::shiftExponent(g, negate(s));
      e.sourceGens.push_back(onMoved);
      e.images.push_back(detail::shiftExponent(onMoved, By));
    }
    bool ok = std::all_of(e.images.begin(), e.images.end(), [&](const ZVec &g) { return chart.cone.contains(g); });
    for (const auto &g : chart.monoid.elements)
      ok = ok && detail::inDualOf(moved, detail::shiftExponent(g, negate(By)));
    if (chart.cone.pointed()) {
      std::set<ZVec> a(e.images.begin(), e.images.end()), b(chart.monoid.elements.begin(), chart.monoid.elements.end());
      ok = ok && a == b;
    }
    out.verified = out.verified && ok;
    out.entries.push_back(std::move(e));
  }
  return out;
}

/// S_y ∘ S_y2 = S_{y+y2} on every generator of every chart.
inline bool actionComposes(const ChartAtlas &A, const ZVec &y, const ZVec &y2) {
  const auto &D = A.decomposition;
  auto total = actionChart(A, add(y, y2));
  if (!total.verified) return false;
  const ZVec By = D.pairing().matrix() * y, By2 = D.pairing().matrix() * y2;
  for (const auto &e : total.entries) {
    Polytope middle = A.charts[e.target].cell.translated(toRat(By));
    for (std::size_t k = 0; k < e.sourceGens.size(); ++k) {
      ZVec first = detail::shiftExponent(e.sourceGens[k], By2);
      if (!detail::inDualOf(middle, first)) return false;
      if (detail::shiftExponent(first, By) != e.images[k]) return false;
    }
  }
  return true;
}

/// Strata of the special fiber: one per face orbit, of codimension equal to the face dimension.
inline FiberComplex specialFiber(const PeriodicDecomposition &D, const std::vector<FaceOrbit> &orbits) {
  FiberComplex F;
  const int d = static_cast<int>(D.dim());
  for (const auto &o : orbits) F.strata.push_back({o.id, d - o.dim});
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto &o : orbits)
    for (const auto &[p, h] : o.parents) pairs.emplace(o.id, p);
  F.closure.assign(pairs.begin(), pairs.end());
  if (d == 1) {
    DualGraph g;
    for (const auto &o : orbits)
      if (o.dim == 0) g.nodes.push_back(o.id);
    for (const auto &o : orbits) {
      if (o.dim != 1) continue;
      std::vector<std::size_t> ends;
      for (const auto &v : o.rep.vertices()) {
        auto [rep, s] = D.canonicalize(hull({v}));
        for (const auto &w : orbits)
          if (w.dim == 0 && w.rep == rep) ends.push_back(w.id);
      }
      g.edges.emplace_back(o.id, ends.at(0), ends.at(1));
    }
    F.dualGraph = std::move(g);
  }
  return F;
}

inline FiberComplex specialFiber(const ChartAtlas &A) { return specialFiber(A.decomposition, A.orbits); }

/// Builds every chart (concurrently), the gluing edges and a sample of actions.
inline ChartAtlas buildAtlas(const PeriodicDecomposition &D, std::optional<long> level = std::nullopt) {
  auto report = validate(D);
  if (!report.pass()) throw InvalidDecomposition(report);
  ChartAtlas A;
  A.decomposition = D;
  A.level = level;
  A.orbits = orbitFaces(D);
  A.charts.resize(A.orbits.size());
  parallelFor(A.orbits.size(), [&](std::size_t i) { A.charts[i] = detail::makeChart(A.orbits[i]); });

  std::vector<std::tuple<std::size_t, std::size_t, ZVec>> edges;
  for (const auto &o : A.orbits)
    for (const auto &[p, h] : o.parents) edges.emplace_back(p, o.id, h);
  A.gluings.resize(edges.size());
  parallelFor(edges.size(), [&](std::size_t k) {
    const auto &[p, t, h] = edges[k];
    A.gluings[k] = makeGluing(D, A.charts[p], A.charts[t], h);
  });

  std::vector<std::size_t> parent(A.orbits.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (const auto &e : A.gluings) parent[find(e.from)] = find(e.to);
  A.connected = true;
  for (std::size_t i = 0; i < parent.size(); ++i) A.connected = A.connected && find(i) == find(0);
  A.regular = std::all_of(A.charts.begin(), A.charts.end(), [](const Chart &c) { return c.smooth; });

  for (std::size_t j = 0; j < D.period().cols(); ++j) A.actionsSample.push_back(actionChart(A, D.period().column(j)));
  return A;
}

/// The sub-atlas on a face-closed set of orbits, with the induced gluing graph.
inline ChartAtlas restrictAtlas(const ChartAtlas &A, const std::vector<std::size_t> &subset) {
  std::set<std::size_t> keep(subset.begin(), subset.end());
  for (auto s : keep)
    for (const auto &o : A.orbits)
      for (const auto &[p, h] : o.parents)
        if (p == s && !keep.count(o.id)) throw PreconditionError("orbit subset is not closed under faces");
  ChartAtlas R;
  R.decomposition = A.decomposition;
  R.level = A.level;
  R.regular = A.regular;
  for (const auto &o : A.orbits)
    if (keep.count(o.id)) {
      FaceOrbit r = o;
      r.parents.clear();
      for (const auto &ph : o.parents)
        if (keep.count(ph.first)) r.parents.push_back(ph);
      R.orbits.push_back(std::move(r));
    }
  for (const auto &c : A.charts)
    if (keep.count(c.orbit)) R.charts.push_back(c);
  for (const auto &e : A.gluings)
    if (keep.count(e.from) && keep.count(e.to)) R.gluings.push_back(e);
  std::map<std::size_t, std::size_t> parent;
  for (auto s : keep) parent[s] = s;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (const auto &e : R.gluings) parent[find(e.from)] = find(e.to);
  R.connected = !keep.empty();
  for (auto s : keep) R.connected = R.connected && find(s) == find(*keep.begin());
  return R;
}

} // namespace degenkit
