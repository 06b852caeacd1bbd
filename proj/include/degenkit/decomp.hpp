#pragma once

// Periodic polytope decompositions of E = Q^d: a finite list of top cells
// modulo a finite-index period lattice H ≤ Y, where Y sits in E through the
// valuation matrix B of the pairing.

#include "degenkit/exact.hpp"
#include "degenkit/parallel.hpp"
#include "degenkit/poly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace degenkit {

class PairingData {
public:
  PairingData() : snf_(snf(ZMat(0, 0))), inv_(0, 0) {}

  explicit PairingData(ZMat b) : B_(std::move(b)), snf_(snf(ZMat(0, 0))), inv_(0, 0) {
    if (B_.rows() != B_.cols()) throw DimensionMismatch("pairing matrix must be square");
    snf_ = snf(B_);
    if (snf_.rank != B_.rows()) throw PreconditionError("pairing matrix must have full rank");
    inv_ = *inverse(toRat(B_));
    const std::size_t d = B_.rows();
    bool symmetric = B_ == B_.transpose();
    if (!symmetric) {
      warnings_.push_back("pairing matrix is not symmetric");
    } else {
      for (std::size_t k = 1; k <= d; ++k) {
        ZMat minor(k, k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) minor(i, j) = B_(i, j);
        if (det(minor) <= 0) {
          warnings_.push_back("pairing matrix is not positive definite");
          break;
        }
      }
    }
  }

  std::size_t dim() const { return B_.rows(); }
  const ZMat &matrix() const { return B_; }
  const SmithForm &smith() const { return snf_; }
  std::vector<Int> invariants() const { return snf_.diagonal(); }
  const std::vector<std::string> &warnings() const { return warnings_; }

  /// Image of y ∈ Y in E.
  QVec embed(const ZVec &y) const { return toRat(B_ * y); }

  /// Y-coordinates of an E-vector, if it lies in the embedded lattice.
  std::optional<ZVec> coordinates(const QVec &x) const { return toInt(inv_ * x); }

  friend bool operator==(const PairingData &a, const PairingData &b) { return a.B_ == b.B_; }

private:
  ZMat B_ = ZMat(0, 0);
  SmithForm snf_;
  QMat inv_;
  std::vector<std::string> warnings_;
};

/// A cell translate: cells()[cell] + B·y.
struct CellRef {
  std::size_t cell = 0;
  ZVec y;
  friend bool operator==(const CellRef &, const CellRef &) = default;
};

namespace detail {

/// Points L·z inside the closed box [lo, hi], for L lower triangular with
/// positive diagonal.
inline std::vector<ZVec> latticePointsInBox(const ZMat &L, const QVec &lo, const QVec &hi) {
  const std::size_t d = L.rows();
  std::vector<ZVec> out;
  ZVec t(d);
  auto rec = [&](auto &&self, std::size_t i, ZVec partial) -> void {
    if (i == d) {
      out.push_back(partial);
      return;
    }
    const Int &p = L(i, i);
    Int zlo = ceil((lo[i] - Rat(partial[i])) / Rat(p));
    Int zhi = floor((hi[i] - Rat(partial[i])) / Rat(p));
    for (Int z = zlo; z <= zhi; ++z) {
      ZVec next = partial;
      for (std::size_t r = i; r < d; ++r) next[r] += L(r, i) * z;
      self(self, i + 1, std::move(next));
    }
  };
  rec(rec, 0, t);
  return out;
}

/// Lattice vector t with v + t in the half-open box prod [0, L(i,i)).
inline ZVec reduceIntoBox(const ZMat &L, const QVec &v) {
  const std::size_t d = L.rows();
  ZVec t(d);
  for (std::size_t i = 0; i < d; ++i) {
    Rat c = v[i] + Rat(t[i]);
    Int z = -floor(c / Rat(L(i, i)));
    for (std::size_t r = i; r < d; ++r) t[r] += L(r, i) * z;
  }
  return t;
}

} // namespace detail

class PeriodicDecomposition {
public:
  PeriodicDecomposition() = default;

  PeriodicDecomposition(PairingData pairing, const ZMat &period, std::vector<Polytope> cells, std::string name = {})
      : pairing_(std::move(pairing)), name_(std::move(name)) {
    const std::size_t d = pairing_.dim();
    if (period.rows() != d) throw DimensionMismatch("period rows must equal the pairing dimension");
    period_ = hnf(period);
    if (period_.cols() != d) throw PreconditionError("period lattice must have finite index in Y");
    lattice_ = hnf(pairing_.matrix() * period_);
    std::set<Polytope> seen;
    for (const auto &c : cells) {
      if (c.ambientDim() != d) throw DimensionMismatch("cell dimension differs from the pairing dimension");
      seen.insert(canonicalize(c).first);
    }
    cells_.assign(seen.begin(), seen.end());
  }

  const PairingData &pairing() const { return pairing_; }
  /// Hermite basis of H in Y-coordinates.
  const ZMat &period() const { return period_; }
  /// Hermite basis of B·H in E.
  const ZMat &lattice() const { return lattice_; }
  const std::vector<Polytope> &cells() const { return cells_; }
  const std::string &name() const { return name_; }
  void setName(std::string n) { name_ = std::move(n); }
  std::size_t dim() const { return pairing_.dim(); }

  Rat fundamentalVolume() const {
    Int v = det(lattice_);
    return Rat(v < 0 ? Int(-v) : v);
  }

  /// The canonical translate of p and the lattice vector s with p = rep + s.
  /// The canonical translate has its lexicographically smallest vertex in
  /// the Hermite fundamental box of B·H.
  std::pair<Polytope, ZVec> canonicalize(const Polytope &p) const {
    ZVec t = detail::reduceIntoBox(lattice_, p.vertices().front());
    return {p.translated(toRat(t)), negate(t)};
  }

  std::optional<std::size_t> findCell(const Polytope &canonical) const {
    auto it = std::lower_bound(cells_.begin(), cells_.end(), canonical);
    if (it != cells_.end() && *it == canonical) return static_cast<std::size_t>(it - cells_.begin());
    return std::nullopt;
  }

  /// Y-coordinates of a vector of the lattice B·H.
  ZVec toY(const ZVec &t) const {
    auto y = pairing_.coordinates(toRat(t));
    if (!y) throw std::logic_error("translate is not in the embedded period lattice");
    return *y;
  }

  Polytope place(const CellRef &r) const { return cells_.at(r.cell).translated(pairing_.embed(r.y)); }

  /// Lattice vectors t such that the bounding box of p + t meets [lo, hi].
  std::vector<ZVec> translatesMeeting(const Polytope &p, const QVec &lo, const QVec &hi) const {
    auto [plo, phi] = p.boundingBox();
    return detail::latticePointsInBox(lattice_, sub(lo, phi), sub(hi, plo));
  }

  /// A cell translate containing p, if any.
  std::optional<CellRef> locate(const Polytope &p) const {
    auto [lo, hi] = p.boundingBox();
    for (std::size_t k = 0; k < cells_.size(); ++k) {
      auto [clo, chi] = cells_[k].boundingBox();
      for (const auto &t : detail::latticePointsInBox(lattice_, sub(hi, chi), sub(lo, clo)))
        if (cells_[k].translated(toRat(t)).contains(p)) return CellRef{k, toY(t)};
    }
    return std::nullopt;
  }

  friend bool operator==(const PeriodicDecomposition &a, const PeriodicDecomposition &b) {
    return a.pairing_ == b.pairing_ && a.period_ == b.period_ && a.cells_ == b.cells_;
  }

private:
  PairingData pairing_;
  ZMat period_ = ZMat(0, 0);
  ZMat lattice_ = ZMat(0, 0);
  std::vector<Polytope> cells_;
  std::string name_;
};

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
  bool structural = true;
  bool cover = false;
  bool faceClosed = true;
  bool faceToFace = false;
  std::vector<std::string> errors;
  std::size_t topOrbits = 0;
  Rat cellVolume = 0;
  Rat periodVolume = 0;
  /// Open box (lo, hi) missed by every cell translate; lo == hi for a point.
  std::optional<std::pair<QVec, QVec>> uncovered;
  /// Two translates with overlapping interiors.
  std::optional<std::pair<CellRef, CellRef>> overlap;
  /// Two translates meeting in a set that is not a common face.
  std::optional<std::pair<CellRef, CellRef>> badIntersection;

  bool pass() const { return structural && cover && faceClosed && faceToFace; }
};

namespace detail {

inline std::optional<std::pair<QVec, QVec>> findUncovered(const PeriodicDecomposition &D) {
  const std::size_t d = D.dim();
  const ZMat &L = D.lattice();
  QVec lo(d), hi(d);
  for (std::size_t i = 0; i < d; ++i) hi[i] = Rat(L(i, i));
  if (d == 1) {
    std::vector<std::pair<Rat, Rat>> iv;
    for (const auto &c : D.cells())
      for (const auto &t : D.translatesMeeting(c, lo, hi)) {
        auto [a, b] = c.boundingBox();
        iv.emplace_back(a[0] + Rat(t[0]), b[0] + Rat(t[0]));
      }
    std::sort(iv.begin(), iv.end());
    Rat cur = 0;
    for (const auto &[a, b] : iv) {
      if (a > cur) return std::pair{QVec{cur}, QVec{std::min(a, hi[0])}};
      cur = std::max(cur, b);
      if (cur >= hi[0]) return std::nullopt;
    }
    return std::pair{QVec{cur}, QVec{hi[0]}};
  }
  // grid of cell-centre points of the fundamental box
  long g = std::max(2L, static_cast<long>(std::pow(20000.0, 1.0 / static_cast<double>(d))));
  std::vector<long> idx(d, 0);
  for (;;) {
    QVec p(d);
    for (std::size_t i = 0; i < d; ++i) p[i] = hi[i] * Rat(2 * idx[i] + 1, 2 * g);
    bool covered = false;
    for (const auto &c : D.cells()) {
      for (const auto &t : D.translatesMeeting(c, p, p))
        if (c.translated(toRat(t)).contains(p)) {
          covered = true;
          break;
        }
      if (covered) break;
    }
    if (!covered) return std::pair{p, p};
    std::size_t i = 0;
    while (i < d && ++idx[i] == g) idx[i++] = 0;
    if (i == d) return std::nullopt;
  }
}

} // namespace detail

namespace detail {

/// 0: p ∩ q is empty or a common face, 1: interiors overlap, 2: neither.
/// Every facet hyperplane of either polytope that weakly separates the two
/// cuts both down to a face containing p ∩ q; the exact intersection is only
/// computed when those faces differ.
inline int meetVerdict(const Polytope &p, const Polytope &q) {
  std::vector<Halfspace> sep; // p on the >= side, q on the <= side
  for (const auto &f : p.facets()) {
    bool below = true, strict = true;
    for (const auto &v : q.vertices()) {
      Rat s = dot(f.normal, v);
      below = below && s <= f.offset;
      strict = strict && s < f.offset;
    }
    if (strict) return 0;
    if (below) sep.push_back(f);
  }
  for (const auto &g : q.facets()) {
    bool below = true, strict = true;
    for (const auto &v : p.vertices()) {
      Rat s = dot(g.normal, v);
      below = below && s <= g.offset;
      strict = strict && s < g.offset;
    }
    if (strict) return 0;
    if (below) sep.push_back({negate(g.normal), -g.offset});
  }
  auto tightOnAll = [&](const Polytope &x) {
    std::vector<QVec> out;
    for (const auto &v : x.vertices())
      if (std::all_of(sep.begin(), sep.end(), [&](const Halfspace &h) { return h.tightAt(v); })) out.push_back(v);
    return out;
  };
  auto vp = tightOnAll(p);
  auto vq = tightOnAll(q);
  if (vp.empty() || vq.empty()) return 0;
  // both lists inherit the lexicographic vertex order
  if (vp == vq) return 0;
  Polytope fp = vp.size() == p.vertices().size() ? p : hull(vp);
  Polytope fq = vq.size() == q.vertices().size() ? q : hull(vq);
  auto meet = intersect(fp, fq);
  if (!meet) return 0;
  if (meet->dim() == static_cast<int>(p.ambientDim())) return 1;
  return fp.hasFace(*meet) && fq.hasFace(*meet) ? 0 : 2;
}

/// Support data of a cell pair (p, q) reused across all translates q + t:
/// maxima of p's facet functionals over q and of q's over p, with argmax sets.
class PairTable {
public:
  PairTable(const Polytope &p, const Polytope &q) : p_(p), q_(q) {
    support(p, q, pMax_, pArg_, pInc_);
    support(q, p, qMax_, qArg_, qInc_);
  }

  /// meetVerdict(p, q + t).
  int verdict(const ZVec &t) const {
    const std::size_t np = p_.vertices().size(), nq = q_.vertices().size();
    std::vector<bool> tp(np, true), tq(nq, true);
    const auto &pf = p_.facets();
    for (std::size_t f = 0; f < pf.size(); ++f) {
      Rat m = pMax_[f] + Rat(dot(pf[f].normal, t));
      if (m < pf[f].offset) return 0;
      if (m == pf[f].offset) {
        for (std::size_t v = 0; v < np; ++v) tp[v] = tp[v] && pInc_[f][v];
        for (std::size_t v = 0; v < nq; ++v) tq[v] = tq[v] && pArg_[f][v];
      }
    }
    const auto &qf = q_.facets();
    for (std::size_t g = 0; g < qf.size(); ++g) {
      Rat off = qf[g].offset + Rat(dot(qf[g].normal, t));
      if (qMax_[g] < off) return 0;
      if (qMax_[g] == off) {
        for (std::size_t v = 0; v < nq; ++v) tq[v] = tq[v] && qInc_[g][v];
        for (std::size_t v = 0; v < np; ++v) tp[v] = tp[v] && qArg_[g][v];
      }
    }
    std::vector<QVec> vp, vq;
    for (std::size_t v = 0; v < np; ++v)
      if (tp[v]) vp.push_back(p_.vertices()[v]);
    const QVec tq_ = toRat(t);
    for (std::size_t v = 0; v < nq; ++v)
      if (tq[v]) vq.push_back(add(q_.vertices()[v], tq_));
    if (vp.empty() || vq.empty()) return 0;
    if (vp == vq) return 0;
    return meetVerdict(p_, q_.translated(tq_));
  }

private:
  // for each facet of a: max over b's vertices, argmax set, incidence on a
  static void support(const Polytope &a, const Polytope &b, std::vector<Rat> &mx,
                      std::vector<std::vector<bool>> &arg, std::vector<std::vector<bool>> &inc) {
    for (const auto &f : a.facets()) {
      std::vector<Rat> vals;
      for (const auto &v : b.vertices()) vals.push_back(dot(f.normal, v));
      Rat m = *std::max_element(vals.begin(), vals.end());
      std::vector<bool> am;
      for (const auto &x : vals) am.push_back(x == m);
      std::vector<bool> in;
      for (const auto &v : a.vertices()) in.push_back(f.tightAt(v));
      mx.push_back(m);
      arg.push_back(std::move(am));
      inc.push_back(std::move(in));
    }
  }

  const Polytope &p_;
  const Polytope &q_;
  std::vector<Rat> pMax_, qMax_;
  std::vector<std::vector<bool>> pArg_, qArg_, pInc_, qInc_;
};

} // namespace detail

/// Checks that the H-translates of the cells form a face-to-face tiling of E.
inline ValidationReport validate(const PeriodicDecomposition &D) {
  ValidationReport R;
  const auto &cells = D.cells();
  R.topOrbits = cells.size();
  R.periodVolume = D.fundamentalVolume();
  if (cells.empty()) {
    R.structural = false;
    R.errors.push_back("decomposition has no cells");
  }
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (!cells[i].fullDimensional()) {
      R.structural = false;
      R.errors.push_back("cell " + std::to_string(i) + " is not full-dimensional");
    }
  if (!R.structural) return R;
  for (const auto &c : cells) R.cellVolume += c.volume();

  // per cell pair: the first translate with an overlap (1) or a non-face meet (2)
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = i; j < cells.size(); ++j) pairs.emplace_back(i, j);
  std::vector<std::optional<ZVec>> overlapAt(pairs.size()), badAt(pairs.size());
  parallelFor(pairs.size(), [&](std::size_t k) {
    auto [i, j] = pairs[k];
    detail::PairTable table(cells[i], cells[j]);
    auto [lo, hi] = cells[i].boundingBox();
    for (const auto &t : D.translatesMeeting(cells[j], lo, hi)) {
      if (i == j && !(ZVec(t.size()) < t)) continue;
      int v = table.verdict(t);
      if (v == 1 && !overlapAt[k]) overlapAt[k] = t;
      if (v == 2 && !badAt[k]) badAt[k] = t;
    }
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto ref = [&](const ZVec &t) {
      return std::pair{CellRef{pairs[k].first, ZVec(D.dim())}, CellRef{pairs[k].second, D.toY(t)}};
    };
    if (overlapAt[k] && !R.overlap) R.overlap = ref(*overlapAt[k]);
    if (badAt[k] && !R.badIntersection) R.badIntersection = ref(*badAt[k]);
  }
  R.faceToFace = !R.overlap && !R.badIntersection;
  R.cover = !R.overlap && R.cellVolume == R.periodVolume;
  if (!R.cover && !R.overlap) R.uncovered = detail::findUncovered(D);
  return R;
}

// ---------------------------------------------------------------------------
// Face orbits

struct FaceOrbit {
  std::size_t id = 0;
  int dim = 0;
  Polytope rep;
  /// (orbit σ, h ∈ H in Y-coordinates) with rep + B·h ⊆ σ's representative.
  std::vector<std::pair<std::size_t, ZVec>> parents;
};

/// One canonical representative per H-orbit of nonempty faces, sorted by
/// (dimension, representative), with every face inclusion recorded.
inline std::vector<FaceOrbit> orbitFaces(const PeriodicDecomposition &D) {
  const auto &cells = D.cells();
  struct Local {
    std::vector<Polytope> reps;
    std::vector<ZVec> shifts;
    std::vector<std::vector<std::size_t>> vertexSets;
  };
  std::vector<Local> local(cells.size());
  parallelFor(cells.size(), [&](std::size_t c) {
    auto fl = faces(cells[c]);
    for (std::size_t f = 0; f < fl.size(); ++f) {
      if (fl.faces()[f].dim < 0) continue;
      auto [rep, shift] = D.canonicalize(fl.polytope(f));
      local[c].reps.push_back(std::move(rep));
      local[c].shifts.push_back(std::move(shift));
      local[c].vertexSets.push_back(fl.faces()[f].vertices);
    }
  });

  std::map<Polytope, std::size_t> ids;
  for (const auto &l : local)
    for (const auto &r : l.reps) ids.emplace(r, 0);
  std::vector<FaceOrbit> out;
  for (auto &[rep, id] : ids) {
    id = out.size();
    FaceOrbit o;
    o.id = id;
    o.dim = rep.dim();
    o.rep = rep;
    out.push_back(std::move(o));
  }
  std::vector<std::set<std::pair<std::size_t, ZVec>>> parents(out.size());
  for (const auto &l : local)
    for (std::size_t a = 0; a < l.reps.size(); ++a)
      for (std::size_t b = 0; b < l.reps.size(); ++b) {
        if (a == b || l.vertexSets[a].size() >= l.vertexSets[b].size()) continue;
        if (!std::includes(l.vertexSets[b].begin(), l.vertexSets[b].end(), l.vertexSets[a].begin(),
                           l.vertexSets[a].end()))
          continue;
        parents[ids.at(l.reps[a])].emplace(ids.at(l.reps[b]), D.toY(sub(l.shifts[a], l.shifts[b])));
      }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].parents.assign(parents[i].begin(), parents[i].end());
  return out;
}

/// Smallest set of orbit ids containing the seeds and closed under faces.
inline std::vector<std::size_t> faceClosedSubset(const std::vector<FaceOrbit> &orbits,
                                                 const std::vector<std::size_t> &seeds) {
  std::vector<std::vector<std::size_t>> children(orbits.size());
  for (const auto &o : orbits)
    for (const auto &[p, h] : o.parents) children[p].push_back(o.id);
  std::set<std::size_t> in;
  std::vector<std::size_t> stack;
  for (auto s : seeds) {
    if (s >= orbits.size()) throw PreconditionError("unknown orbit id " + std::to_string(s));
    if (in.insert(s).second) stack.push_back(s);
  }
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    for (auto c : children[s])
      if (in.insert(c).second) stack.push_back(c);
  }
  return {in.begin(), in.end()};
}

// ---------------------------------------------------------------------------
// Maps, subdivisions, refinements

struct CompatibilityReport {
  bool ok = false;
  ZMat h = ZMat(0, 0);
  /// Per source cell: a target cell translate containing its image.
  std::vector<std::optional<CellRef>> witness;
};

/// Checks that L maps every cell of D1 into a cell translate of D2. L acts on
/// E-coordinates; h: Y1 → Y2 defaults to B2⁻¹·L·B1.
inline CompatibilityReport mapCompatibility(const QMat &L, std::optional<ZMat> h, const PeriodicDecomposition &D1,
                                            const PeriodicDecomposition &D2) {
  const ZMat &B1 = D1.pairing().matrix();
  const ZMat &B2 = D2.pairing().matrix();
  if (L.rows() != D2.dim() || L.cols() != D1.dim()) throw DimensionMismatch("map dimensions do not match");
  if (!h) {
    auto hq = toInt(*inverse(toRat(B2)) * (L * toRat(B1)));
    if (!hq) throw PreconditionError("map does not send Y into Y'");
    h = *hq;
  }
  if (h->rows() != D2.dim() || h->cols() != D1.dim()) throw DimensionMismatch("lattice map dimensions do not match");
  if (!(L * toRat(B1) == toRat(B2 * *h))) throw PreconditionError("map is not equivariant");
  if (!latticeContains(D2.period(), *h * D1.period()))
    throw PreconditionError("lattice map does not send the period into the target period");
  CompatibilityReport r;
  r.h = *h;
  r.ok = true;
  r.witness.resize(D1.cells().size());
  parallelFor(D1.cells().size(), [&](std::size_t i) {
    r.witness[i] = D2.locate(affineImage(L, QVec(L.rows()), D1.cells()[i]));
  });
  for (const auto &w : r.witness) r.ok = r.ok && w.has_value();
  return r;
}

inline CompatibilityReport mapCompatibility(const ZMat &L, std::optional<ZMat> h, const PeriodicDecomposition &D1,
                                            const PeriodicDecomposition &D2) {
  return mapCompatibility(toRat(L), std::move(h), D1, D2);
}

/// True iff every cell of D1 lies in a cell translate of D2.
inline CompatibilityReport isSubdivision(const PeriodicDecomposition &D1, const PeriodicDecomposition &D2) {
  if (!(D1.pairing() == D2.pairing())) throw PreconditionError("isSubdivision: pairings differ");
  if (!latticeContains(D2.period(), D1.period()))
    throw PreconditionError("isSubdivision: period of the finer decomposition is not contained in the coarser");
  const ZMat I = ZMat::identity(D1.dim());
  return mapCompatibility(I, I, D1, D2);
}

namespace detail {

/// Representatives of Z^d / M·Z^d for M of full rank.
inline std::vector<ZVec> cosetRepresentatives(const ZMat &M) {
  auto s = snf(M);
  ZMat uinv = unimodularInverse(s.U);
  auto diag = s.diagonal();
  const std::size_t d = M.rows();
  std::vector<ZVec> out;
  ZVec c(d);
  for (;;) {
    out.push_back(uinv * c);
    std::size_t i = 0;
    while (i < d) {
      if (++c[i] < diag[i]) break;
      c[i] = 0;
      ++i;
    }
    if (i == d) break;
  }
  return out;
}

} // namespace detail

/// Σ ⊓ Γ: the full-dimensional intersections ξ ∩ γ, periodic under H1 ∩ H2.
inline PeriodicDecomposition commonRefinement(const PeriodicDecomposition &D1, const PeriodicDecomposition &D2) {
  if (!(D1.pairing() == D2.pairing())) throw PreconditionError("commonRefinement: pairings differ");
  ZMat H = hnf(latticeIntersection(D1.period(), D2.period()));
  if (H.cols() != D1.dim()) throw std::logic_error("period intersection has infinite index");
  auto M = toInt(*inverse(toRat(D1.period())) * toRat(H));
  std::vector<std::pair<std::size_t, ZVec>> jobs;
  for (std::size_t i = 0; i < D1.cells().size(); ++i)
    for (const auto &c : detail::cosetRepresentatives(*M)) jobs.emplace_back(i, D1.period() * c);
  std::vector<std::vector<Polytope>> pieces(jobs.size());
  parallelFor(jobs.size(), [&](std::size_t k) {
    Polytope xi = D1.cells()[jobs[k].first].translated(D1.pairing().embed(jobs[k].second));
    auto [lo, hi] = xi.boundingBox();
    for (const auto &gamma : D2.cells())
      for (const auto &t : D2.translatesMeeting(gamma, lo, hi)) {
        auto meet = intersect(xi, gamma.translated(toRat(t)));
        if (meet && meet->fullDimensional()) pieces[k].push_back(std::move(*meet));
      }
  });
  std::vector<Polytope> cells;
  for (auto &p : pieces) cells.insert(cells.end(), p.begin(), p.end());
  return PeriodicDecomposition(D1.pairing(), H, std::move(cells), "refine(" + D1.name() + "," + D2.name() + ")");
}

/// a + D, for a ∈ E.
inline PeriodicDecomposition translateBy(const QVec &a, const PeriodicDecomposition &D) {
  if (a.size() != D.dim()) throw DimensionMismatch("translation dimension differs from decomposition");
  std::vector<Polytope> cells;
  for (const auto &c : D.cells()) cells.push_back(c.translated(a));
  return PeriodicDecomposition(D.pairing(), D.period(), std::move(cells), D.name());
}

/// D1 × D2 on E1 × E2 with the block-diagonal pairing and period.
inline PeriodicDecomposition productDecomposition(const PeriodicDecomposition &D1, const PeriodicDecomposition &D2) {
  std::vector<Polytope> cells;
  for (const auto &a : D1.cells())
    for (const auto &b : D2.cells()) cells.push_back(product(a, b));
  return PeriodicDecomposition(PairingData(blockDiagonal(D1.pairing().matrix(), D2.pairing().matrix())),
                               blockDiagonal(D1.period(), D2.period()), std::move(cells),
                               D1.name() + "x" + D2.name());
}

// ---------------------------------------------------------------------------
// Built-in decompositions

enum class BuiltinKind { Box, Unit, BoxSlash, BoxBackslash, BoxAst };

inline std::optional<BuiltinKind> parseBuiltinKind(const std::string &s) {
  if (s == "box") return BuiltinKind::Box;
  if (s == "unit") return BuiltinKind::Unit;
  if (s == "boxslash") return BuiltinKind::BoxSlash;
  if (s == "boxbackslash") return BuiltinKind::BoxBackslash;
  if (s == "boxast") return BuiltinKind::BoxAst;
  return std::nullopt;
}

inline std::string builtinName(BuiltinKind k) {
  switch (k) {
  case BuiltinKind::Box: return "box";
  case BuiltinKind::Unit: return "unit";
  case BuiltinKind::BoxSlash: return "boxslash";
  case BuiltinKind::BoxBackslash: return "boxbackslash";
  case BuiltinKind::BoxAst: return "boxast";
  }
  return "";
}

/// Number of copies of E the kind lives on.
inline std::size_t builtinFactors(BuiltinKind k) {
  switch (k) {
  case BuiltinKind::BoxSlash:
  case BuiltinKind::BoxBackslash: return 2;
  case BuiltinKind::BoxAst: return 3;
  default: return 1;
  }
}

namespace detail {

inline Polytope cube(std::size_t k, const Rat &side) {
  std::vector<QVec> pts;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    QVec p(k);
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1U) p[i] = side;
    pts.push_back(std::move(p));
  }
  return hull(std::move(pts));
}

/// Splits every piece by the hyperplane normal·x = offset, keeping full-dimensional parts.
inline std::vector<Polytope> splitBy(const std::vector<Polytope> &pieces, const ZVec &normal, const Rat &offset) {
  std::vector<Polytope> out;
  for (const auto &p : pieces)
    for (int s : {1, -1}) {
      auto hs = p.halfspaces();
      hs.push_back({scale(normal, Int(s)), offset * s});
      auto q = fromHalfspaces(p.ambientDim(), hs);
      if (q && q->fullDimensional()) out.push_back(std::move(*q));
    }
  return out;
}

/// Pieces of one coordinate block [0, N]^k for the given kind.
inline std::vector<Polytope> blockPieces(BuiltinKind kind, const Int &N) {
  const Rat n(N);
  switch (kind) {
  case BuiltinKind::Box: return {cube(1, n)};
  case BuiltinKind::BoxSlash: return splitBy({cube(2, n)}, {1, -1}, 0);
  case BuiltinKind::BoxBackslash: return splitBy({cube(2, n)}, {1, 1}, n);
  case BuiltinKind::BoxAst: {
    auto p = splitBy({cube(3, n)}, {1, 1, 1}, n);
    p = splitBy(p, {1, 1, 1}, 2 * n);
    p = splitBy(p, {1, 1, 0}, n);
    return splitBy(p, {0, 1, 1}, n);
  }
  default: throw std::logic_error("no block pieces for this kind");
  }
}

} // namespace detail

/// The built-in decompositions, constructed in a Smith basis of the pairing
/// and transported back. Box, boxslash, boxbackslash and boxast use the
/// cube with side m·n_i in each Smith coordinate and period mY (on 1, 2 or
/// 3 copies of E). Unit uses the unit cubes of E with period mY.
inline PeriodicDecomposition builtin(BuiltinKind kind, const PairingData &pairing, const Int &m = 1) {
  if (m < 1) throw PreconditionError("m must be a positive integer");
  const std::size_t d = pairing.dim();
  const ZMat &B = pairing.matrix();
  if (kind == BuiltinKind::Unit) {
    std::vector<Polytope> cells;
    Polytope unitCube = detail::cube(d, 1);
    ZMat mB = B;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) mB(i, j) *= m;
    for (const auto &r : detail::cosetRepresentatives(mB)) cells.push_back(unitCube.translated(toRat(r)));
    ZMat period = ZMat::identity(d);
    for (std::size_t i = 0; i < d; ++i) period(i, i) = m;
    return PeriodicDecomposition(pairing, period, std::move(cells), "unit");
  }

  const std::size_t k = builtinFactors(kind);
  const auto &s = pairing.smith();
  auto diag = s.diagonal();
  ZMat uinv = unimodularInverse(s.U);
  std::vector<std::vector<Polytope>> blocks;
  for (std::size_t i = 0; i < d; ++i) blocks.push_back(detail::blockPieces(kind, m * diag[i]));

  // coordinate (block j, axis i) sits at j*d + i
  std::vector<Polytope> cells;
  std::vector<std::size_t> choice(d, 0);
  for (;;) {
    std::vector<QVec> pts{QVec(k * d)};
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<QVec> next;
      for (const auto &p : pts)
        for (const auto &v : blocks[i][choice[i]].vertices()) {
          QVec q = p;
          for (std::size_t j = 0; j < k; ++j) q[j * d + i] = v[j];
          next.push_back(std::move(q));
        }
      pts = std::move(next);
    }
    cells.push_back(hull(std::move(pts)));
    std::size_t i = 0;
    while (i < d) {
      if (++choice[i] < blocks[i].size()) break;
      choice[i] = 0;
      ++i;
    }
    if (i == d) break;
  }

  ZMat T = uinv, P = s.V, Bk = B;
  for (std::size_t r = 0; r < P.rows(); ++r)
    for (std::size_t c = 0; c < P.cols(); ++c) P(r, c) *= m;
  ZMat Pk = P;
  for (std::size_t j = 1; j < k; ++j) {
    T = blockDiagonal(T, uinv);
    Pk = blockDiagonal(Pk, P);
    Bk = blockDiagonal(Bk, B);
  }
  for (auto &c : cells) c = affineImage(T, QVec(k * d), c);
  return PeriodicDecomposition(PairingData(Bk), Pk, std::move(cells), builtinName(kind));
}

} // namespace degenkit
