#pragma once

// Bounded rational polytopes with synchronized vertex and half-space
// descriptions.

#include "degenkit/dd.hpp"
#include "degenkit/exact.hpp"
#include "degenkit/triangulate.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace degenkit {

/// normal·x >= offset, normal primitive.
struct Halfspace {
  ZVec normal;
  Rat offset;

  friend bool operator==(const Halfspace &, const Halfspace &) = default;
  friend bool operator<(const Halfspace &a, const Halfspace &b) {
    if (a.normal != b.normal) return a.normal < b.normal;
    return a.offset < b.offset;
  }
  bool satisfiedBy(const QVec &x) const { return dot(normal, x) >= offset; }
  bool tightAt(const QVec &x) const { return dot(normal, x) == offset; }
};

class Polytope;
Polytope hull(std::vector<QVec> points);

class Polytope {
public:
  std::size_t ambientDim() const { return ambient_; }
  /// Affine dimension.
  int dim() const { return dim_; }
  bool fullDimensional() const { return static_cast<std::size_t>(dim_) == ambient_; }

  /// Vertices in increasing lexicographic order.
  const std::vector<QVec> &vertices() const { return vertices_; }
  /// Facet-defining inequalities, normals projected onto the direction space.
  const std::vector<Halfspace> &facets() const { return facets_; }
  /// Affine hull equations normal·x = offset (Hermite basis of normals).
  const std::vector<Halfspace> &equations() const { return equations_; }

  /// Full inequality description: each equation as a pair of opposite
  /// half-spaces, followed by the facets.
  std::vector<Halfspace> halfspaces() const {
    std::vector<Halfspace> out;
    for (const auto &e : equations_) {
      out.push_back(e);
      out.push_back({negate(e.normal), -e.offset});
    }
    out.insert(out.end(), facets_.begin(), facets_.end());
    return out;
  }

  bool contains(const QVec &x) const {
    if (x.size() != ambient_) throw DimensionMismatch("point dimension differs from polytope");
    for (const auto &e : equations_)
      if (!e.tightAt(x)) return false;
    for (const auto &f : facets_)
      if (!f.satisfiedBy(x)) return false;
    return true;
  }

  bool contains(const Polytope &other) const {
    return std::all_of(other.vertices_.begin(), other.vertices_.end(),
                       [&](const QVec &v) { return contains(v); });
  }

  /// Strictly inside the relative interior.
  bool containsRelativeInterior(const QVec &x) const {
    if (!contains(x)) return false;
    return std::none_of(facets_.begin(), facets_.end(), [&](const Halfspace &f) { return f.tightAt(x); });
  }

  Polytope translated(const QVec &t) const {
    if (t.size() != ambient_) throw DimensionMismatch("translation dimension differs from polytope");
    Polytope p = *this;
    for (auto &v : p.vertices_) v = add(std::move(v), t);
    for (auto &f : p.facets_) f.offset += dot(f.normal, t);
    for (auto &e : p.equations_) e.offset += dot(e.normal, t);
    return p;
  }

  std::pair<QVec, QVec> boundingBox() const {
    QVec lo = vertices_.front(), hi = vertices_.front();
    for (const auto &v : vertices_)
      for (std::size_t i = 0; i < ambient_; ++i) {
        lo[i] = std::min(lo[i], v[i]);
        hi[i] = std::max(hi[i], v[i]);
      }
    return {lo, hi};
  }

  QVec centroid() const {
    QVec c(ambient_);
    for (const auto &v : vertices_) c = add(std::move(c), v);
    return scale(std::move(c), Rat(1, static_cast<long>(vertices_.size())));
  }

  /// Euclidean volume in the ambient space (zero unless full-dimensional).
  Rat volume() const {
    if (!fullDimensional()) return 0;
    if (ambient_ == 0) return 1;
    std::vector<QVec> gens;
    for (const auto &v : vertices_) {
      QVec g{1};
      g.insert(g.end(), v.begin(), v.end());
      gens.push_back(std::move(g));
    }
    std::vector<QVec> normals;
    for (const auto &f : facets_) {
      QVec n{-f.offset};
      n.insert(n.end(), f.normal.begin(), f.normal.end());
      normals.push_back(std::move(n));
    }
    Rat total = 0;
    for (const auto &simplex : pullingTriangulation(gens, normals, ambient_ + 1)) {
      QMat m(ambient_ + 1, ambient_ + 1);
      for (std::size_t r = 0; r < simplex.size(); ++r)
        for (std::size_t c = 0; c <= ambient_; ++c) m(r, c) = gens[simplex[r]][c];
      Rat d = det(m);
      total += d < 0 ? -d : d;
    }
    Int fact = 1;
    for (std::size_t i = 2; i <= ambient_; ++i) fact *= i;
    return total / Rat(fact);
  }

  /// Indices of vertices tight at every facet in `facetIdx`.
  std::vector<std::size_t> verticesOnFacets(const std::vector<std::size_t> &facetIdx) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (std::all_of(facetIdx.begin(), facetIdx.end(),
                      [&](std::size_t j) { return facets_[j].tightAt(vertices_[i]); }))
        out.push_back(i);
    return out;
  }

  /// True iff `k` is a nonempty face of this polytope.
  bool hasFace(const Polytope &k) const {
    if (k.ambient_ != ambient_ || !contains(k)) return false;
    std::vector<std::size_t> tightFacets;
    for (std::size_t j = 0; j < facets_.size(); ++j)
      if (std::all_of(k.vertices_.begin(), k.vertices_.end(),
                      [&](const QVec &v) { return facets_[j].tightAt(v); }))
        tightFacets.push_back(j);
    auto idx = verticesOnFacets(tightFacets);
    if (idx.size() != k.vertices_.size()) return false;
    for (std::size_t i = 0; i < idx.size(); ++i)
      if (vertices_[idx[i]] != k.vertices_[i]) return false;
    return true;
  }

  friend bool operator==(const Polytope &a, const Polytope &b) {
    return a.ambient_ == b.ambient_ && a.vertices_ == b.vertices_;
  }
  friend bool operator<(const Polytope &a, const Polytope &b) {
    if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
    return a.vertices_ < b.vertices_;
  }

private:
  friend Polytope hull(std::vector<QVec> points);

  std::size_t ambient_ = 0;
  int dim_ = 0;
  std::vector<QVec> vertices_;
  std::vector<Halfspace> facets_;
  std::vector<Halfspace> equations_;
};

/// Convex hull with minimal vertex and exact half-space descriptions.
inline Polytope hull(std::vector<QVec> points) {
  if (points.empty()) throw PreconditionError("hull of an empty point set");
  const std::size_t n = points.front().size();
  for (const auto &p : points)
    if (p.size() != n) throw DimensionMismatch("hull: points of different dimensions");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  Polytope P;
  P.ambient_ = n;
  const QVec &p0 = points.front();

  QMat diffs(points.size() - 1, n);
  for (std::size_t i = 1; i < points.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) diffs(i - 1, j) = points[i][j] - p0[j];
  QMat reduced = diffs;
  auto pivots = detail::rref(reduced);
  const std::size_t k = pivots.size();
  P.dim_ = static_cast<int>(k);

  // affine hull equations: canonical lattice basis of the orthogonal complement
  std::vector<ZVec> eqNormals;
  if (k < n) {
    auto ns = nullspace(diffs);
    std::vector<ZVec> cols;
    for (const auto &v : ns) cols.push_back(primitive(v));
    ZMat sat = saturate(ZMat::fromColumns(cols, n));
    for (std::size_t j = 0; j < sat.cols(); ++j) {
      ZVec a = sat.column(j);
      P.equations_.push_back({a, dot(a, p0)});
      eqNormals.push_back(std::move(a));
    }
  }

  if (k == 0) {
    P.vertices_ = {p0};
    return P;
  }

  // facets of the projection onto the pivot coordinates (injective on the affine hull)
  std::vector<ZVec> gens;
  for (const auto &p : points) {
    QVec g{1};
    for (auto c : pivots) g.push_back(p[c]);
    gens.push_back(primitive(g));
  }
  auto dd = doubleDescription(gens, k + 1);

  QMat E(n, eqNormals.size());
  for (std::size_t j = 0; j < eqNormals.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) E(i, j) = eqNormals[j][i];
  std::optional<QMat> gramInv;
  if (!eqNormals.empty()) gramInv = inverse(E.transpose() * E);

  std::set<Halfspace> facetSet;
  for (const auto &r : dd.rays) {
    QVec a(n);
    for (std::size_t t = 0; t < k; ++t) a[pivots[t]] = r[t + 1];
    if (gramInv) {
      QVec coeff = (*gramInv) * (E.transpose() * a);
      a = sub(std::move(a), E * coeff);
    }
    ZVec normal = primitive(a);
    Rat off = dot(normal, points.front());
    for (const auto &p : points) off = std::min(off, dot(normal, p));
    facetSet.insert({normal, off});
  }
  P.facets_.assign(facetSet.begin(), facetSet.end());

  for (const auto &p : points) {
    std::vector<ZVec> tightNormals;
    for (const auto &f : P.facets_)
      if (f.tightAt(p)) tightNormals.push_back(f.normal);
    if (rankOf(tightNormals, n) == k) P.vertices_.push_back(p);
  }
  return P;
}

/// Polytope {x : h.normal·x >= h.offset for all h}, or nullopt if empty.
/// The system must describe a bounded set.
inline std::optional<Polytope> fromHalfspaces(std::size_t n, const std::vector<Halfspace> &hs) {
  std::vector<ZVec> rows;
  for (const auto &h : hs) {
    if (h.normal.size() != n) throw DimensionMismatch("half-space dimension mismatch");
    QVec r{-h.offset};
    r.insert(r.end(), h.normal.begin(), h.normal.end());
    rows.push_back(primitive(r));
  }
  ZVec tpos(n + 1);
  tpos[0] = 1;
  rows.push_back(tpos);
  auto dd = doubleDescription(rows, n + 1);
  if (!dd.lineality.empty()) throw PreconditionError("half-space system is unbounded");
  std::vector<QVec> verts;
  for (const auto &r : dd.rays) {
    if (r[0] == 0) {
      if (!isZero(r)) throw PreconditionError("half-space system is unbounded");
      continue;
    }
    QVec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = Rat(r[i + 1], r[0]);
    verts.push_back(std::move(v));
  }
  if (verts.empty()) return std::nullopt;
  return hull(std::move(verts));
}

/// Exact intersection; nullopt is the EMPTY polytope.
inline std::optional<Polytope> intersect(const Polytope &p, const Polytope &q) {
  if (p.ambientDim() != q.ambientDim()) throw DimensionMismatch("intersect: ambient dimensions differ");
  // quick rejection by a strictly separating facet
  auto separated = [](const Polytope &a, const Polytope &b) {
    for (const auto &f : a.facets())
      if (std::all_of(b.vertices().begin(), b.vertices().end(),
                      [&](const QVec &v) { return dot(f.normal, v) < f.offset; }))
        return true;
    for (const auto &e : a.equations()) {
      bool above = true, below = true;
      for (const auto &v : b.vertices()) {
        Rat s = dot(e.normal, v);
        above = above && s > e.offset;
        below = below && s < e.offset;
      }
      if (above || below) return true;
    }
    return false;
  };
  if (separated(p, q) || separated(q, p)) return std::nullopt;
  auto hs = p.halfspaces();
  auto hq = q.halfspaces();
  hs.insert(hs.end(), hq.begin(), hq.end());
  return fromHalfspaces(p.ambientDim(), hs);
}

/// L(P) + t for a rational matrix L.
inline Polytope affineImage(const QMat &L, const QVec &t, const Polytope &p) {
  if (L.cols() != p.ambientDim() || t.size() != L.rows())
    throw DimensionMismatch("affineImage: map does not match polytope dimension");
  std::vector<QVec> img;
  for (const auto &v : p.vertices()) img.push_back(add(L * v, t));
  return hull(std::move(img));
}

inline Polytope affineImage(const ZMat &L, const QVec &t, const Polytope &p) {
  return affineImage(toRat(L), t, p);
}

/// Cartesian product P × Q.
inline Polytope product(const Polytope &p, const Polytope &q) {
  std::vector<QVec> verts;
  for (const auto &a : p.vertices())
    for (const auto &b : q.vertices()) {
      QVec v = a;
      v.insert(v.end(), b.begin(), b.end());
      verts.push_back(std::move(v));
    }
  return hull(std::move(verts));
}

/// Minkowski sum P + Q.
inline Polytope minkowskiSum(const Polytope &p, const Polytope &q) {
  if (p.ambientDim() != q.ambientDim()) throw DimensionMismatch("minkowskiSum: dimensions differ");
  std::vector<QVec> verts;
  for (const auto &a : p.vertices())
    for (const auto &b : q.vertices()) verts.push_back(add(a, b));
  return hull(std::move(verts));
}

// ---------------------------------------------------------------------------
// Face lattice

struct Face {
  int dim = -1;                     ///< -1 for the empty face
  std::vector<std::size_t> vertices; ///< indices into the polytope's vertex list
  std::vector<std::size_t> parents;  ///< faces of dimension dim+1 containing this one
};

class FaceLattice {
public:
  FaceLattice() = default;
  FaceLattice(Polytope p, std::vector<Face> faces) : polytope_(std::move(p)), faces_(std::move(faces)) {}

  const std::vector<Face> &faces() const { return faces_; }
  std::size_t size() const { return faces_.size(); }

  /// Number of faces of each dimension 0..dim.
  std::vector<std::size_t> fVector() const {
    std::vector<std::size_t> f(static_cast<std::size_t>(polytope_.dim()) + 1, 0);
    for (const auto &face : faces_)
      if (face.dim >= 0) ++f[static_cast<std::size_t>(face.dim)];
    return f;
  }

  /// The face as a polytope (not defined for the empty face).
  Polytope polytope(std::size_t i) const {
    const auto &face = faces_.at(i);
    if (face.dim < 0) throw PreconditionError("the empty face has no polytope");
    std::vector<QVec> pts;
    for (auto v : face.vertices) pts.push_back(polytope_.vertices()[v]);
    return hull(std::move(pts));
  }

private:
  Polytope polytope_;
  std::vector<Face> faces_;
};

/// All faces (the empty face and P itself included), sorted by dimension and
/// then by vertex index set, with the cover relation recorded as parents.
inline FaceLattice faces(const Polytope &p) {
  const auto &verts = p.vertices();
  const auto &facets = p.facets();
  std::vector<std::vector<bool>> tight(facets.size(), std::vector<bool>(verts.size()));
  for (std::size_t j = 0; j < facets.size(); ++j)
    for (std::size_t i = 0; i < verts.size(); ++i) tight[j][i] = facets[j].tightAt(verts[i]);

  auto affineDim = [&](const std::vector<std::size_t> &s) -> int {
    if (s.empty()) return -1;
    std::vector<QVec> d;
    for (std::size_t i = 1; i < s.size(); ++i) d.push_back(sub(verts[s[i]], verts[s[0]]));
    return static_cast<int>(rankOf(d, p.ambientDim()));
  };

  std::map<std::vector<std::size_t>, int> dims;
  std::map<std::vector<std::size_t>, std::set<std::vector<std::size_t>>> up;
  std::vector<std::size_t> all(verts.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  dims[all] = p.dim();
  std::vector<std::vector<std::size_t>> frontier{all};
  while (!frontier.empty()) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto &s : frontier) {
      const int d = dims[s];
      if (d < 0) continue;
      if (d == 0) {
        std::vector<std::size_t> empty;
        up[empty].insert(s);
        if (!dims.count(empty)) {
          dims[empty] = -1;
          next.push_back(empty);
        }
        continue;
      }
      for (std::size_t j = 0; j < facets.size(); ++j) {
        std::vector<std::size_t> t;
        for (auto i : s)
          if (tight[j][i]) t.push_back(i);
        if (t.size() == s.size() || t.empty()) continue;
        auto known = dims.find(t);
        int td = known != dims.end() ? known->second : affineDim(t);
        if (td != d - 1) continue;
        up[t].insert(s);
        if (known == dims.end()) {
          dims[t] = td;
          next.push_back(t);
        }
      }
    }
    frontier = std::move(next);
  }

  std::vector<std::pair<int, std::vector<std::size_t>>> order;
  for (const auto &[s, d] : dims) order.emplace_back(d, s);
  std::sort(order.begin(), order.end());
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < order.size(); ++i) index[order[i].second] = i;
  std::vector<Face> out;
  for (const auto &[d, s] : order) {
    Face f{d, s, {}};
    for (const auto &par : up[s]) f.parents.push_back(index[par]);
    std::sort(f.parents.begin(), f.parents.end());
    out.push_back(std::move(f));
  }

  FaceLattice lattice(p, std::move(out));
  // Euler relation: sum_k (-1)^k f_k = 1 over the nonempty faces
  long euler = 0;
  auto fv = lattice.fVector();
  for (std::size_t k = 0; k < fv.size(); ++k) euler += (k % 2 ? -1L : 1L) * static_cast<long>(fv[k]);
  if (euler != 1) throw std::logic_error("face enumeration violates the Euler relation");
  return lattice;
}

} // namespace degenkit
