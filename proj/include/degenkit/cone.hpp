#pragma once

// Rational polyhedral cones in Q^(1+d) = Q ⊕ E, their duals, and Hilbert
// bases of the lattice points they contain. Coordinate 0 is the
// π-exponent; (1, 0, ..., 0) is the uniformizer.

#include "degenkit/dd.hpp"
#include "degenkit/exact.hpp"
#include "degenkit/poly.hpp"
#include "degenkit/triangulate.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

namespace degenkit {

namespace detail {

/// Orthogonal projection of v onto the complement of span(basis), made primitive.
inline ZVec projectOut(const ZVec &v, const std::vector<ZVec> &basis) {
  if (basis.empty()) return primitive(v);
  const std::size_t n = v.size();
  QMat B(n, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) B(i, j) = basis[j][i];
  QMat Bt = B.transpose();
  auto gramInv = inverse(Bt * B);
  QVec q = toRat(v);
  QVec coeff = (*gramInv) * (Bt * q);
  return primitive(sub(std::move(q), B * coeff));
}

inline std::vector<ZVec> canonicalLattice(const std::vector<ZVec> &vecs, std::size_t n) {
  if (vecs.empty()) return {};
  return saturate(ZMat::fromColumns(vecs, n)).columns();
}

inline std::vector<ZVec> canonicalRays(const std::vector<ZVec> &rays, const std::vector<ZVec> &lin) {
  std::set<ZVec> out;
  for (const auto &r : rays) {
    ZVec p = projectOut(r, lin);
    if (!isZero(p)) out.insert(std::move(p));
  }
  return {out.begin(), out.end()};
}

} // namespace detail

class Cone {
public:
  /// The cone generated by `gens` (all of length dim).
  static Cone generatedBy(const std::vector<ZVec> &gens, std::size_t dim) {
    for (const auto &g : gens)
      if (g.size() != dim) throw DimensionMismatch("cone generator of wrong length");
    auto facetSide = doubleDescription(gens, dim);
    std::vector<ZVec> rows = facetSide.rays;
    for (const auto &l : facetSide.lineality) {
      rows.push_back(l);
      rows.push_back(negate(l));
    }
    auto raySide = doubleDescription(rows, dim);
    Cone c;
    c.dim_ = dim;
    c.lineality_ = detail::canonicalLattice(raySide.lineality, dim);
    c.equations_ = detail::canonicalLattice(facetSide.lineality, dim);
    c.rays_ = detail::canonicalRays(raySide.rays, c.lineality_);
    c.facets_ = detail::canonicalRays(facetSide.rays, c.equations_);
    return c;
  }

  /// {x : n·x >= 0 for every n in normals}.
  static Cone fromInequalities(const std::vector<ZVec> &normals, std::size_t dim) {
    return generatedBy(normals, dim).dual();
  }

  std::size_t ambientDim() const { return dim_; }

  /// Extreme rays of the pointed part, orthogonal to the lineality space.
  const std::vector<ZVec> &extremeRays() const { return rays_; }
  /// Hermite basis of the lattice of the lineality space.
  const std::vector<ZVec> &lineality() const { return lineality_; }
  /// Facet normals, orthogonal to the equation space.
  const std::vector<ZVec> &facetNormals() const { return facets_; }
  /// Hermite basis of the lattice of normals vanishing on the cone.
  const std::vector<ZVec> &equations() const { return equations_; }

  /// Minimal generating list: extreme rays plus ± each lineality generator.
  std::vector<ZVec> rays() const {
    std::vector<ZVec> out = rays_;
    for (const auto &l : lineality_) {
      out.push_back(l);
      out.push_back(negate(l));
    }
    return out;
  }

  /// Minimal inequality list: facet normals plus ± each equation.
  std::vector<ZVec> facets() const {
    std::vector<ZVec> out = facets_;
    for (const auto &e : equations_) {
      out.push_back(e);
      out.push_back(negate(e));
    }
    return out;
  }

  bool pointed() const { return lineality_.empty(); }
  std::size_t dimension() const { return dim_ - equations_.size(); }
  bool fullDimensional() const { return equations_.empty(); }

  template <class V> bool contains(const V &x) const {
    if (x.size() != dim_) throw DimensionMismatch("point length differs from cone dimension");
    for (const auto &e : equations_)
      if (dotMixed(e, x) != 0) return false;
    for (const auto &f : facets_)
      if (dotMixed(f, x) < 0) return false;
    return true;
  }

  Cone dual() const {
    Cone c;
    c.dim_ = dim_;
    c.rays_ = facets_;
    c.lineality_ = equations_;
    c.facets_ = rays_;
    c.equations_ = lineality_;
    return c;
  }

  friend bool operator==(const Cone &, const Cone &) = default;

private:
  static Int dotMixed(const ZVec &a, const ZVec &b) { return dot(a, b); }
  static Rat dotMixed(const ZVec &a, const QVec &b) { return dot(a, b); }

  std::size_t dim_ = 0;
  std::vector<ZVec> rays_, lineality_, facets_, equations_;
};

/// C(P): the cone in Q ⊕ E generated by {(1, v) : v vertex of P}.
inline Cone coneOver(const Polytope &p) {
  std::vector<ZVec> gens;
  for (const auto &v : p.vertices()) {
    QVec g{1};
    g.insert(g.end(), v.begin(), v.end());
    gens.push_back(primitive(g));
  }
  return Cone::generatedBy(gens, p.ambientDim() + 1);
}

inline Cone dualCone(const Cone &c) { return c.dual(); }

/// Cone generated by the union of the generators (Minkowski sum).
inline Cone coneSum(const Cone &a, const Cone &b) {
  if (a.ambientDim() != b.ambientDim()) throw DimensionMismatch("coneSum: dimensions differ");
  auto gens = a.rays();
  auto rb = b.rays();
  gens.insert(gens.end(), rb.begin(), rb.end());
  return Cone::generatedBy(gens, a.ambientDim());
}

// ---------------------------------------------------------------------------
// Monoids

struct MonoidBasis {
  std::size_t dim = 0;
  std::vector<ZVec> elements;
  std::optional<std::size_t> piIndex; ///< position of (1,0,...,0), if present

  friend bool operator==(const MonoidBasis &, const MonoidBasis &) = default;
};

inline ZVec piElement(std::size_t dim) {
  ZVec e(dim);
  if (dim) e[0] = 1;
  return e;
}

inline std::optional<std::size_t> findPi(const std::vector<ZVec> &elements, std::size_t dim) {
  const ZVec pi = piElement(dim);
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == pi) return i;
  return std::nullopt;
}

/// Appends π when it is not already an element and records its position.
inline MonoidBasis withPi(MonoidBasis b) {
  b.piIndex = findPi(b.elements, b.dim);
  if (!b.piIndex) {
    b.elements.push_back(piElement(b.dim));
    b.piIndex = b.elements.size() - 1;
  }
  return b;
}

namespace detail {

/// Hilbert basis of a full-dimensional pointed cone in Z^k, given its
/// extreme rays and facet normals: pulling triangulation, lattice points
/// of each half-open fundamental parallelepiped, then removal of every
/// candidate that splits off another candidate inside the cone.
inline std::vector<ZVec> pointedHilbertBasis(const std::vector<ZVec> &rays, const std::vector<ZVec> &facets,
                                             std::size_t k) {
  if (k == 0) return {};
  std::vector<QVec> qr, qf;
  for (const auto &r : rays) qr.push_back(toRat(r));
  for (const auto &f : facets) qf.push_back(toRat(f));
  std::set<ZVec> cand(rays.begin(), rays.end());

  for (const auto &simplex : pullingTriangulation(qr, qf, k)) {
    ZMat M(k, k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < k; ++i) M(i, j) = rays[simplex[j]][i];
    auto s = snf(M);
    ZMat uinv = unimodularInverse(s.U);
    QMat Minv = *inverse(toRat(M));
    QMat Mq = toRat(M);
    std::vector<Int> d = s.diagonal();
    ZVec c(k);
    // odometer over prod_i [0, d_i)
    for (;;) {
      ZVec x = uinv * c;
      QVec lambda = Minv * toRat(x);
      for (auto &l : lambda) l -= Rat(floor(l));
      auto p = toInt(Mq * lambda);
      if (p && !isZero(*p)) cand.insert(*p);
      std::size_t i = 0;
      while (i < k) {
        if (++c[i] < d[i]) break;
        c[i] = 0;
        ++i;
      }
      if (i == k) break;
    }
  }

  auto inCone = [&](const ZVec &x) {
    return std::all_of(facets.begin(), facets.end(), [&](const ZVec &f) { return dot(f, x) >= 0; });
  };
  std::vector<ZVec> g(cand.begin(), cand.end());
  std::vector<ZVec> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool reducible = false;
    for (std::size_t j = 0; j < g.size() && !reducible; ++j)
      if (j != i && inCone(sub(g[i], g[j]))) reducible = true;
    if (!reducible) out.push_back(g[i]);
  }
  return out;
}

/// Coordinates of a cone relative to its span lattice, split as
/// (lineality lattice) ⊕ (complement), so the quotient cone is pointed and
/// full-dimensional.
struct QuotientFrame {
  std::size_t n = 0, r = 0, l = 0;
  ZMat spanBasis;  ///< n × r basis of span ∩ Z^n
  ZMat W, Winv;    ///< r × r unimodular, first l columns span the lineality lattice
  std::vector<ZVec> linealityBasis;

  ZVec quotientCoords(const ZVec &x) const {
    auto w = solve(toRat(spanBasis), toRat(x));
    if (!w) throw PreconditionError("vector outside the cone's span");
    ZVec z = Winv * *toInt(*w);
    return ZVec(z.begin() + static_cast<long>(l), z.end());
  }

  ZVec lift(const ZVec &beta) const {
    ZVec full(r);
    for (std::size_t i = 0; i < beta.size(); ++i) full[l + i] = beta[i];
    return spanBasis * (W * full);
  }
};

inline QuotientFrame quotientFrame(const Cone &c) {
  QuotientFrame f;
  f.n = c.ambientDim();
  auto gens = c.rays();
  if (gens.empty()) return f;
  f.spanBasis = saturate(ZMat::fromColumns(gens, f.n));
  f.r = f.spanBasis.cols();
  f.linealityBasis = c.lineality();
  f.l = f.linealityBasis.size();
  QMat B = toRat(f.spanBasis);
  ZMat P(f.r, f.l);
  for (std::size_t j = 0; j < f.l; ++j) {
    auto coords = toInt(*solve(B, toRat(f.linealityBasis[j])));
    for (std::size_t i = 0; i < f.r; ++i) P(i, j) = (*coords)[i];
  }
  f.W = hcat(P, completeBasis(P));
  f.Winv = unimodularInverse(f.W);
  return f;
}

} // namespace detail

/// Generators of C ∩ Z^n. For pointed C this is the unique minimal
/// generating set; otherwise it is ± a lattice basis of the lineality space
/// plus lifts of the Hilbert basis of the pointed quotient. Sorted
/// lexicographically.
inline MonoidBasis hilbertBasis(const Cone &c) {
  MonoidBasis mb;
  mb.dim = c.ambientDim();
  auto frame = detail::quotientFrame(c);
  std::set<ZVec> out;
  for (const auto &l : frame.linealityBasis) {
    out.insert(l);
    out.insert(negate(l));
  }
  const std::size_t q = frame.r - frame.l;
  if (q > 0) {
    std::vector<ZVec> qgens;
    for (const auto &ray : c.extremeRays()) qgens.push_back(primitive(frame.quotientCoords(ray)));
    Cone qc = Cone::generatedBy(qgens, q);
    for (const auto &b : detail::pointedHilbertBasis(qc.extremeRays(), qc.facetNormals(), q))
      out.insert(frame.lift(b));
  }
  mb.elements.assign(out.begin(), out.end());
  mb.piIndex = findPi(mb.elements, mb.dim);
  return mb;
}

/// Lattice basis of the integer relations sum_i v_i g_i = 0 among the
/// generators; each relation is a binomial between its positive and
/// negative parts.
inline std::vector<ZVec> relationLattice(const MonoidBasis &b) {
  if (b.elements.empty()) return {};
  return integerKernel(ZMat::fromColumns(b.elements, b.dim)).columns();
}

/// True iff C is generated by part of a lattice basis (after splitting off
/// its lineality space).
inline bool isSmooth(const Cone &c) {
  auto frame = detail::quotientFrame(c);
  if (c.extremeRays().empty()) return true;
  std::vector<ZVec> qr;
  for (const auto &ray : c.extremeRays()) qr.push_back(primitive(frame.quotientCoords(ray)));
  return latticeIndex(ZMat::fromColumns(qr, frame.r - frame.l)) == 1;
}

struct DualSumResult {
  bool holds = false;
  Cone sum;          ///< C(P)^∨ + C(Q)^∨
  Cone intersection; ///< C(P ∩ Q)^∨
  Cone dualP, dualQ;
};

/// Compares C(P)^∨ + C(Q)^∨ with C(P ∩ Q)^∨.
inline DualSumResult dualSumIdentity(const Polytope &p, const Polytope &q) {
  auto meet = intersect(p, q);
  if (!meet) throw PreconditionError("dualSumIdentity: the polytopes do not intersect");
  DualSumResult r;
  r.dualP = dualCone(coneOver(p));
  r.dualQ = dualCone(coneOver(q));
  r.sum = coneSum(r.dualP, r.dualQ);
  r.intersection = dualCone(coneOver(*meet));
  r.holds = r.sum == r.intersection;
  return r;
}

} // namespace degenkit
