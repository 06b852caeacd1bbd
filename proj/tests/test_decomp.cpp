#include "degenkit/decomp.hpp"
#include "degenkit/testing/oracles.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace degenkit;

namespace {

Polytope segment(Rat a, Rat b) { return hull({QVec{a}, QVec{b}}); }

PairingData pairing(std::initializer_list<std::initializer_list<Int>> rows) { return PairingData(ZMat(rows)); }

PeriodicDecomposition unitIntervals(long N) {
  std::vector<Polytope> cells;
  for (long k = 0; k < N; ++k) cells.push_back(segment(k, k + 1));
  return PeriodicDecomposition(pairing({{N}}), ZMat{{1}}, cells, "unit");
}

std::map<int, std::size_t> orbitCounts(const PeriodicDecomposition &D) {
  std::map<int, std::size_t> out;
  for (const auto &o : orbitFaces(D)) ++out[o.dim];
  return out;
}

} // namespace

TEST(Pairing, ShapeAndWarnings) {
  EXPECT_THROW(PairingData(ZMat{{1, 2}}), DimensionMismatch);
  EXPECT_THROW(pairing({{1, 2}, {2, 4}}), PreconditionError);
  EXPECT_TRUE(pairing({{2, 1}, {1, 2}}).warnings().empty());
  EXPECT_EQ(pairing({{1, 2}, {0, 1}}).warnings().size(), 1U);
  EXPECT_EQ(pairing({{-1}}).warnings().size(), 1U);
  auto p = pairing({{2, 0}, {0, 3}});
  EXPECT_EQ(p.embed(ZVec{1, 1}), (QVec{2, 3}));
  EXPECT_EQ(p.coordinates(QVec{4, 3}), (std::optional<ZVec>{ZVec{2, 1}}));
  EXPECT_FALSE(p.coordinates(QVec{1, 0}));
}

TEST(Decomposition, CanonicalFormIgnoresRepresentativeChoice) {
  auto a = PeriodicDecomposition(pairing({{2}}), ZMat{{1}}, {segment(0, 2)});
  auto b = PeriodicDecomposition(pairing({{2}}), ZMat{{1}}, {segment(-6, -4)});
  EXPECT_EQ(a, b);
  auto c = PeriodicDecomposition(pairing({{2}}), ZMat{{1}}, {segment(0, 2), segment(2, 4)});
  EXPECT_EQ(c.cells().size(), 1U);
  EXPECT_THROW(PeriodicDecomposition(pairing({{2}}), ZMat{{1}, {0}}, {segment(0, 2)}), DimensionMismatch);
  EXPECT_THROW(PeriodicDecomposition(pairing({{1, 0}, {0, 1}}), ZMat{{1}, {0}}, {}), PreconditionError);
}

TEST(Validate, BoxPassesForDiagonalPairings) {
  for (std::size_t d = 1; d <= 3; ++d) {
    ZMat B = ZMat::identity(d);
    for (std::size_t i = 0; i < d; ++i) B(i, i) = static_cast<long>(i + 2);
    auto r = validate(builtin(BuiltinKind::Box, PairingData(B)));
    EXPECT_TRUE(r.pass()) << d;
    EXPECT_EQ(r.topOrbits, 1U);
  }
}

TEST(Validate, MissingOrbitIsUncovered) {
  PeriodicDecomposition D(pairing({{2}}), ZMat{{1}}, {segment(0, 1)});
  auto r = validate(D);
  EXPECT_FALSE(r.pass());
  EXPECT_FALSE(r.cover);
  ASSERT_TRUE(r.uncovered);
  EXPECT_EQ(r.uncovered->first, (QVec{1}));
  EXPECT_EQ(r.uncovered->second, (QVec{2}));
}

TEST(Validate, OverlapHasWitness) {
  PeriodicDecomposition D(pairing({{2}}), ZMat{{1}}, {segment(0, 1), segment(Rat(1, 2), Rat(3, 2))});
  auto r = validate(D);
  EXPECT_FALSE(r.pass());
  EXPECT_FALSE(r.faceToFace);
  ASSERT_TRUE(r.overlap);
  auto a = D.place(r.overlap->first), b = D.place(r.overlap->second);
  auto meet = intersect(a, b);
  ASSERT_TRUE(meet);
  EXPECT_TRUE(meet->fullDimensional());
}

TEST(Validate, NonFaceIntersection) {
  // two half-squares glued along mismatched edges: [0,2]x[0,1] above [1,3]x[-1,0]
  std::vector<Polytope> cells{hull({{0, 0}, {2, 0}, {0, 1}, {2, 1}}), hull({{1, -1}, {3, -1}, {1, 0}, {3, 0}})};
  PeriodicDecomposition D(pairing({{2, 0}, {0, 2}}), ZMat::identity(2), cells);
  auto r = validate(D);
  EXPECT_TRUE(r.cover);
  EXPECT_FALSE(r.faceToFace);
  EXPECT_TRUE(r.badIntersection);
}

TEST(Validate, LowerDimensionalCellIsStructuralError) {
  PeriodicDecomposition D(pairing({{1, 0}, {0, 1}}), ZMat::identity(2), {hull({{0, 0}, {1, 1}})});
  auto r = validate(D);
  EXPECT_FALSE(r.structural);
  EXPECT_FALSE(r.errors.empty());
}

TEST(Builtin, CellCounts) {
  for (std::size_t d = 1; d <= 3; ++d) {
    PairingData p(ZMat::identity(d));
    EXPECT_EQ(builtin(BuiltinKind::BoxSlash, p).cells().size(), std::size_t{1} << d);
    EXPECT_EQ(builtin(BuiltinKind::BoxBackslash, p).cells().size(), std::size_t{1} << d);
  }
  EXPECT_EQ(builtin(BuiltinKind::BoxAst, pairing({{1}})).cells().size(), 6U);
  auto box = builtin(BuiltinKind::Box, pairing({{1, 0}, {0, 1}}), 2);
  ASSERT_EQ(box.cells().size(), 1U);
  EXPECT_EQ(box.cells()[0].volume(), 4);
  EXPECT_EQ(box.period(), (ZMat{{2, 0}, {0, 2}}));
}

TEST(Builtin, BoxSlashTriangles) {
  auto D = builtin(BuiltinKind::BoxSlash, pairing({{3}}));
  std::vector<Polytope> want{hull({{0, 0}, {3, 0}, {3, 3}}), hull({{0, 0}, {0, 3}, {3, 3}})};
  std::sort(want.begin(), want.end());
  EXPECT_EQ(D.cells(), want);
}

TEST(Builtin, AllKindsValidate) {
  std::vector<ZMat> pairings{ZMat{{1}}, ZMat{{3}}, ZMat{{2, 1}, {1, 2}}, ZMat{{1, 0}, {0, 2}}};
  for (const auto &B : pairings)
    for (auto k : {BuiltinKind::Box, BuiltinKind::Unit, BuiltinKind::BoxSlash, BuiltinKind::BoxBackslash}) {
      auto r = validate(builtin(k, PairingData(B)));
      EXPECT_TRUE(r.pass()) << builtinName(k);
    }
  EXPECT_TRUE(validate(builtin(BuiltinKind::BoxAst, pairing({{2}}))).pass());
  EXPECT_TRUE(validate(builtin(BuiltinKind::BoxSlash, pairing({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}))).pass());
  EXPECT_TRUE(validate(builtin(BuiltinKind::Box, pairing({{2}}), 3)).pass());
  EXPECT_THROW(builtin(BuiltinKind::Box, pairing({{2}}), 0), PreconditionError);
  EXPECT_FALSE(parseBuiltinKind("hexagon"));
}

TEST(Builtin, BoxAstMatchesSignRegions) {
  // each boxast cell is exactly one region of the cutting arrangement in the unit cube
  auto D = builtin(BuiltinKind::BoxAst, pairing({{1}}));
  auto classes = oracle::boxAstSignClasses(1, 12);
  EXPECT_EQ(oracle::countRegions(classes), D.cells().size());
  std::map<std::vector<int>, std::size_t> cellOf;
  std::set<std::size_t> used;
  for (const auto &[k, sign] : classes) {
    QVec p;
    for (int x : k) p.push_back(Rat(6 * x + 1, 72));
    auto ref = D.locate(hull({p}));
    ASSERT_TRUE(ref);
    auto [it, fresh] = cellOf.emplace(sign, ref->cell);
    EXPECT_EQ(it->second, ref->cell);
    if (fresh) EXPECT_TRUE(used.insert(ref->cell).second);
  }
}

TEST(Orbits, TateIntervals) {
  for (long N : {1, 2, 3, 5}) {
    auto counts = orbitCounts(unitIntervals(N));
    EXPECT_EQ(counts[0], static_cast<std::size_t>(N));
    EXPECT_EQ(counts[1], static_cast<std::size_t>(N));
  }
}

TEST(Orbits, BoxAndBoxSlash) {
  auto box1 = orbitCounts(builtin(BuiltinKind::Box, pairing({{4}})));
  EXPECT_EQ(box1, (std::map<int, std::size_t>{{0, 1}, {1, 1}}));
  auto box2 = orbitCounts(builtin(BuiltinKind::Box, pairing({{1, 0}, {0, 1}})));
  EXPECT_EQ(box2, (std::map<int, std::size_t>{{0, 1}, {1, 2}, {2, 1}}));
  auto bs = orbitCounts(builtin(BuiltinKind::BoxSlash, pairing({{2}})));
  EXPECT_EQ(bs, (std::map<int, std::size_t>{{0, 1}, {1, 3}, {2, 2}}));
}

TEST(Orbits, SortedAndParentsAreFaces) {
  auto D = builtin(BuiltinKind::BoxSlash, pairing({{2}}));
  auto orbits = orbitFaces(D);
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    EXPECT_EQ(orbits[i].id, i);
    if (i) EXPECT_TRUE(orbits[i - 1].rep < orbits[i].rep);
    for (const auto &[p, h] : orbits[i].parents) {
      Polytope moved = orbits[i].rep.translated(D.pairing().embed(h));
      EXPECT_TRUE(orbits[p].rep.hasFace(moved));
      EXPECT_LT(orbits[i].dim, orbits[p].dim);
    }
  }
}

TEST(FaceClosed, Examples) {
  auto orbits = orbitFaces(unitIntervals(3));
  std::vector<std::size_t> all;
  for (const auto &o : orbits) all.push_back(o.id);
  EXPECT_EQ(faceClosedSubset(orbits, all), all);
  std::size_t edge = 0, vertex = 0;
  for (const auto &o : orbits) (o.dim == 1 ? edge : vertex) = o.id;
  auto closure = faceClosedSubset(orbits, {edge});
  EXPECT_EQ(closure.size(), 3U);
  EXPECT_EQ(faceClosedSubset(orbits, {vertex}), (std::vector<std::size_t>{vertex}));
  EXPECT_THROW(faceClosedSubset(orbits, {99}), PreconditionError);
}

TEST(Subdivision, Examples) {
  PairingData p1 = pairing({{1, 0}, {0, 1}});
  auto slash = builtin(BuiltinKind::BoxSlash, pairing({{1}}));
  auto box2 = builtin(BuiltinKind::Box, p1);
  EXPECT_TRUE(isSubdivision(slash, box2).ok);
  EXPECT_TRUE(isSubdivision(box2, box2).ok);
  auto boxY = builtin(BuiltinKind::Box, pairing({{3}}));
  PeriodicDecomposition box2Y(pairing({{3}}), ZMat{{2}}, {segment(0, 3), segment(3, 6)});
  EXPECT_TRUE(isSubdivision(box2Y, boxY).ok);
  EXPECT_FALSE(mapCompatibility(ZMat::identity(2), ZMat::identity(2), box2, slash).ok);
  EXPECT_THROW(isSubdivision(boxY, box2Y), PreconditionError);
}

TEST(MapCompatibility, ExampleMaps) {
  auto slash = builtin(BuiltinKind::BoxSlash, pairing({{3}}));
  auto backslash = builtin(BuiltinKind::BoxBackslash, pairing({{3}}));
  auto box = builtin(BuiltinKind::Box, pairing({{3}}));
  auto minus = mapCompatibility(ZMat{{-1, 1}}, std::nullopt, slash, box);
  EXPECT_TRUE(minus.ok);
  EXPECT_EQ(minus.h, (ZMat{{-1, 1}}));
  for (std::size_t i = 0; i < slash.cells().size(); ++i) {
    ASSERT_TRUE(minus.witness[i]);
    Polytope image = affineImage(ZMat{{-1, 1}}, QVec(1), slash.cells()[i]);
    EXPECT_TRUE(box.place(*minus.witness[i]).contains(image));
  }
  EXPECT_TRUE(mapCompatibility(ZMat{{1, 1}}, std::nullopt, backslash, box).ok);
  EXPECT_FALSE(mapCompatibility(ZMat{{1, 1}}, std::nullopt, slash, box).ok);
}

TEST(MapCompatibility, TwoDimensional) {
  PairingData p({{2, 1}, {1, 3}});
  ZMat m{{-1, 0, 1, 0}, {0, -1, 0, 1}}, plus{{1, 0, 1, 0}, {0, 1, 0, 1}};
  auto slash = builtin(BuiltinKind::BoxSlash, PairingData(ZMat{{1, 0}, {0, 1}}));
  auto backslash = builtin(BuiltinKind::BoxBackslash, PairingData(ZMat{{1, 0}, {0, 1}}));
  auto box = builtin(BuiltinKind::Box, PairingData(ZMat{{1, 0}, {0, 1}}));
  EXPECT_TRUE(mapCompatibility(m, std::nullopt, slash, box).ok);
  EXPECT_TRUE(mapCompatibility(plus, std::nullopt, backslash, box).ok);
}

TEST(Refinement, Examples) {
  auto unit = unitIntervals(1);
  auto half = translateBy(QVec{Rat(1, 2)}, unit);
  auto r = commonRefinement(unit, half);
  EXPECT_EQ(r.cells().size(), 2U);
  EXPECT_TRUE(validate(r).pass());
  EXPECT_EQ(commonRefinement(unit, unit), unit);
  auto box = builtin(BuiltinKind::Box, pairing({{2, 0}, {0, 2}}));
  auto slash = builtin(BuiltinKind::BoxSlash, pairing({{2}}));
  EXPECT_EQ(commonRefinement(box, slash), slash);
}

TEST(Refinement, AlgebraOnPairs) {
  std::vector<std::pair<PeriodicDecomposition, PeriodicDecomposition>> pairs;
  pairs.emplace_back(builtin(BuiltinKind::Box, pairing({{1, 0}, {0, 1}})), builtin(BuiltinKind::BoxSlash, pairing({{1}})));
  pairs.emplace_back(unitIntervals(2), translateBy(QVec{Rat(1, 2)}, unitIntervals(2)));
  pairs.emplace_back(builtin(BuiltinKind::Box, pairing({{2}}), 1), builtin(BuiltinKind::Box, pairing({{2}}), 2));
  for (const auto &[S, G] : pairs) {
    EXPECT_EQ(commonRefinement(S, S), S);
    auto SG = commonRefinement(S, G);
    EXPECT_EQ(SG, commonRefinement(G, S));
    EXPECT_TRUE(isSubdivision(SG, S).ok);
    EXPECT_TRUE(isSubdivision(SG, G).ok);
    EXPECT_TRUE(validate(SG).pass());
  }
}

TEST(Translate, Examples) {
  auto D = builtin(BuiltinKind::Box, pairing({{2}}));
  EXPECT_EQ(translateBy(QVec{0}, D), D);
  auto moved = translateBy(QVec{1}, D);
  EXPECT_EQ(moved.cells(), (std::vector<Polytope>{segment(1, 3)}));
  EXPECT_EQ(translateBy(QVec{6}, D), D);
  auto a = QVec{Rat(1, 3)}, b = QVec{Rat(5, 7)};
  EXPECT_EQ(translateBy(a, translateBy(b, D)), translateBy(add(a, b), D));
  auto S = builtin(BuiltinKind::BoxSlash, pairing({{2}}));
  QVec u{Rat(1, 2), Rat(-3, 4)}, v{Rat(2), Rat(1, 5)};
  EXPECT_EQ(translateBy(u, translateBy(v, S)), translateBy(add(u, v), S));
  EXPECT_THROW(translateBy(QVec{1, 2}, D), DimensionMismatch);
}

TEST(Product, Examples) {
  auto box1 = builtin(BuiltinKind::Box, pairing({{1}}));
  auto box2 = builtin(BuiltinKind::Box, pairing({{1, 0}, {0, 1}}));
  EXPECT_EQ(productDecomposition(box1, box1), box2);
  PeriodicDecomposition point(PairingData(ZMat(0, 0)), ZMat(0, 0), {hull({QVec{}})});
  EXPECT_EQ(productDecomposition(box1, point), box1);
  auto unit = unitIntervals(1);
  auto sq = productDecomposition(unit, unit);
  EXPECT_EQ(sq.cells().size(), 1U);
  EXPECT_TRUE(validate(sq).pass());
}

TEST(Locate, FindsContainingTranslate) {
  auto D = builtin(BuiltinKind::BoxSlash, pairing({{2}}));
  auto r = D.locate(hull({{Rat(7), Rat(1, 2)}}));
  ASSERT_TRUE(r);
  EXPECT_TRUE(D.place(*r).contains(QVec{7, Rat(1, 2)}));
  EXPECT_FALSE(D.locate(hull({{0, 0}, {3, 0}})));
}
