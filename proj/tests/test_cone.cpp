#include "degenkit/cone.hpp"
#include "degenkit/testing/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace degenkit;

namespace {

Cone cone(std::vector<ZVec> gens) {
  const std::size_t n = gens.front().size();
  return Cone::generatedBy(gens, n);
}

Polytope segment(Rat a, Rat b) { return hull({QVec{a}, QVec{b}}); }

std::vector<ZVec> sorted(std::vector<ZVec> v) {
  std::sort(v.begin(), v.end());
  return v;
}

} // namespace

TEST(Cone, OverPolytope) {
  EXPECT_EQ(coneOver(segment(0, 1)), cone({{1, 0}, {1, 1}}));
  EXPECT_EQ(coneOver(segment(0, 1)).extremeRays(), sorted({{1, 0}, {1, 1}}));
  EXPECT_EQ(coneOver(hull({QVec{0}})).extremeRays(), (std::vector<ZVec>{{1, 0}}));
  EXPECT_EQ(coneOver(segment(0, 2)).extremeRays(), sorted({{1, 0}, {1, 2}}));
  EXPECT_EQ(coneOver(segment(0, Rat(1, 2))).extremeRays(), sorted({{1, 0}, {2, 1}}));
}

TEST(Cone, DualExamples) {
  EXPECT_EQ(dualCone(cone({{1, 0}, {1, 1}})), cone({{0, 1}, {1, -1}}));
  Cone whole = cone({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  EXPECT_TRUE(whole.extremeRays().empty());
  EXPECT_EQ(whole.lineality().size(), 2U);
  Cone zero = dualCone(whole);
  EXPECT_TRUE(zero.rays().empty());
  EXPECT_EQ(zero.dimension(), 0U);
  EXPECT_EQ(dualCone(cone({{1, 1}, {1, 2}})), cone({{-1, 1}, {2, -1}}));
}

TEST(Cone, DualIsInvolution) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> e(-4, 4);
  for (int it = 0; it < 120; ++it) {
    const std::size_t n = 1 + it % 4;
    std::vector<ZVec> gens(1 + it % 5, ZVec(n));
    for (auto &g : gens)
      for (auto &x : g) x = e(rng);
    Cone c = Cone::generatedBy(gens, n);
    EXPECT_EQ(dualCone(dualCone(c)), c);
    for (const auto &g : gens) EXPECT_TRUE(c.contains(g));
  }
}

TEST(Cone, DualMatchesBruteForceFacets) {
  std::mt19937_64 rng(22);
  for (int it = 0; it < 60; ++it) {
    const std::size_t n = 1 + it % 3;
    auto rays = oracle::randomCone(rng, n);
    std::vector<ZVec> gens;
    for (const auto &r : rays) gens.push_back(oracle::toZ(r));
    std::vector<ZVec> want;
    for (const auto &f : oracle::facets(rays, n)) want.push_back(oracle::toZ(f));
    EXPECT_EQ(sorted(dualCone(Cone::generatedBy(gens, n)).rays()), sorted(want));
  }
}

TEST(HilbertBasis, Examples) {
  EXPECT_EQ(hilbertBasis(cone({{0, 1}, {1, -1}})).elements, sorted({{0, 1}, {1, -1}}));
  EXPECT_EQ(hilbertBasis(cone({{0, 1}, {2, -1}})).elements, sorted({{0, 1}, {1, 0}, {2, -1}}));
  Cone half = Cone::fromInequalities({{1, 0}}, 2);
  EXPECT_EQ(hilbertBasis(half).elements, sorted({{1, 0}, {0, 1}, {0, -1}}));
}

TEST(HilbertBasis, MatchesBruteForceEnumeration) {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 60; ++it) {
    const std::size_t n = 1 + it % 3;
    auto rays = oracle::randomCone(rng, n);
    std::vector<ZVec> gens;
    for (const auto &r : rays) gens.push_back(oracle::toZ(r));
    std::vector<oracle::V> got;
    for (const auto &g : hilbertBasis(Cone::generatedBy(gens, n)).elements) got.push_back(oracle::fromZ(g));
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, oracle::hilbertBasis(rays, n, 10));
  }
}

TEST(HilbertBasis, LowerDimensionalAndNonPointed) {
  // a ray inside Z^3 and a 2-cone in a plane of Z^3
  EXPECT_EQ(hilbertBasis(cone({{2, 4, 6}})).elements, (std::vector<ZVec>{{1, 2, 3}}));
  EXPECT_EQ(hilbertBasis(cone({{1, 0, 0}, {1, 2, 0}})).elements, sorted({{1, 0, 0}, {1, 1, 0}, {1, 2, 0}}));
  // line plus ray with a non-standard lattice quotient
  auto b = hilbertBasis(cone({{1, 1}, {-1, -1}, {0, 1}}));
  EXPECT_EQ(b.elements.size(), 3U);
  EXPECT_EQ(std::count(b.elements.begin(), b.elements.end(), ZVec{1, 1}), 1);
  EXPECT_EQ(std::count(b.elements.begin(), b.elements.end(), ZVec{-1, -1}), 1);
  // every lattice point is a non-negative combination
  Cone c = cone({{1, 2}, {-1, -2}, {1, 0}});
  auto hb = hilbertBasis(c);
  std::vector<oracle::V> gens;
  for (const auto &g : hb.elements) gens.push_back(oracle::fromZ(g));
  auto reach = oracle::semigroupInBox(gens, 2, 12);
  for (int x = -6; x <= 6; ++x)
    for (int y = -6; y <= 6; ++y)
      if (c.contains(ZVec{x, y})) EXPECT_TRUE(reach.count({x, y})) << x << "," << y;
}

TEST(Relations, Examples) {
  MonoidBasis tate = withPi(hilbertBasis(cone({{0, 1}, {1, -1}})));
  ASSERT_TRUE(tate.piIndex);
  auto rel = relationLattice(tate);
  ASSERT_EQ(rel.size(), 1U);
  // elements sorted: (0,1), (1,-1), (1,0)
  ZVec r = rel[0];
  if (r[0] < 0) r = negate(r);
  EXPECT_EQ(r, (ZVec{1, 1, -1}));

  MonoidBasis unimodular = hilbertBasis(cone({{1, 0}, {0, 1}}));
  EXPECT_TRUE(relationLattice(unimodular).empty());

  MonoidBasis box = hilbertBasis(cone({{0, 1}, {2, -1}}));
  rel = relationLattice(box);
  ASSERT_EQ(rel.size(), 1U);
  r = rel[0];
  if (r[0] < 0) r = negate(r);
  EXPECT_EQ(r, (ZVec{1, -2, 1}));
}

TEST(Relations, AreRelations) {
  std::mt19937_64 rng(24);
  for (int it = 0; it < 30; ++it) {
    const std::size_t n = 1 + it % 3;
    auto rays = oracle::randomCone(rng, n);
    std::vector<ZVec> gens;
    for (const auto &r : rays) gens.push_back(oracle::toZ(r));
    auto b = hilbertBasis(Cone::generatedBy(gens, n));
    auto rel = relationLattice(b);
    EXPECT_EQ(rel.size() + rank(ZMat::fromColumns(b.elements, n)), b.elements.size());
    for (const auto &v : rel) {
      ZVec s(n);
      for (std::size_t i = 0; i < v.size(); ++i) s = add(std::move(s), scale(b.elements[i], v[i]));
      EXPECT_TRUE(isZero(s));
    }
  }
}

TEST(Smooth, Examples) {
  EXPECT_TRUE(isSmooth(cone({{1, 0}, {1, 1}})));
  EXPECT_FALSE(isSmooth(cone({{1, 0}, {1, 2}})));
  EXPECT_TRUE(isSmooth(cone({{1, 0}})));
  EXPECT_TRUE(isSmooth(Cone::fromInequalities({{1, 0}}, 2)));
}

TEST(Pi, MarkedExactlyOnce) {
  auto b = withPi(hilbertBasis(cone({{0, 1}, {1, -1}})));
  EXPECT_EQ(std::count(b.elements.begin(), b.elements.end(), piElement(2)), 1);
  EXPECT_EQ(b.elements[*b.piIndex], piElement(2));
  auto c = withPi(hilbertBasis(cone({{0, 1}, {2, -1}})));
  EXPECT_EQ(std::count(c.elements.begin(), c.elements.end(), piElement(2)), 1);
}

TEST(DualSum, Examples) {
  auto r = dualSumIdentity(segment(0, 1), segment(1, 2));
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.sum, Cone::fromInequalities({{1, 1}}, 2));
  EXPECT_TRUE(dualSumIdentity(segment(0, 1), segment(0, 1)).holds);
  r = dualSumIdentity(segment(0, 1), segment(Rat(1, 2), Rat(3, 2)));
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.intersection, dualCone(coneOver(segment(Rat(1, 2), 1))));
  EXPECT_THROW(dualSumIdentity(segment(0, 1), segment(2, 3)), PreconditionError);
}

TEST(DualSum, RandomIntersectingPairs) {
  std::mt19937_64 rng(25);
  int done = 0;
  while (done < 60) {
    const std::size_t d = 1 + done % 3;
    Polytope p = oracle::randomGridPolytope(rng, d), q = oracle::randomGridPolytope(rng, d);
    if (!intersect(p, q)) continue;
    EXPECT_TRUE(dualSumIdentity(p, q).holds);
    ++done;
  }
}
