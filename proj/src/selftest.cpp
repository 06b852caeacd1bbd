#include "degenkit/selftest.hpp"

#include "degenkit/testing/oracles.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace degenkit {

using io::Json;

namespace {

struct SuiteResult {
  std::size_t cases = 0;
  std::size_t failures = 0;
  Json firstFailure = nullptr;
  void record(bool ok, Json detail) {
    ++cases;
    if (!ok && failures++ == 0) firstFailure = std::move(detail);
  }
  Json json() const { return Json{{"cases", cases}, {"failures", failures}, {"first_failure", firstFailure}}; }
};

} // namespace

Json runSelftest(std::uint64_t seed, std::size_t cones, std::size_t pairs) {
  std::mt19937_64 rng(seed);
  SuiteResult hb, dual, dualSum, regions, roundTrip;

  for (std::size_t i = 0; i < cones; ++i) {
    const std::size_t n = 1 + i % 3;
    auto rays = oracle::randomCone(rng, n);
    std::vector<ZVec> gens;
    for (const auto &r : rays) gens.push_back(oracle::toZ(r));
    Cone c = Cone::generatedBy(gens, n);
    std::vector<oracle::V> got;
    for (const auto &e : hilbertBasis(c).elements) got.push_back(oracle::fromZ(e));
    std::sort(got.begin(), got.end());
    auto want = oracle::hilbertBasis(rays, n, 10);
    hb.record(got == want, Json{{"rays", rays}});

    std::set<oracle::V> dualRays;
    for (const auto &r : dualCone(c).rays()) dualRays.insert(oracle::fromZ(r));
    auto F = oracle::facets(rays, n);
    dual.record(dualRays == std::set<oracle::V>(F.begin(), F.end()), Json{{"rays", rays}});
  }

  for (std::size_t i = 0; i < pairs; ++i) {
    const std::size_t d = 1 + i % 3;
    for (;;) {
      Polytope p = oracle::randomGridPolytope(rng, d), q = oracle::randomGridPolytope(rng, d);
      if (!intersect(p, q)) continue;
      auto r = dualSumIdentity(p, q);
      dualSum.record(r.holds, Json{{"p", io::toJson(p)}, {"q", io::toJson(q)}});
      break;
    }
  }

  for (std::size_t d : {1U, 2U}) {
    auto classes = oracle::boxAstSignClasses(d, d == 1 ? 12 : 6);
    auto D = builtin(BuiltinKind::BoxAst, PairingData(ZMat::identity(d)));
    regions.record(oracle::countRegions(classes) == D.cells().size(),
                   Json{{"d", d}, {"regions", oracle::countRegions(classes)}, {"cells", D.cells().size()}});
  }

  for (auto kind : {BuiltinKind::Box, BuiltinKind::Unit, BuiltinKind::BoxSlash, BuiltinKind::BoxBackslash}) {
    auto D = builtin(kind, PairingData(ZMat{{2, 1}, {1, 2}}));
    std::string text = io::dump(io::toJson(D));
    std::string again = io::dump(io::toJson(io::decompositionFrom(io::parse(text))));
    roundTrip.record(text == again, Json{{"kind", builtinName(kind)}});
  }

  bool pass = hb.failures + dual.failures + dualSum.failures + regions.failures + roundTrip.failures == 0;
  return Json{{"seed", seed},
              {"pass", pass},
              {"suites", Json{{"hilbert_basis", hb.json()},
                              {"dual_cone", dual.json()},
                              {"dual_sum_identity", dualSum.json()},
                              {"boxast_regions", regions.json()},
                              {"round_trip", roundTrip.json()}}}};
}


} // namespace degenkit
