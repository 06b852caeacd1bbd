#include "degenkit/io.hpp"
#include "degenkit/svg.hpp"

#include <gtest/gtest.h>

using namespace degenkit;

namespace {

std::vector<PeriodicDecomposition> fixtures() {
  std::vector<PeriodicDecomposition> out;
  for (long N : {1, 3})
    out.push_back(builtin(BuiltinKind::Unit, PairingData(ZMat{{N}})));
  out.push_back(builtin(BuiltinKind::Box, PairingData(ZMat{{2, 1}, {1, 2}})));
  out.push_back(builtin(BuiltinKind::BoxSlash, PairingData(ZMat{{3}})));
  out.push_back(builtin(BuiltinKind::BoxBackslash, PairingData(ZMat{{2}})));
  out.push_back(builtin(BuiltinKind::BoxAst, PairingData(ZMat{{1}})));
  out.push_back(translateBy(QVec{Rat(1, 3)}, builtin(BuiltinKind::Box, PairingData(ZMat{{2}}))));
  return out;
}

} // namespace

TEST(Json, Scalars) {
  EXPECT_EQ(io::toJson(Rat(3, 6)).get<std::string>(), "1/2");
  EXPECT_EQ(io::toJson(Rat(-4)).get<std::string>(), "-4");
  EXPECT_EQ(io::toJson(Int(7)).get<long long>(), 7);
  Int big = Int(1) << 100;
  EXPECT_TRUE(io::toJson(big).is_string());
  EXPECT_EQ(io::intFrom(io::toJson(big)), big);
  EXPECT_EQ(io::ratFrom(io::Json("-5/10")), Rat(-1, 2));
  EXPECT_THROW(io::intFrom(io::Json("1/2")), ParseError);
  EXPECT_THROW(io::ratFrom(io::Json(true)), ParseError);
}

TEST(Json, PolytopeSchema) {
  auto j = io::toJson(hull({QVec{0}, QVec{Rat(3, 2)}}));
  EXPECT_EQ(j["dim"], 1);
  EXPECT_EQ(j["vertices"], io::Json::parse(R"([["0"],["3/2"]])"));
  EXPECT_EQ(j["halfspaces"][0]["normal"], io::Json::parse("[-1]"));
  EXPECT_EQ(j["halfspaces"][0]["offset"], "-3/2");
  EXPECT_EQ(io::polytopeFrom(j), hull({QVec{0}, QVec{Rat(3, 2)}}));
  j["halfspaces"][0]["offset"] = "-2";
  EXPECT_THROW(io::polytopeFrom(j), ParseError);
  EXPECT_THROW(io::polytopeFrom(io::Json::parse(R"({"dim":2,"vertices":[["0"]]})")), ParseError);
}

TEST(Json, ConeAndMonoidSchema) {
  Cone c = Cone::generatedBy({{0, 1}, {1, -1}}, 2);
  auto j = io::toJson(c);
  EXPECT_EQ(io::coneFrom(j, 2), c);
  auto m = io::toJson(withPi(hilbertBasis(c)));
  EXPECT_EQ(m["gens"].size(), 3U);
  EXPECT_EQ(m["pi"], 2);
  EXPECT_EQ(m["relations"].size(), 1U);
  auto torus = io::toJson(hilbertBasis(Cone::generatedBy({{0, 1}, {0, -1}}, 2)));
  EXPECT_TRUE(torus["pi"].is_null());
}

TEST(Json, DecompositionRoundTripIsByteStable) {
  for (const auto &D : fixtures()) {
    std::string text = io::dump(io::toJson(D));
    for (int it = 0; it < 100; ++it) {
      auto back = io::decompositionFrom(io::parse(text));
      ASSERT_EQ(back, D);
      ASSERT_EQ(back.name(), D.name());
      ASSERT_EQ(io::dump(io::toJson(back)), text);
    }
  }
}

TEST(Json, AtlasAndReports) {
  auto D = builtin(BuiltinKind::Unit, PairingData(ZMat{{3}}));
  auto A = buildAtlas(D, 2);
  auto j = io::toJson(A);
  EXPECT_EQ(j["charts"].size(), 6U);
  EXPECT_EQ(j["level"], 2);
  EXPECT_TRUE(j["fiber"]["dual_graph"]["cycle"].get<bool>());
  EXPECT_EQ(io::embeddedDecomposition(j), D);
  EXPECT_EQ(io::dump(io::toJson(buildAtlas(D, 2))), io::dump(j));

  PeriodicDecomposition gap(PairingData(ZMat{{2}}), ZMat{{1}}, {hull({QVec{0}, QVec{1}})});
  auto r = io::toJson(validate(gap));
  EXPECT_FALSE(r["pass"].get<bool>());
  EXPECT_EQ(r["cover"]["uncovered"]["lo"], io::Json::parse(R"(["1"])"));
  EXPECT_EQ(r["cover"]["uncovered"]["hi"], io::Json::parse(R"(["2"])"));
}

TEST(Json, MalformedInput) {
  EXPECT_THROW(io::parse("{"), ParseError);
  EXPECT_THROW(io::decompositionFrom(io::Json::parse("{}")), ParseError);
  EXPECT_THROW(io::decompositionFrom(io::Json::parse(R"({"pairing":[[1]],"period":[[1]],"cells":[{"dim":1}]})")),
               ParseError);
  EXPECT_THROW(io::decompositionFrom(io::Json::parse(R"({"pairing":[[1,2]],"period":[[1]],"cells":[]})")),
               DimensionMismatch);
}

TEST(Text, Matrices) {
  EXPECT_EQ(io::parseMatrix("3"), (ZMat{{3}}));
  EXPECT_EQ(io::parseMatrix("2 1; 1 2"), (ZMat{{2, 1}, {1, 2}}));
  EXPECT_EQ(io::parseMatrix("-1,1"), (ZMat{{-1, 1}}));
  EXPECT_THROW(io::parseMatrix("1 2; 3"), ParseError);
  EXPECT_THROW(io::parseMatrix("1/2"), ParseError);
  EXPECT_THROW(io::parseMatrix(""), ParseError);
  EXPECT_EQ(io::parseVector("1/2 -3"), (QVec{Rat(1, 2), Rat(-3)}));
}

TEST(Svg, Plots) {
  auto one = fiberPlotSvg(builtin(BuiltinKind::Unit, PairingData(ZMat{{3}})));
  EXPECT_NE(one.find("<svg"), std::string::npos);
  auto two = fiberPlotSvg(builtin(BuiltinKind::BoxSlash, PairingData(ZMat{{2}})));
  EXPECT_NE(two.find("<polygon"), std::string::npos);
  EXPECT_EQ(two, fiberPlotSvg(builtin(BuiltinKind::BoxSlash, PairingData(ZMat{{2}}))));
  EXPECT_THROW(fiberPlotSvg(builtin(BuiltinKind::BoxSlash, PairingData(ZMat{{1, 0}, {0, 1}}))), PreconditionError);
}
