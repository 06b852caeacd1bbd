// degenkit command-line front end.
//
// Exit codes: 0 success or check passed, 1 check failed (the JSON output
// carries the witness), 2 usage, input or parse error.

#include "degenkit/degenkit.hpp"
#include "degenkit/selftest.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

using namespace degenkit;
using io::Json;

namespace {

struct UsageError : Error {
  using Error::Error;
};

std::string readInput(const std::string &path) {
  std::ostringstream buf;
  if (path.empty() || path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    buf << in.rdbuf();
  }
  return buf.str();
}

// Writes to a temporary file next to the target, then renames it into place.
void writeOutput(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
    out.close();
    if (!out) throw UsageError("cannot write '" + path + "'");
  }
  std::filesystem::rename(tmp, target);
}

void warn(const PairingData &p) {
  for (const auto &w : p.warnings()) std::cerr << "warning: pairing " << w << "\n";
}

PeriodicDecomposition loadDecomposition(const std::string &path) {
  auto D = io::embeddedDecomposition(io::parse(readInput(path)));
  warn(D.pairing());
  return D;
}

int emit(const std::string &out, const Json &j, bool pass = true) {
  writeOutput(out, io::dump(j));
  return pass ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Periodic polytope decompositions and their chart atlases"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string out;
  auto addOut = [&](CLI::App *c) { c->add_option("-o,--output", out, "Output file (default: stdout)"); };

  auto *cBuiltin = app.add_subcommand("builtin", "Emit a built-in decomposition");
  std::string kind = "box", pairingText;
  long m = 1;
  cBuiltin->add_option("--kind", kind, "box, unit, boxslash, boxbackslash or boxast")->capture_default_str();
  cBuiltin->add_option("--pairing", pairingText, "Pairing matrix, rows separated by ';'")->required();
  cBuiltin->add_option("--m", m, "Scale factor")->capture_default_str()->check(CLI::PositiveNumber);
  addOut(cBuiltin);

  std::string in1, in2;
  auto *cValidate = app.add_subcommand("validate", "Check the decomposition axioms");
  cValidate->add_option("input", in1, "Decomposition JSON (default: stdin)");
  addOut(cValidate);

  auto *cRefine = app.add_subcommand("refine", "Common refinement of two decompositions");
  cRefine->add_option("first", in1)->required();
  cRefine->add_option("second", in2)->required();
  addOut(cRefine);

  std::string by;
  auto *cTranslate = app.add_subcommand("translate", "Translate a decomposition by a vector of E");
  cTranslate->add_option("--by", by, "Rational vector, e.g. \"1/2 0\"")->required();
  cTranslate->add_option("input", in1);
  addOut(cTranslate);

  auto *cOrbits = app.add_subcommand("orbits", "Face orbits with their inclusions");
  cOrbits->add_option("input", in1);
  addOut(cOrbits);

  std::optional<long> level;
  auto *cAtlas = app.add_subcommand("atlas", "Chart atlas of a decomposition");
  cAtlas->add_option("input", in1);
  cAtlas->add_option("--level", level, "Truncation level recorded in the output");
  addOut(cAtlas);

  std::string plot;
  auto *cFiber = app.add_subcommand("fiber", "Special fiber strata and dual complex");
  cFiber->add_option("input", in1, "Decomposition or atlas JSON");
  cFiber->add_option("--plot", plot, "Write an SVG of the fundamental domain (d <= 2)");
  addOut(cFiber);

  std::string mapText;
  auto *cMap = app.add_subcommand("mapcheck", "Check that a lattice map sends cells into cell translates");
  cMap->add_option("--map", mapText, "Matrix of f: Y -> Y', rows separated by ';'")->required();
  cMap->add_option("source", in1)->required();
  cMap->add_option("target", in2)->required();
  addOut(cMap);

  std::string targetPairing;
  auto *cFunctor = app.add_subcommand("functor", "Transport a decomposition along a lattice map");
  cFunctor->add_option("--map", mapText, "Matrix of f: Y -> Y'")->required();
  cFunctor->add_option("--target-pairing", targetPairing, "Pairing matrix of Y'")->required();
  cFunctor->add_option("input", in1);
  addOut(cFunctor);

  std::uint64_t seed = 1;
  std::size_t cones = 50, pairs = 200;
  auto *cSelf = app.add_subcommand("selftest", "Run the brute-force oracle suites");
  cSelf->add_option("--seed", seed)->capture_default_str();
  cSelf->add_option("--cones", cones, "Random cones for the Hilbert basis and dual cone suites")->capture_default_str();
  cSelf->add_option("--pairs", pairs, "Random polytope pairs for the dual sum suite")->capture_default_str();
  addOut(cSelf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cBuiltin->parsed()) {
      PairingData p(io::parseMatrix(pairingText));
      warn(p);
      auto k = parseBuiltinKind(kind);
      if (!k) throw ParseError("unknown builtin kind '" + kind + "'");
      return emit(out, io::toJson(builtin(*k, p, m)));
    }
    if (cValidate->parsed()) {
      auto r = validate(loadDecomposition(in1));
      return emit(out, io::toJson(r), r.pass());
    }
    if (cRefine->parsed()) return emit(out, io::toJson(commonRefinement(loadDecomposition(in1), loadDecomposition(in2))));
    if (cTranslate->parsed()) return emit(out, io::toJson(translateBy(io::parseVector(by), loadDecomposition(in1))));
    if (cOrbits->parsed()) {
      auto D = loadDecomposition(in1);
      return emit(out, Json{{"decomposition", io::toJson(D)}, {"orbits", io::toJson(orbitFaces(D))}});
    }
    if (cAtlas->parsed()) {
      auto D = loadDecomposition(in1);
      try {
        return emit(out, io::toJson(buildAtlas(D, level)));
      } catch (const InvalidDecomposition &e) {
        return emit(out, Json{{"error", "invalid decomposition"}, {"report", io::toJson(e.report)}}, false);
      }
    }
    if (cFiber->parsed()) {
      auto D = loadDecomposition(in1);
      auto r = validate(D);
      if (!r.pass()) return emit(out, Json{{"error", "invalid decomposition"}, {"report", io::toJson(r)}}, false);
      auto F = specialFiber(D, orbitFaces(D));
      if (!plot.empty()) writeOutput(plot, fiberPlotSvg(D));
      return emit(out, io::toJson(F));
    }
    if (cMap->parsed()) {
      auto D1 = loadDecomposition(in1), D2 = loadDecomposition(in2);
      ZMat f = io::parseMatrix(mapText);
      if (f.rows() != D2.dim() || f.cols() != D1.dim()) throw DimensionMismatch("map has the wrong shape");
      QMat L = toRat(D2.pairing().matrix()) * toRat(f) * *inverse(toRat(D1.pairing().matrix()));
      auto r = mapCompatibility(L, f, D1, D2);
      return emit(out, io::toJson(r), r.ok);
    }
    if (cFunctor->parsed()) {
      auto D = loadDecomposition(in1);
      PairingData p2(io::parseMatrix(targetPairing));
      warn(p2);
      try {
        return emit(out, io::toJson(mappedPair(io::parseMatrix(mapText), D.pairing(), p2, D)));
      } catch (const OverlapError &e) {
        return emit(out, Json{{"error", "overlap"}, {"report", io::toJson(e.report)}}, false);
      }
    }
    if (cSelf->parsed()) {
      auto r = runSelftest(seed, cones, pairs);
      return emit(out, r, r["pass"].get<bool>());
    }
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
