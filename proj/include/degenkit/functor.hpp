#pragma once

// Transport of a periodic decomposition along a lattice map f: Y → Y'.
// The image decomposition is completed by unit cubes of a complement of the
// saturated image lattice.

#include "degenkit/decomp.hpp"

#include <string>
#include <vector>

namespace degenkit {

/// The images of the cells do not form a decomposition of the target.
class OverlapError : public Error {
public:
  explicit OverlapError(ValidationReport r)
      : Error("images of the cells do not tile the target space"), report(std::move(r)) {}
  ValidationReport report;
};

struct MappedPair {
  QMat L;             ///< induced linear map E → E'
  ZMat saturation;    ///< Hermite basis of span(f) ∩ Y'
  ZMat complement;    ///< basis of the chosen complement in Y'
  ZMat periodPrime;   ///< H' = f(H) + complement
  PeriodicDecomposition sigmaPrime;
  /// Per source cell: the target cell translate containing its image.
  std::vector<std::optional<CellRef>> witness;
};

inline MappedPair mappedPair(const ZMat &f, const PairingData &pY, const PairingData &pY2,
                             const PeriodicDecomposition &D) {
  const std::size_t d = pY.dim(), d2 = pY2.dim();
  if (!(D.pairing() == pY)) throw PreconditionError("decomposition pairing differs from the source pairing");
  if (f.rows() != d2 || f.cols() != d) throw DimensionMismatch("lattice map has the wrong shape");
  MappedPair mp;
  mp.L = toRat(pY2.matrix()) * toRat(f) * *inverse(toRat(pY.matrix()));
  mp.saturation = saturate(f);
  mp.complement = completeBasis(mp.saturation);
  mp.periodPrime = hnf(hcat(f * D.period(), mp.complement));

  std::vector<QVec> corners;
  const std::size_t k = mp.complement.cols();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    ZVec c(d2);
    for (std::size_t j = 0; j < k; ++j)
      if (mask >> j & 1U) c = add(std::move(c), mp.complement.column(j));
    corners.push_back(pY2.embed(c));
  }
  Polytope cube = hull(std::move(corners));
  std::vector<Polytope> cells;
  for (const auto &c : D.cells()) {
    Polytope image = minkowskiSum(affineImage(mp.L, QVec(d2), c), cube);
    if (image.fullDimensional()) cells.push_back(std::move(image));
  }
  mp.sigmaPrime = PeriodicDecomposition(pY2, mp.periodPrime, std::move(cells), "mapped(" + D.name() + ")");
  auto report = validate(mp.sigmaPrime);
  if (!report.pass()) throw OverlapError(std::move(report));
  for (const auto &c : D.cells()) mp.witness.push_back(mp.sigmaPrime.locate(affineImage(mp.L, QVec(d2), c)));
  return mp;
}

struct FunctorSquare {
  bool sourceSubdivision = false;
  bool targetSubdivision = false;
  /// The square holds unless the source pair is a subdivision and the target pair is not.
  bool holds() const { return !sourceSubdivision || targetSubdivision; }
};

/// Compatibility of the construction with a subdivision D1 → D2.
inline FunctorSquare subdivisionSquare(const ZMat &f, const PairingData &pY, const PairingData &pY2,
                                       const PeriodicDecomposition &D1, const PeriodicDecomposition &D2) {
  FunctorSquare sq;
  sq.sourceSubdivision = isSubdivision(D1, D2).ok;
  auto a = mappedPair(f, pY, pY2, D1);
  auto b = mappedPair(f, pY, pY2, D2);
  sq.targetSubdivision = isSubdivision(a.sigmaPrime, b.sigmaPrime).ok;
  return sq;
}

} // namespace degenkit
