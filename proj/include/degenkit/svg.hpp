#pragma once

// Flat SVG drawing of one fundamental domain of a decomposition, d <= 2.
// Each cell translate meeting the domain is drawn and labelled with its cell index.

#include "degenkit/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace degenkit {

namespace detail {

inline double toDouble(const Rat &r) { return r.convert_to<double>(); }

inline std::string fmt(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << v;
  return s.str();
}

} // namespace detail

inline std::string fiberPlotSvg(const PeriodicDecomposition &D) {
  const std::size_t d = D.dim();
  if (d == 0 || d > 2) throw PreconditionError("plots are available for dimension 1 and 2 only");
  const ZMat &L = D.lattice();
  QVec lo(d), hi(d);
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    QVec corner(d);
    for (std::size_t j = 0; j < d; ++j)
      if (mask >> j & 1U) corner = add(std::move(corner), toRat(L.column(j)));
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], corner[i]);
      hi[i] = std::max(hi[i], corner[i]);
    }
  }
  const double W = 600, margin = 30;
  double x0 = detail::toDouble(lo[0]), x1 = detail::toDouble(hi[0]);
  double y0 = d == 2 ? detail::toDouble(lo[1]) : 0, y1 = d == 2 ? detail::toDouble(hi[1]) : 1;
  const double scale = (W - 2 * margin) / std::max(x1 - x0, y1 - y0);
  const double Hpx = d == 2 ? (y1 - y0) * scale + 2 * margin : 120;
  auto X = [&](double x) { return margin + (x - x0) * scale; };
  auto Y = [&](double y) { return Hpx - margin - (y - y0) * scale; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt(W) << "\" height=\"" << detail::fmt(Hpx)
      << "\" viewBox=\"0 0 " << detail::fmt(W) << ' ' << detail::fmt(Hpx) << "\">\n";
  svg << "<title>" << D.name() << "</title>\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (d == 1) {
    const double mid = Hpx / 2;
    svg << "<line x1=\"" << detail::fmt(X(x0)) << "\" y1=\"" << detail::fmt(mid) << "\" x2=\"" << detail::fmt(X(x1))
        << "\" y2=\"" << detail::fmt(mid) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    for (std::size_t k = 0; k < D.cells().size(); ++k) {
      const auto &c = D.cells()[k];
      for (const auto &t : D.translatesMeeting(c, lo, hi)) {
        Polytope p = c.translated(toRat(t));
        double a = std::max(x0, detail::toDouble(p.vertices().front()[0]));
        double b = std::min(x1, detail::toDouble(p.vertices().back()[0]));
        if (b <= a) continue;
        for (double v : {a, b})
          svg << "<line x1=\"" << detail::fmt(X(v)) << "\" y1=\"" << detail::fmt(mid - 8) << "\" x2=\""
              << detail::fmt(X(v)) << "\" y2=\"" << detail::fmt(mid + 8) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << detail::fmt(X((a + b) / 2)) << "\" y=\"" << detail::fmt(mid - 14)
            << "\" font-size=\"12\" text-anchor=\"middle\">" << k << "</text>\n";
      }
    }
  } else {
    svg << "<defs><clipPath id=\"domain\"><polygon points=\"";
    for (std::size_t mask : {0U, 1U, 3U, 2U}) {
      QVec corner(2);
      for (std::size_t j = 0; j < 2; ++j)
        if (mask >> j & 1U) corner = add(std::move(corner), toRat(L.column(j)));
      svg << detail::fmt(X(detail::toDouble(corner[0]))) << ',' << detail::fmt(Y(detail::toDouble(corner[1]))) << ' ';
    }
    svg << "\"/></clipPath></defs>\n<g clip-path=\"url(#domain)\">\n";
    for (std::size_t k = 0; k < D.cells().size(); ++k) {
      const auto &c = D.cells()[k];
      for (const auto &t : D.translatesMeeting(c, lo, hi)) {
        Polytope p = c.translated(toRat(t));
        std::vector<std::pair<double, double>> pts;
        for (const auto &v : p.vertices()) pts.emplace_back(detail::toDouble(v[0]), detail::toDouble(v[1]));
        double cx = 0, cy = 0;
        for (auto [x, y] : pts) cx += x, cy += y;
        cx /= static_cast<double>(pts.size());
        cy /= static_cast<double>(pts.size());
        std::sort(pts.begin(), pts.end(), [&](auto a, auto b) {
          return std::atan2(a.second - cy, a.first - cx) < std::atan2(b.second - cy, b.first - cx);
        });
        svg << "<polygon points=\"";
        for (auto [x, y] : pts) svg << detail::fmt(X(x)) << ',' << detail::fmt(Y(y)) << ' ';
        svg << "\" fill=\"none\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << detail::fmt(X(cx)) << "\" y=\"" << detail::fmt(Y(cy))
            << "\" font-size=\"12\" text-anchor=\"middle\">" << k << "</text>\n";
      }
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

} // namespace degenkit
