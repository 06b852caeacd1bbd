#pragma once

#include "degenkit/exact.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace degenkit {

/// Pulling triangulation of a full-dimensional pointed cone (or, through
/// homogenization, a full-dimensional polytope). `gens` are the extreme
/// generators, `normals` the facet normals (normal·x >= 0). Returns index
/// sets of simplicial subcones; each has exactly dim entries. Generators are
/// pulled in index order, so triangulations of shared faces agree.
inline std::vector<std::vector<std::size_t>> pullingTriangulation(const std::vector<QVec> &gens,
                                                                  const std::vector<QVec> &normals,
                                                                  std::size_t dim) {
  std::vector<std::vector<bool>> tight(normals.size(), std::vector<bool>(gens.size(), false));
  for (std::size_t j = 0; j < normals.size(); ++j)
    for (std::size_t i = 0; i < gens.size(); ++i) tight[j][i] = dot(normals[j], gens[i]) == 0;

  auto rankOfSet = [&](const std::vector<std::size_t> &s) {
    std::vector<QVec> v;
    for (auto i : s) v.push_back(gens[i]);
    return rankOf(v, dim);
  };

  std::map<std::vector<std::size_t>, std::vector<std::vector<std::size_t>>> memo;
  auto rec = [&](auto &&self, const std::vector<std::size_t> &s,
                 std::size_t d) -> std::vector<std::vector<std::size_t>> {
    if (s.size() == d) return {s};
    if (auto it = memo.find(s); it != memo.end()) return it->second;
    const std::size_t apex = s.front();
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::vector<std::size_t>> seen;
    for (std::size_t j = 0; j < normals.size(); ++j) {
      if (tight[j][apex]) continue;
      std::vector<std::size_t> t;
      for (auto i : s)
        if (tight[j][i]) t.push_back(i);
      if (t.size() + 1 < d || t.size() == s.size()) continue;
      if (std::find(seen.begin(), seen.end(), t) != seen.end()) continue;
      if (rankOfSet(t) != d - 1) continue;
      seen.push_back(t);
      for (auto simplex : self(self, t, d - 1)) {
        simplex.insert(simplex.begin(), apex);
        out.push_back(std::move(simplex));
      }
    }
    memo.emplace(s, out);
    return out;
  };

  std::vector<std::size_t> all(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) all[i] = i;
  if (dim == 0) return {};
  return rec(rec, all, dim);
}

} // namespace degenkit
