#pragma once

// Double description: extreme rays and lineality space of {x : A x >= 0}.

#include "degenkit/exact.hpp"

#include <cstdint>
#include <set>
#include <vector>

namespace degenkit {

struct RayDescription {
  std::vector<ZVec> rays;      ///< primitive extreme rays of the pointed part
  std::vector<ZVec> lineality; ///< basis of the lineality space
};

namespace detail {

class Bits {
public:
  explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void resize(std::size_t n) { words_.resize((n + 63) / 64, 0); }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  bool subsetOf(const Bits &o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }
  Bits operator&(const Bits &o) const {
    Bits r = *this;
    for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] &= o.words_[w];
    return r;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

private:
  std::vector<std::uint64_t> words_;
};

} // namespace detail

/// Extreme rays and lineality of the cone {x in Q^dim : a·x >= 0 for every row a}.
/// Incremental Motzkin double description with the combinatorial adjacency test.
inline RayDescription doubleDescription(const std::vector<ZVec> &constraintRows, std::size_t dim) {
  std::vector<ZVec> rows;
  {
    std::set<ZVec> seen;
    for (const auto &r : constraintRows) {
      if (r.size() != dim) throw DimensionMismatch("constraint length differs from dimension");
      ZVec p = primitive(r);
      if (isZero(p)) continue;
      if (seen.insert(p).second) rows.push_back(std::move(p));
    }
  }
  const std::size_t m = rows.size();

  std::vector<ZVec> lin;
  for (std::size_t i = 0; i < dim; ++i) {
    ZVec e(dim);
    e[i] = 1;
    lin.push_back(std::move(e));
  }
  struct Ray {
    ZVec v;
    detail::Bits zeros;
  };
  std::vector<Ray> rays;

  for (std::size_t k = 0; k < m; ++k) {
    const ZVec &a = rows[k];
    std::size_t pivot = lin.size();
    for (std::size_t i = 0; i < lin.size(); ++i)
      if (dot(a, lin[i]) != 0) {
        pivot = i;
        break;
      }

    if (pivot != lin.size()) {
      ZVec l0 = lin[pivot];
      Int al0 = dot(a, l0);
      if (al0 < 0) {
        l0 = negate(std::move(l0));
        al0 = -al0;
      }
      std::vector<ZVec> nextLin;
      for (std::size_t i = 0; i < lin.size(); ++i) {
        if (i == pivot) continue;
        Int al = dot(a, lin[i]);
        ZVec v = sub(scale(lin[i], al0), scale(l0, al));
        nextLin.push_back(primitive(std::move(v)));
      }
      for (auto &r : rays) {
        Int ar = dot(a, r.v);
        if (ar != 0) r.v = primitive(sub(scale(r.v, al0), scale(l0, ar)));
        r.zeros.resize(k + 1);
        r.zeros.set(k);
      }
      Ray fresh{l0, detail::Bits(k + 1)};
      for (std::size_t j = 0; j < k; ++j) fresh.zeros.set(j);
      rays.push_back(std::move(fresh));
      lin = std::move(nextLin);
      continue;
    }

    std::vector<std::size_t> pos, neg, zero;
    std::vector<Int> val(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(a, rays[i].v);
      if (val[i] > 0)
        pos.push_back(i);
      else if (val[i] < 0)
        neg.push_back(i);
      else
        zero.push_back(i);
    }
    if (neg.empty()) {
      for (auto i : zero) {
        rays[i].zeros.resize(k + 1);
        rays[i].zeros.set(k);
      }
      for (auto i : pos) rays[i].zeros.resize(k + 1);
      continue;
    }

    const std::size_t pointedDim = dim - lin.size();
    std::vector<Ray> next;
    for (auto i : pos) {
      Ray r = rays[i];
      r.zeros.resize(k + 1);
      next.push_back(std::move(r));
    }
    for (auto i : zero) {
      Ray r = rays[i];
      r.zeros.resize(k + 1);
      r.zeros.set(k);
      next.push_back(std::move(r));
    }
    for (auto p : pos)
      for (auto n : neg) {
        detail::Bits common = rays[p].zeros & rays[n].zeros;
        if (pointedDim >= 2 && common.count() + 2 < pointedDim) continue;
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size() && adjacent; ++o) {
          if (o == p || o == n) continue;
          if (common.subsetOf(rays[o].zeros)) adjacent = false;
        }
        if (!adjacent) continue;
        ZVec v = primitive(add(scale(rays[p].v, -val[n]), scale(rays[n].v, val[p])));
        Ray r{std::move(v), common};
        r.zeros.resize(k + 1);
        r.zeros.set(k);
        next.push_back(std::move(r));
      }
    rays = std::move(next);
  }

  RayDescription out;
  for (auto &r : rays) out.rays.push_back(std::move(r.v));
  out.lineality = std::move(lin);
  return out;
}

} // namespace degenkit
