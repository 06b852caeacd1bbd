#pragma once

// Exact integer/rational scalars, dense matrices over them, and the lattice
// algebra (Smith and Hermite normal forms, saturation, kernels, basis
// completion) everything else is built on.

#include "degenkit/errors.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace degenkit {

using Int = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;

using ZVec = std::vector<Int>;
using QVec = std::vector<Rat>;

// ---------------------------------------------------------------------------
// Scalars

inline Int gcd(const Int &a, const Int &b) { return boost::multiprecision::gcd(a, b); }

inline Int lcm(const Int &a, const Int &b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / gcd(a, b) * b);
}

/// Floor division, b != 0.
inline Int floorDiv(const Int &a, const Int &b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int ceilDiv(const Int &a, const Int &b) { return -floorDiv(-a, b); }

inline Int floor(const Rat &r) {
  return floorDiv(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

inline Int ceil(const Rat &r) {
  return ceilDiv(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

inline Int num(const Rat &r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat &r) { return boost::multiprecision::denominator(r); }

inline bool isIntegral(const Rat &r) { return den(r) == 1; }

/// "p/q", or "p" when the denominator is 1.
inline std::string toString(const Rat &r) {
  if (den(r) == 1) return num(r).str();
  return num(r).str() + "/" + den(r).str();
}

inline Rat parseRat(const std::string &s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    Int p(s.substr(0, slash));
    Int q(s.substr(slash + 1));
    if (q == 0) throw ParseError("zero denominator in rational '" + s + "'");
    return Rat(p, q);
  } catch (const ParseError &) {
    throw;
  } catch (const std::exception &) {
    throw ParseError("not a rational number: '" + s + "'");
  }
}

// ---------------------------------------------------------------------------
// Vectors

template <class T> T dot(const std::vector<T> &a, const std::vector<T> &b) {
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rat dot(const ZVec &a, const QVec &b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * b[i];
  return s;
}

inline bool isZero(const ZVec &v) {
  return std::all_of(v.begin(), v.end(), [](const Int &x) { return x == 0; });
}

inline Int content(const ZVec &v) {
  Int g = 0;
  for (const auto &x : v) g = gcd(g, x);
  return g;
}

/// Divides out the content; the zero vector is returned unchanged.
inline ZVec primitive(ZVec v) {
  Int g = content(v);
  if (g > 1)
    for (auto &x : v) x /= g;
  return v;
}

/// Smallest positive integer multiple of a rational vector, made primitive.
inline ZVec primitive(const QVec &v) {
  Int l = 1;
  for (const auto &x : v) l = lcm(l, den(x));
  ZVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = num(v[i] * Rat(l));
  return primitive(std::move(out));
}

inline QVec toRat(const ZVec &v) { return QVec(v.begin(), v.end()); }

inline std::optional<ZVec> toInt(const QVec &v) {
  ZVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!isIntegral(v[i])) return std::nullopt;
    out[i] = num(v[i]);
  }
  return out;
}

template <class T> std::vector<T> add(std::vector<T> a, const std::vector<T> &b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

template <class T> std::vector<T> sub(std::vector<T> a, const std::vector<T> &b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

template <class T> std::vector<T> scale(std::vector<T> a, const T &s) {
  for (auto &x : a) x *= s;
  return a;
}

template <class T> std::vector<T> negate(std::vector<T> a) {
  for (auto &x : a) x = -x;
  return a;
}

// ---------------------------------------------------------------------------
// Matrices

template <class T> class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto &r : init) {
      if (r.size() != cols_) throw DimensionMismatch("ragged matrix initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix fromRows(const std::vector<std::vector<T>> &rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionMismatch("row length mismatch");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix fromColumns(const std::vector<std::vector<T>> &cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw DimensionMismatch("column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  static Matrix diagonal(const std::vector<T> &d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<std::vector<T>> columns() const {
    std::vector<std::vector<T>> out;
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }
  std::vector<std::vector<T>> rowList() const {
    std::vector<std::vector<T>> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Columns [first, last).
  Matrix columnRange(std::size_t first, std::size_t last) const {
    Matrix m(rows_, last - first);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = first; j < last; ++j) m(i, j - first) = (*this)(i, j);
    return m;
  }

  void swapRows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swapCols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += f * row[src]
  void addRow(std::size_t dst, std::size_t src, const T &f) {
    if (f == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += f * (*this)(src, j);
  }
  /// col[dst] += f * col[src]
  void addCol(std::size_t dst, std::size_t src, const T &f) {
    if (f == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += f * (*this)(i, src);
  }
  void negateRow(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }
  void negateCol(std::size_t j) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
  }

  friend bool operator==(const Matrix &a, const Matrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T &aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend std::vector<T> operator*(const Matrix &a, const std::vector<T> &v) {
    if (a.cols_ != v.size()) throw DimensionMismatch("matrix-vector shape mismatch");
    std::vector<T> out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
    return out;
  }

  /// Horizontal concatenation [a | b].
  friend Matrix hcat(const Matrix &a, const Matrix &b) {
    if (a.rows_ != b.rows_ && a.cols_ && b.cols_) throw DimensionMismatch("hcat row mismatch");
    std::size_t r = a.cols_ ? a.rows_ : b.rows_;
    Matrix m(r, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < a.cols_; ++j) m(i, j) = a(i, j);
      for (std::size_t j = 0; j < b.cols_; ++j) m(i, a.cols_ + j) = b(i, j);
    }
    return m;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using ZMat = Matrix<Int>;
using QMat = Matrix<Rat>;

inline QMat toRat(const ZMat &m) {
  QMat q(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) q(i, j) = m(i, j);
  return q;
}

inline std::optional<ZMat> toInt(const QMat &m) {
  ZMat z(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!isIntegral(m(i, j))) return std::nullopt;
      z(i, j) = num(m(i, j));
    }
  return z;
}

/// Block diagonal matrix diag(a, b).
template <class T> Matrix<T> blockDiagonal(const Matrix<T> &a, const Matrix<T> &b) {
  Matrix<T> m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

// ---------------------------------------------------------------------------
// Rational linear algebra

namespace detail {

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(QMat &m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.swapRows(r, p);
    Rat inv = 1 / m(r, c);
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (i != r && m(i, c) != 0) m.addRow(i, r, -m(i, c));
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

} // namespace detail

inline std::size_t rank(QMat m) { return detail::rref(m).size(); }
inline std::size_t rank(const ZMat &m) { return rank(toRat(m)); }

/// Rank of a family of vectors of common length n.
template <class T> std::size_t rankOf(const std::vector<std::vector<T>> &vecs, std::size_t n) {
  if (vecs.empty()) return 0;
  QMat m(vecs.size(), n);
  for (std::size_t i = 0; i < vecs.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = vecs[i][j];
  return rank(std::move(m));
}

/// Determinant by fraction-free (Bareiss) elimination.
inline Int det(ZMat m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swapRows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

inline Rat det(const QMat &m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  QMat a = m;
  Rat d = 1;
  const std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      a.swapRows(p, c);
      d = -d;
    }
    d *= a(c, c);
    for (std::size_t i = c + 1; i < n; ++i)
      if (a(i, c) != 0) a.addRow(i, c, -a(i, c) / a(c, c));
  }
  return d;
}

inline std::optional<QMat> inverse(const QMat &m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  QMat aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = detail::rref(aug);
  if (piv.size() < n || (n && piv[n - 1] != n - 1)) return std::nullopt;
  return aug.columnRange(n, 2 * n);
}

/// Inverse of a unimodular integer matrix.
inline ZMat unimodularInverse(const ZMat &m) {
  auto inv = inverse(toRat(m));
  if (!inv) throw PreconditionError("matrix is singular");
  auto z = toInt(*inv);
  if (!z) throw PreconditionError("matrix is not unimodular");
  return *z;
}

/// Coefficients c with A c = b, if any (A of full column rank gives uniqueness).
inline std::optional<QVec> solve(const QMat &a, const QVec &b) {
  const std::size_t n = a.rows(), k = a.cols();
  QMat aug(n, k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) aug(i, j) = a(i, j);
    aug(i, k) = b[i];
  }
  auto piv = detail::rref(aug);
  if (!piv.empty() && piv.back() == k) return std::nullopt;
  QVec c(k);
  for (std::size_t r = 0; r < piv.size(); ++r) c[piv[r]] = aug(r, k);
  return c;
}

/// Basis of the rational nullspace {x : M x = 0}.
inline std::vector<QVec> nullspace(const QMat &m) {
  QMat a = m;
  auto piv = detail::rref(a);
  std::vector<bool> isPivot(m.cols(), false);
  for (auto p : piv) isPivot[p] = true;
  std::vector<QVec> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (isPivot[f]) continue;
    QVec v(m.cols());
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

// ---------------------------------------------------------------------------
// Lattice algebra

struct SmithForm {
  ZMat S, U, V; ///< S = U * M * V
  std::size_t rank = 0;
  std::vector<Int> diagonal() const {
    std::vector<Int> d;
    for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) d.push_back(S(i, i));
    return d;
  }
};

/// Smith normal form: S = U M V, U and V unimodular, S diagonal with
/// non-negative entries s_1 | s_2 | ... .
inline SmithForm snf(const ZMat &m) {
  SmithForm r{m, ZMat::identity(m.rows()), ZMat::identity(m.cols())};
  ZMat &S = r.S;
  const std::size_t rows = S.rows(), cols = S.cols();
  std::size_t t = 0;
  for (; t < std::min(rows, cols); ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block becomes the pivot
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (S(i, j) != 0 && (pi == rows || abs(S(i, j)) < abs(S(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == rows) {
        r.rank = t;
        goto done;
      }
      S.swapRows(t, pi);
      r.U.swapRows(t, pi);
      S.swapCols(t, pj);
      r.V.swapCols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (S(i, t) == 0) continue;
        Int q = floorDiv(S(i, t), S(t, t));
        S.addRow(i, t, -q);
        r.U.addRow(i, t, -q);
        if (S(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (S(t, j) == 0) continue;
        Int q = floorDiv(S(t, j), S(t, t));
        S.addCol(j, t, -q);
        r.V.addCol(j, t, -q);
        if (S(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // divisibility: fold an offending row into the pivot row and retry
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (S(i, j) % S(t, t) != 0) {
            S.addRow(t, i, 1);
            r.U.addRow(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (S(t, t) < 0) {
      S.negateRow(t);
      r.U.negateRow(t);
    }
  }
  r.rank = t;
done:
  return r;
}

/// Column Hermite normal form of the lattice spanned by the columns of M:
/// lower-triangular echelon basis with positive pivots and reduced entries
/// left of each pivot. Zero columns are dropped, so the result has rank(M)
/// columns and is a canonical form of the lattice.
inline ZMat hnf(const ZMat &m) {
  ZMat h = m;
  const std::size_t rows = h.rows(), cols = h.cols();
  std::size_t c = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pivots; // (row, col)
  for (std::size_t i = 0; i < rows && c < cols; ++i) {
    // Euclid on row i across columns c..cols-1
    for (;;) {
      std::size_t best = cols;
      for (std::size_t j = c; j < cols; ++j)
        if (h(i, j) != 0 && (best == cols || abs(h(i, j)) < abs(h(i, best)))) best = j;
      if (best == cols) break;
      h.swapCols(c, best);
      bool done = true;
      for (std::size_t j = c + 1; j < cols; ++j) {
        if (h(i, j) == 0) continue;
        h.addCol(j, c, -floorDiv(h(i, j), h(i, c)));
        if (h(i, j) != 0) done = false;
      }
      if (done) break;
    }
    if (h(i, c) == 0) continue;
    if (h(i, c) < 0) h.negateCol(c);
    for (std::size_t j = 0; j < c; ++j) h.addCol(j, c, -floorDiv(h(i, j), h(i, c)));
    pivots.emplace_back(i, c);
    ++c;
  }
  return h.columnRange(0, c);
}

/// Basis (in Hermite normal form) of span(M) ∩ Z^n.
inline ZMat saturate(const ZMat &m) {
  if (m.cols() == 0) return ZMat(m.rows(), 0);
  auto s = snf(m);
  ZMat uinv = unimodularInverse(s.U);
  return hnf(uinv.columnRange(0, s.rank));
}

/// Basis (in Hermite normal form) of the integer kernel {v in Z^k : M v = 0}.
inline ZMat integerKernel(const ZMat &m) {
  auto s = snf(m);
  return hnf(s.V.columnRange(s.rank, m.cols()));
}

/// Index [span(M) ∩ Z^n : column lattice of M]; 0 if M has dependent columns.
inline Int latticeIndex(const ZMat &m) {
  auto s = snf(m);
  if (s.rank < m.cols()) return 0;
  Int p = 1;
  for (std::size_t i = 0; i < s.rank; ++i) p *= s.S(i, i);
  return p;
}

/// Intersection of two lattices given by column bases (HNF of the result).
inline ZMat latticeIntersection(const ZMat &a, const ZMat &b) {
  ZMat nb = b;
  for (std::size_t j = 0; j < nb.cols(); ++j) nb.negateCol(j);
  ZMat k = integerKernel(hcat(a, nb));
  ZMat coeffs = k.columnRange(0, k.cols());
  ZMat top(a.cols(), k.cols());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < k.cols(); ++j) top(i, j) = coeffs(i, j);
  return hnf(a * top);
}

/// True iff every column of `sub` lies in the lattice spanned by the columns of `lattice`.
inline bool latticeContains(const ZMat &lattice, const ZMat &sub) {
  QMat l = toRat(lattice);
  for (std::size_t j = 0; j < sub.cols(); ++j) {
    auto c = solve(l, toRat(sub.column(j)));
    if (!c || !toInt(*c)) return false;
  }
  return true;
}

/// Extends a basis of a saturated sublattice L ⊆ Z^n to a basis of Z^n and
/// returns the added columns. Standard basis vectors are tried in increasing
/// index order; if they cannot complete the basis, the complement is read off
/// a Smith normal form instead.
inline ZMat completeBasis(const ZMat &saturatedBasis) {
  const std::size_t n = saturatedBasis.rows();
  const std::size_t r = saturatedBasis.cols();
  ZMat current = saturatedBasis;
  ZMat added(n, 0);
  for (std::size_t i = 0; i < n && current.cols() < n; ++i) {
    ZMat e(n, 1);
    e(i, 0) = 1;
    ZMat trial = hcat(current, e);
    if (latticeIndex(trial) == 1) {
      current = trial;
      added = hcat(added, e);
    }
  }
  if (current.cols() == n) return added;
  // Some saturated lattices (e.g. Z·(2,3)) admit no standard completion.
  auto s = snf(saturatedBasis);
  ZMat uinv = unimodularInverse(s.U);
  return uinv.columnRange(r, n);
}

} // namespace degenkit
