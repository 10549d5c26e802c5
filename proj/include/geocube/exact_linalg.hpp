#pragma once

// Exact integer and rational linear algebra on dense matrices.
//
// Entries are GMP integers (mpz_class) or rationals (mpq_class).  Nothing in
// here ever touches floating point.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "geocube/errors.hpp"

namespace geocube {

using Int = mpz_class;
using Rat = mpq_class;

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), data_(r * c) {}
  Matrix(std::initializer_list<std::initializer_list<long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      for (long v : row) data_.emplace_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  // Columns given as vectors of equal length `r`.
  static Matrix from_columns(std::size_t r, const std::vector<std::vector<T>>& cols) {
    Matrix m(r, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < r; ++i) m(i, j) = cols[j][i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<T>& data() const { return data_; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  std::vector<std::vector<T>> columns() const {
    std::vector<std::vector<T>> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) { return sgn(x) == 0; });
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: inner dimensions differ");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (sgn(aik) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend Matrix operator-(const Matrix& a) {
    Matrix c = a;
    for (auto& x : c.data_) x = -x;
    return c;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum: shapes differ");
    Matrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
    return c;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) { return a + (-b); }

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? "," : "") << m(i, j);
      os << ']';
    }
    return os << ']';
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

template <class T>
std::vector<T> mat_vec(const Matrix<T>& a, const std::vector<T>& v) {
  std::vector<T> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (sgn(v[j]) != 0) out[i] += a(i, j) * v[j];
  return out;
}

template <class T>
Matrix<T> hconcat(const Matrix<T>& a, const Matrix<T>& b) {
  // A 0x0 operand is allowed to stand in for "no columns" of any height.
  const std::size_t r = a.cols() ? a.rows() : b.rows();
  Matrix<T> c(r, a.cols() + b.cols());
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
  }
  return c;
}

template <class T>
Matrix<T> vconcat(const Matrix<T>& a, const Matrix<T>& b) {
  const std::size_t c = a.rows() ? a.cols() : b.cols();
  Matrix<T> m(a.rows() + b.rows(), c);
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i) m(a.rows() + i, j) = b(i, j);
  }
  return m;
}

// diag(a, b)
template <class T>
Matrix<T> block_diag(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

inline RatMatrix to_rational(const IntMatrix& a) {
  RatMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = Rat(a(i, j));
  return r;
}

// ---------------------------------------------------------------------------
// Smith normal form

struct SnfResult {
  std::vector<Int> factors;  // nonzero invariant factors, each dividing the next
  IntMatrix left;            // left * A * right = diag(factors) padded with zeros
  IntMatrix right;
};

// Full decomposition, including the inverses of both transforms.  The homology
// code needs the inverses to move between the original and adapted bases.
struct SnfDecomposition {
  std::vector<Int> factors;
  std::optional<IntMatrix> left, left_inv, right, right_inv;
  std::size_t rank() const { return factors.size(); }
};

inline int cmpabs(const Int& a, const Int& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

namespace detail {

class SnfWork {
 public:
  SnfWork(const IntMatrix& a, bool transforms) : d_(a), track_(transforms) {
    if (track_) {
      l_ = IntMatrix::identity(a.rows());
      li_ = IntMatrix::identity(a.rows());
      r_ = IntMatrix::identity(a.cols());
      ri_ = IntMatrix::identity(a.cols());
    }
  }

  SnfDecomposition run() {
    const std::size_t n = std::min(d_.rows(), d_.cols());
    SnfDecomposition out;
    for (std::size_t t = 0; t < n; ++t) {
      auto piv = smallest_in_block(t);
      if (!piv) break;
      move_to(t, piv->first, piv->second);
      reduce_stage(t);
      if (sgn(d_(t, t)) < 0) negate_row(t);
      out.factors.push_back(d_(t, t));
    }
    if (track_) {
      out.left = std::move(l_);
      out.left_inv = std::move(li_);
      out.right = std::move(r_);
      out.right_inv = std::move(ri_);
    }
    return out;
  }

 private:
  // Smallest nonzero |entry| in the block rows>=t, cols>=t; row-major order
  // breaks ties, so the earliest row (then column) wins.
  std::optional<std::pair<std::size_t, std::size_t>> smallest_in_block(std::size_t t) const {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    Int best_abs;
    for (std::size_t i = t; i < d_.rows(); ++i)
      for (std::size_t j = t; j < d_.cols(); ++j) {
        const Int& x = d_(i, j);
        if (sgn(x) == 0) continue;
        if (!best || cmpabs(x, best_abs) < 0) {
          best = {i, j};
          best_abs = abs(x);
        }
      }
    return best;
  }

  void move_to(std::size_t t, std::size_t i, std::size_t j) {
    if (i != t) swap_rows(t, i);
    if (j != t) swap_cols(t, j);
  }

  void reduce_stage(std::size_t t) {
    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < d_.rows(); ++i) {
        if (sgn(d_(i, t)) == 0) continue;
        Int q = d_(i, t) / d_(t, t);
        if (sgn(q) != 0) add_row(i, t, -q);
        if (sgn(d_(i, t)) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < d_.cols(); ++j) {
        if (sgn(d_(t, j)) == 0) continue;
        Int q = d_(t, j) / d_(t, t);
        if (sgn(q) != 0) add_col(j, t, -q);
        if (sgn(d_(t, j)) != 0) dirty = true;
      }
      if (dirty) {
        // A remainder survived; it is smaller than the pivot, so promote it.
        std::size_t bi = t, bj = t;
        for (std::size_t j = t + 1; j < d_.cols(); ++j)
          if (sgn(d_(t, j)) != 0 && cmpabs(d_(t, j), d_(bi, bj)) < 0) bi = t, bj = j;
        for (std::size_t i = t + 1; i < d_.rows(); ++i)
          if (sgn(d_(i, t)) != 0 && cmpabs(d_(i, t), d_(bi, bj)) < 0) bi = i, bj = t;
        move_to(t, bi, bj);
        continue;
      }
      // Row and column are clear; the pivot must also divide the rest.
      bool fixed = false;
      for (std::size_t i = t + 1; i < d_.rows() && !fixed; ++i)
        for (std::size_t j = t + 1; j < d_.cols(); ++j) {
          if (sgn(d_(i, j)) == 0) continue;
          if (!mpz_divisible_p(d_(i, j).get_mpz_t(), d_(t, t).get_mpz_t())) {
            add_row(t, i, Int(1));
            fixed = true;
            break;
          }
        }
      if (!fixed) return;
    }
  }

  // row_dst += c * row_src
  void add_row(std::size_t dst, std::size_t src, const Int& c) {
    for (std::size_t j = 0; j < d_.cols(); ++j)
      if (sgn(d_(src, j)) != 0) d_(dst, j) += c * d_(src, j);
    if (!track_) return;
    for (std::size_t j = 0; j < l_.cols(); ++j)
      if (sgn(l_(src, j)) != 0) l_(dst, j) += c * l_(src, j);
    // L^{-1} picks up the inverse elementary matrix on the right.
    for (std::size_t i = 0; i < li_.rows(); ++i)
      if (sgn(li_(i, dst)) != 0) li_(i, src) -= c * li_(i, dst);
  }

  // col_dst += c * col_src
  void add_col(std::size_t dst, std::size_t src, const Int& c) {
    for (std::size_t i = 0; i < d_.rows(); ++i)
      if (sgn(d_(i, src)) != 0) d_(i, dst) += c * d_(i, src);
    if (!track_) return;
    for (std::size_t i = 0; i < r_.rows(); ++i)
      if (sgn(r_(i, src)) != 0) r_(i, dst) += c * r_(i, src);
    for (std::size_t j = 0; j < ri_.cols(); ++j)
      if (sgn(ri_(dst, j)) != 0) ri_(src, j) -= c * ri_(dst, j);
  }

  void swap_rows(std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < d_.cols(); ++j) std::swap(d_(a, j), d_(b, j));
    if (!track_) return;
    for (std::size_t j = 0; j < l_.cols(); ++j) std::swap(l_(a, j), l_(b, j));
    for (std::size_t i = 0; i < li_.rows(); ++i) std::swap(li_(i, a), li_(i, b));
  }

  void swap_cols(std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < d_.rows(); ++i) std::swap(d_(i, a), d_(i, b));
    if (!track_) return;
    for (std::size_t i = 0; i < r_.rows(); ++i) std::swap(r_(i, a), r_(i, b));
    for (std::size_t j = 0; j < ri_.cols(); ++j) std::swap(ri_(a, j), ri_(b, j));
  }

  void negate_row(std::size_t a) {
    for (std::size_t j = 0; j < d_.cols(); ++j) d_(a, j) = -d_(a, j);
    if (!track_) return;
    for (std::size_t j = 0; j < l_.cols(); ++j) l_(a, j) = -l_(a, j);
    for (std::size_t i = 0; i < li_.rows(); ++i) li_(i, a) = -li_(i, a);
  }

  IntMatrix d_, l_, li_, r_, ri_;
  bool track_;
};

}  // namespace detail

inline SnfDecomposition snf_decompose(const IntMatrix& a, bool transforms) {
  return detail::SnfWork(a, transforms).run();
}

inline std::vector<Int> snf_factors(const IntMatrix& a) { return snf_decompose(a, false).factors; }

inline SnfResult smith_normal_form(const IntMatrix& a) {
  auto d = snf_decompose(a, true);
  return SnfResult{std::move(d.factors), std::move(*d.left), std::move(*d.right)};
}

inline std::size_t integer_rank(const IntMatrix& a) { return snf_factors(a).size(); }

// Basis of {v in Z^cols : A v = 0}.  The vectors are the trailing columns of
// the unimodular right transform, so the lattice they span is saturated.
inline std::vector<std::vector<Int>> integer_kernel_basis(const IntMatrix& a) {
  auto d = snf_decompose(a, true);
  std::vector<std::vector<Int>> out;
  for (std::size_t j = d.rank(); j < a.cols(); ++j) out.push_back(d.right->column(j));
  return out;
}

// ---------------------------------------------------------------------------
// Determinants

// Bareiss fraction-free elimination; every intermediate is an exact minor.
inline int det_sign(const IntMatrix& a) {
  if (!a.square()) throw Error(ErrorCode::NonSquare, "det_sign needs a square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(m(p, k)) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j));
        mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * sgn(m(n - 1, n - 1));
}

// Scaling a column by a positive integer keeps the sign, so clear each
// column's denominators and hand the integer matrix to Bareiss.
inline int det_sign(const RatMatrix& a) {
  if (!a.square()) throw Error(ErrorCode::NonSquare, "det_sign needs a square matrix");
  IntMatrix m(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    Int l = 1;
    for (std::size_t i = 0; i < a.rows(); ++i) l = lcm(l, Int(a(i, j).get_den()));
    for (std::size_t i = 0; i < a.rows(); ++i) {
      Rat scaled = a(i, j) * l;
      m(i, j) = scaled.get_num();
    }
  }
  return det_sign(m);
}

// ---------------------------------------------------------------------------
// Rational row reduction

struct Rref {
  RatMatrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

// Reduced row echelon form; the pivot in each column is the first nonzero
// entry at or below the current row.
inline Rref rref(const RatMatrix& a) {
  RatMatrix m = a;
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  for (std::size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
    std::size_t p = row;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(p, j));
    Rat inv = 1 / m(row, c);
    for (std::size_t j = 0; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || sgn(m(i, c)) == 0) continue;
      Rat f = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    piv.push_back(c);
    ++row;
  }
  return Rref{std::move(m), std::move(piv)};
}

inline std::size_t rank(const RatMatrix& a) { return rref(a).pivots.size(); }

// Nullspace basis from the free columns of the rref, one vector per free column.
inline std::vector<std::vector<Rat>> nullspace(const RatMatrix& a) {
  auto r = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : r.pivots) is_pivot[c] = true;
  std::vector<std::vector<Rat>> out;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rat> v(a.cols());
    v[f] = 1;
    for (std::size_t k = 0; k < r.pivots.size(); ++k) v[r.pivots[k]] = -r.reduced(k, f);
    out.push_back(std::move(v));
  }
  return out;
}

// One solution X of A X = B, or nullopt when some column of B is outside the
// column space of A.  Free variables are set to zero.
inline std::optional<RatMatrix> solve(const RatMatrix& a, const RatMatrix& b) {
  auto r = rref(hconcat(a, b));
  RatMatrix x(a.cols(), b.cols());
  for (std::size_t k = 0; k < r.pivots.size(); ++k) {
    if (r.pivots[k] >= a.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(r.pivots[k], j) = r.reduced(k, a.cols() + j);
  }
  return x;
}

// Rank over the field with two elements.
inline std::size_t rank_mod2(const IntMatrix& a) {
  const std::size_t words = (a.cols() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows(a.rows(), std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (mpz_odd_p(a(i, j).get_mpz_t())) rows[i][j / 64] |= std::uint64_t(1) << (j % 64);
  std::size_t rk = 0;
  for (std::size_t c = 0; c < a.cols() && rk < rows.size(); ++c) {
    const std::uint64_t bit = std::uint64_t(1) << (c % 64);
    std::size_t p = rk;
    while (p < rows.size() && !(rows[p][c / 64] & bit)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[rk], rows[p]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != rk && (rows[i][c / 64] & bit))
        for (std::size_t w = 0; w < words; ++w) rows[i][w] ^= rows[rk][w];
    ++rk;
  }
  return rk;
}

// Clears denominators and divides out the content; the sign is kept.
inline std::vector<Int> primitive_integer_vector(const std::vector<Rat>& v) {
  Int l = 1;
  for (const auto& x : v) l = lcm(l, Int(x.get_den()));
  std::vector<Int> out(v.size());
  Int g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rat scaled = v[i] * l;
    out[i] = scaled.get_num();
    g = gcd(g, out[i]);
  }
  if (g > 1)
    for (auto& x : out) x /= g;
  return out;
}

}  // namespace geocube
