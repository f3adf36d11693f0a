#pragma once
// Exact integer / rational matrix algebra.
//
// Every quantity in the library is an arbitrary-precision integer or an exact
// rational; there is no floating point anywhere.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace fmlat {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Thrown when an input violates an operation's precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline Int numerator(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int denominator(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Int abs(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int gcd(Int a, Int b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    Int t = a % b;
    a = std::move(b);
    b = std::move(t);
  }
  return a;
}

inline Int lcm(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

/// Floor division for integers (rounds toward negative infinity).
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Non-negative residue of a modulo m (m > 0).
inline Int mod(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

inline Int floor(const Rat& r) { return floor_div(numerator(r), denominator(r)); }
inline Int ceil(const Rat& r) { return -floor_div(-numerator(r), denominator(r)); }

/// Largest s with s*s <= n, for n >= 0.
inline Int isqrt(const Int& n) {
  if (n < 0) throw PreconditionError("isqrt of a negative number");
  if (n < 2) return n;
  Int s = boost::multiprecision::sqrt(n);
  while (s * s > n) --s;
  while ((s + 1) * (s + 1) <= n) ++s;
  return s;
}

inline bool is_square(const Int& n) {
  if (n < 0) return false;
  Int s = isqrt(n);
  return s * s == n;
}

/// p-adic valuation of a nonzero integer.
inline int valuation(Int n, const Int& p) {
  if (n == 0) throw PreconditionError("valuation of zero");
  int v = 0;
  n = abs(n);
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

/// p-adic valuation of a nonzero rational.
inline int valuation(const Rat& r, const Int& p) {
  return valuation(numerator(r), p) - valuation(denominator(r), p);
}

/// Prime divisors of |n| in increasing order (trial division; inputs are small).
inline std::vector<Int> prime_divisors(Int n) {
  n = abs(n);
  std::vector<Int> ps;
  for (Int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

/// Legendre symbol (a/p) for an odd prime p.
inline int legendre(const Int& a, const Int& p) {
  Int r = mod(a, p);
  if (r == 0) return 0;
  Int e = (p - 1) / 2;
  Int result = boost::multiprecision::powm(r, e, p);
  return result == 1 ? 1 : -1;
}

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) throw PreconditionError("matrix entry count mismatch");
  }
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw PreconditionError("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<T>& entries() const { return data_; }

  std::vector<T> row(std::size_t r) const {
    return std::vector<T>(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
  }
  std::vector<T> col(std::size_t c) const {
    std::vector<T> v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
  }
  /// row[dst] += k * row[src]
  void add_row(std::size_t dst, std::size_t src, const T& k) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(dst, c) += k * (*this)(src, c);
  }
  /// col[dst] += k * col[src]
  void add_col(std::size_t dst, std::size_t src, const T& k) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, dst) += k * (*this)(r, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = -(*this)(r, c);
  }
  void negate_col(std::size_t c) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = -(*this)(r, c);
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  bool is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = r + 1; c < cols_; ++c)
        if ((*this)(r, c) != (*this)(c, r)) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw PreconditionError("matrix product dimension mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw PreconditionError("matrix sum dimension mismatch");
    Matrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
    return out;
  }
  Matrix scaled(const T& s) const {
    Matrix out = *this;
    for (auto& x : out.data_) x *= s;
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;
using IntVector = std::vector<Int>;
using RatVector = std::vector<Rat>;

inline RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
  return r;
}

/// Matrix-vector product.
template <class T, class U>
std::vector<U> mul(const Matrix<T>& m, const std::vector<U>& v) {
  if (m.cols() != v.size()) throw PreconditionError("matrix-vector dimension mismatch");
  std::vector<U> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += U(m(i, j)) * v[j];
  return out;
}

/// x^T M y
template <class T, class U>
U bilinear(const Matrix<T>& m, const std::vector<U>& x, const std::vector<U>& y) {
  auto my = mul(m, y);
  U s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * my[i];
  return s;
}

/// Block-diagonal sum.
template <class T>
Matrix<T> block_diagonal(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> out(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, a.cols() + j) = b(i, j);
  return out;
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Int determinant(const IntMatrix& m) {
  if (!m.is_square()) throw PreconditionError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

/// Exact inverse over the rationals (Gauss–Jordan).
inline RatMatrix rational_inverse(const RatMatrix& m) {
  if (!m.is_square()) throw PreconditionError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  RatMatrix a = m;
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) throw PreconditionError("singular matrix has no inverse");
    a.swap_rows(c, p);
    inv.swap_rows(c, p);
    Rat piv = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c) == 0) continue;
      Rat f = a(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

inline RatMatrix rational_inverse(const IntMatrix& m) { return rational_inverse(to_rational(m)); }

/// Result of a Smith normal form computation: U * M * V = S.
struct SmithForm {
  IntMatrix S;
  IntMatrix U;
  IntMatrix V;
  /// Nonzero diagonal entries d1 | d2 | ... (all positive).
  IntVector invariant_factors() const {
    IntVector d;
    for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i)
      if (S(i, i) != 0) d.push_back(S(i, i));
    return d;
  }
};

/// Smith normal form with unimodular transforms. Pivot: smallest nonzero
/// absolute value, ties broken by lowest row then lowest column.
inline SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  IntMatrix s = m;
  IntMatrix u = IntMatrix::identity(rows);
  IntMatrix v = IntMatrix::identity(cols);
  const std::size_t diag = std::min(rows, cols);

  for (std::size_t t = 0; t < diag; ++t) {
    for (;;) {
      // pick pivot in the trailing block
      bool found = false;
      std::size_t pr = t, pc = t;
      Int best;
      for (std::size_t r = t; r < rows; ++r)
        for (std::size_t c = t; c < cols; ++c) {
          if (s(r, c) == 0) continue;
          Int a = abs(s(r, c));
          if (!found || a < best) {
            found = true;
            best = a;
            pr = r;
            pc = c;
          }
        }
      if (!found) goto done;
      s.swap_rows(t, pr);
      u.swap_rows(t, pr);
      s.swap_cols(t, pc);
      v.swap_cols(t, pc);

      bool clean = true;
      for (std::size_t r = t + 1; r < rows; ++r) {
        if (s(r, t) == 0) continue;
        Int q = floor_div(s(r, t), s(t, t));
        s.add_row(r, t, -q);
        u.add_row(r, t, -q);
        if (s(r, t) != 0) clean = false;
      }
      for (std::size_t c = t + 1; c < cols; ++c) {
        if (s(t, c) == 0) continue;
        Int q = floor_div(s(t, c), s(t, t));
        s.add_col(c, t, -q);
        v.add_col(c, t, -q);
        if (s(t, c) != 0) clean = false;
      }
      if (!clean) continue;

      // divisibility: pivot must divide the whole trailing block
      bool divides = true;
      for (std::size_t r = t + 1; r < rows && divides; ++r)
        for (std::size_t c = t + 1; c < cols; ++c)
          if (s(r, c) % s(t, t) != 0) {
            s.add_row(t, r, Int(1));
            u.add_row(t, r, Int(1));
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (s(t, t) < 0) {
      s.negate_row(t);
      u.negate_row(t);
    }
  }
done:
  return SmithForm{std::move(s), std::move(u), std::move(v)};
}

/// Integer inverse of a unimodular matrix.
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
  RatMatrix inv = rational_inverse(m);
  IntMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (denominator(inv(i, j)) != 1) throw PreconditionError("matrix is not unimodular");
      out(i, j) = numerator(inv(i, j));
    }
  return out;
}

/// Row-style Hermite normal form: the nonzero rows of an upper echelon basis
/// of the row lattice, pivots positive, entries above each pivot reduced into [0, pivot).
inline IntMatrix hermite_normal_form(IntMatrix a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    // Euclid on column c among rows r..m-1
    for (;;) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i)
        if (a(i, c) != 0 && (best == m || abs(a(i, c)) < abs(a(best, c)))) best = i;
      if (best == m) break;
      a.swap_rows(r, best);
      bool done = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (a(i, c) == 0) continue;
        a.add_row(i, r, -floor_div(a(i, c), a(r, c)));
        if (a(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (a(r, c) == 0) continue;
    if (a(r, c) < 0) a.negate_row(r);
    for (std::size_t i = 0; i < r; ++i) a.add_row(i, r, -floor_div(a(i, c), a(r, c)));
    ++r;
  }
  IntMatrix out(r, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = a(i, j);
  return out;
}

/// Rank over the rationals.
inline std::size_t rank(const IntMatrix& m) { return smith_normal_form(m).invariant_factors().size(); }

/// Counts of positive and negative eigenvalues of a nondegenerate symmetric matrix.
struct Signature {
  std::size_t positive = 0;
  std::size_t negative = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Signature via exact symmetric congruence diagonalisation (LDL^T with
/// symmetric pivoting; 2x2 blocks when every remaining diagonal entry vanishes).
inline Signature symmetric_signature(const IntMatrix& m) {
  if (!m.is_symmetric()) throw PreconditionError("signature requires a symmetric matrix");
  RatMatrix a = to_rational(m);
  const std::size_t n = a.rows();
  Signature sig;
  std::size_t k = 0;
  auto eliminate = [&](std::size_t piv) {
    for (std::size_t i = piv + 1; i < n; ++i) {
      if (a(i, piv) == 0) continue;
      Rat f = a(i, piv) / a(piv, piv);
      a.add_row(i, piv, -f);
      a.add_col(i, piv, -f);
    }
  };
  while (k < n) {
    std::size_t p = k;
    while (p < n && a(p, p) == 0) ++p;
    if (p < n) {
      a.swap_rows(k, p);
      a.swap_cols(k, p);
      (a(k, k) > 0 ? sig.positive : sig.negative)++;
      eliminate(k);
      ++k;
      continue;
    }
    // all remaining diagonal entries are zero: find an off-diagonal pivot
    std::size_t j = n;
    for (std::size_t c = k + 1; c < n; ++c)
      if (a(k, c) != 0) {
        j = c;
        break;
      }
    if (j == n) throw PreconditionError("degenerate symmetric matrix");
    // e_k + e_j has norm 2 a(k,j) != 0
    a.add_row(k, j, Rat(1));
    a.add_col(k, j, Rat(1));
  }
  return sig;
}

}  // namespace fmlat
