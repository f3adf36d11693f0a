#pragma once
// Integral lattices presented by Gram matrices, and sublattice calculus.

#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fmlat/linalg.hpp"

namespace fmlat {

/// A free Z-module with a nondegenerate symmetric integral bilinear form,
/// given by its Gram matrix in a fixed basis.
class Lattice {
 public:
  Lattice() = default;

  /// Validates the Gram matrix and caches rank, signature, determinant and parity.
  explicit Lattice(IntMatrix gram) : gram_(std::move(gram)) {
    if (!gram_.is_square() || !gram_.is_symmetric())
      throw PreconditionError("Gram matrix must be square and symmetric");
    det_ = fmlat::determinant(gram_);
    if (det_ == 0 && gram_.rows() > 0) throw PreconditionError("Gram matrix is degenerate");
    if (gram_.rows() == 0) det_ = 1;
    sig_ = gram_.rows() == 0 ? Signature{} : symmetric_signature(gram_);
    even_ = true;
    for (std::size_t i = 0; i < gram_.rows(); ++i)
      if (gram_(i, i) % 2 != 0) even_ = false;
  }

  const IntMatrix& gram() const { return gram_; }
  std::size_t rank() const { return gram_.rows(); }
  Signature signature() const { return sig_; }
  /// Signed determinant of the Gram matrix.
  const Int& determinant() const { return det_; }
  /// |det|, the order of the discriminant group.
  Int discriminant() const { return abs(det_); }
  bool is_even() const { return even_; }
  bool is_positive_definite() const { return sig_.negative == 0; }
  bool is_unimodular() const { return discriminant() == 1; }

  Int inner(const IntVector& v, const IntVector& w) const {
    check_len(v);
    check_len(w);
    return bilinear(gram_, v, w);
  }
  Int norm(const IntVector& v) const { return inner(v, v); }
  Rat inner(const RatVector& v, const RatVector& w) const {
    return bilinear(to_rational(gram_), v, w);
  }

  /// gcd of v.w over all w in the lattice, i.e. gcd of the entries of gram*v.
  Int divisibility(const IntVector& v) const {
    check_len(v);
    Int g = 0;
    for (const auto& x : mul(gram_, v)) g = gcd(g, x);
    if (g == 0) throw PreconditionError("divisibility of the zero vector");
    return g;
  }

  friend bool operator==(const Lattice& a, const Lattice& b) { return a.gram_ == b.gram_; }

 private:
  void check_len(const IntVector& v) const {
    if (v.size() != rank()) throw PreconditionError("vector length does not match lattice rank");
  }

  IntMatrix gram_;
  Int det_ = 1;
  Signature sig_;
  bool even_ = true;
};

inline Lattice make_lattice(IntMatrix gram) { return Lattice(std::move(gram)); }

/// A vector together with the lattice it lives in.
struct LatticeVector {
  std::shared_ptr<const Lattice> parent;
  IntVector coords;
};

inline Int inner_product(const LatticeVector& v, const LatticeVector& w) {
  if (v.parent.get() != w.parent.get() && !(*v.parent == *w.parent))
    throw PreconditionError("vectors belong to different lattices");
  return v.parent->inner(v.coords, w.coords);
}

inline Int divisibility(const LatticeVector& v) { return v.parent->divisibility(v.coords); }

inline Lattice rescale(const Lattice& l, const Int& s) {
  if (s == 0) throw PreconditionError("rescaling factor must be nonzero");
  return Lattice(l.gram().scaled(s));
}

inline Lattice direct_sum(const Lattice& a, const Lattice& b) {
  return Lattice(block_diagonal(a.gram(), b.gram()));
}

inline Lattice direct_sum(const std::vector<Lattice>& parts) {
  IntMatrix g(0, 0);
  for (const auto& p : parts) g = block_diagonal(g, p.gram());
  return Lattice(std::move(g));
}

/// Gram matrix of the vectors given by the rows of `basis`.
inline IntMatrix restricted_gram(const Lattice& l, const IntMatrix& basis) {
  return basis * l.gram() * basis.transpose();
}

/// Sublattice of a parent lattice, spanned by the rows of `basis`
/// (coordinates in the parent's basis).
struct Sublattice {
  Lattice parent;
  IntMatrix basis;

  std::size_t rank() const { return basis.rows(); }
  IntMatrix gram() const { return restricted_gram(parent, basis); }
  /// The sublattice as an abstract lattice (requires nondegenerate restriction).
  Lattice lattice() const { return Lattice(gram()); }
};

/// Smallest primitive sublattice containing S: (S tensor Q) intersected with the parent.
inline Sublattice saturation(const Sublattice& s) {
  const std::size_t n = s.parent.rank();
  if (s.basis.rows() == 0) return Sublattice{s.parent, IntMatrix(0, n)};
  SmithForm snf = smith_normal_form(s.basis);
  const std::size_t r = snf.invariant_factors().size();
  IntMatrix vinv = unimodular_inverse(snf.V);
  IntMatrix out(r, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = vinv(i, j);
  return Sublattice{s.parent, std::move(out)};
}

inline bool is_primitive(const Sublattice& s) {
  if (s.basis.rows() == 0) return true;
  if (rank(s.basis) != s.basis.rows()) return false;
  for (const auto& d : smith_normal_form(s.basis).invariant_factors())
    if (d != 1) return false;
  return true;
}

/// All parent vectors orthogonal to S (always primitive).
inline Sublattice orthogonal_complement(const Sublattice& s) {
  const std::size_t n = s.parent.rank();
  if (s.basis.rows() == 0) return Sublattice{s.parent, IntMatrix::identity(n)};
  IntMatrix m = s.basis * s.parent.gram();
  SmithForm snf = smith_normal_form(m);
  const std::size_t r = snf.invariant_factors().size();
  IntMatrix out(n - r, n);
  for (std::size_t i = r; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i - r, j) = snf.V(j, i);
  return Sublattice{s.parent, std::move(out)};
}

inline std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) os << ',';
    os << '[';
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j);
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

inline std::string to_string(const IntVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

}  // namespace fmlat
