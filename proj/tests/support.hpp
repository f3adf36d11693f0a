#pragma once
// Shared helpers for the test binaries: seeded randomness and brute-force
// oracles that do not reuse the library's algorithms.

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <random>
#include <vector>

#include "fmlat/linalg.hpp"
#include "fmlat/lattice.hpp"

namespace fmlat::oracle {

inline std::uint64_t seed() {
  if (const char* s = std::getenv("FMLAT_SEED")) return std::strtoull(s, nullptr, 10);
  return 20240611ULL;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(seed());
  return g;
}

inline long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

inline IntMatrix random_matrix(std::size_t r, std::size_t c, long lo, long hi) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = uniform(lo, hi);
  return m;
}

/// Product of random elementary operations.
inline IntMatrix random_unimodular(std::size_t n, int steps = 8) {
  IntMatrix p = IntMatrix::identity(n);
  if (n < 2) {
    if (uniform(0, 1)) p(0, 0) = -1;
    return p;
  }
  for (int s = 0; s < steps; ++s) {
    std::size_t a = uniform(0, n - 1), b = uniform(0, n - 1);
    if (a == b) {
      if (uniform(0, 3) == 0) p.negate_col(a);
      continue;
    }
    p.add_col(a, b, Int(uniform(-2, 2)));
  }
  return p;
}

/// Random even positive definite Gram matrix: diagonally dominant with even diagonal.
inline IntMatrix random_even_definite(std::size_t n, long off = 3) {
  IntMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g(i, j) = g(j, i) = uniform(-off, off);
  for (std::size_t i = 0; i < n; ++i) {
    Int row = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row += abs(g(i, j));
    Int d = row + 1 + uniform(0, 4);
    if (d % 2 != 0) d += 1;
    g(i, i) = d;
  }
  return g;
}

/// Random even Gram matrix of either definiteness, nondegenerate.
inline IntMatrix random_even_gram(std::size_t n) {
  for (;;) {
    IntMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      g(i, i) = 2 * uniform(-3, 3);
      for (std::size_t j = i + 1; j < n; ++j) g(i, j) = g(j, i) = uniform(-3, 3);
    }
    if (determinant(g) != 0) return g;
  }
}

/// Random primitive sublattice of rank k of a random even lattice of rank n
/// (k < n <= 4) whose restriction and orthogonal complement are nondegenerate.
inline Sublattice random_primitive_sublattice(std::size_t n, std::size_t k, bool definite) {
  for (;;) {
    Lattice parent(definite ? random_even_definite(n) : random_even_gram(n));
    Sublattice s{parent, random_matrix(k, n, -3, 3)};
    if (rank(s.basis) != k) continue;
    s = saturation(s);
    if (determinant(s.gram()) == 0) continue;
    if (determinant(orthogonal_complement(s).gram()) == 0) continue;
    return s;
  }
}

// ---- oracles -------------------------------------------------------------

/// Cofactor-expansion determinant.
inline Int laplace_det(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Int s = 0;
  for (std::size_t c = 0; c < n; ++c) {
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, jj = 0; j < n; ++j)
        if (j != c) minor(i - 1, jj++) = m(i, j);
    Int t = m(0, c) * laplace_det(minor);
    s += (c % 2 == 0) ? t : Int(-t);
  }
  return s;
}

inline void choose(std::size_t n, std::size_t k, std::vector<std::size_t>& cur, std::size_t start,
                   const std::function<void(const std::vector<std::size_t>&)>& f) {
  if (cur.size() == k) {
    f(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    choose(n, k, cur, i + 1, f);
    cur.pop_back();
  }
}

/// Invariant factors from gcds of k x k minors.
inline std::vector<Int> minors_invariant_factors(const IntMatrix& m) {
  std::vector<Int> dets{1};
  const std::size_t r = std::min(m.rows(), m.cols());
  for (std::size_t k = 1; k <= r; ++k) {
    Int g = 0;
    std::vector<std::size_t> rs, cs;
    choose(m.rows(), k, rs, 0, [&](const std::vector<std::size_t>& rows) {
      choose(m.cols(), k, cs, 0, [&](const std::vector<std::size_t>& cols) {
        IntMatrix sub(k, k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(rows[i], cols[j]);
        g = gcd(g, laplace_det(sub));
      });
    });
    if (g == 0) break;
    dets.push_back(g);
  }
  std::vector<Int> out;
  for (std::size_t k = 1; k < dets.size(); ++k) out.push_back(dets[k] / dets[k - 1]);
  return out;
}

/// Box enumeration: all nonzero x with |x_i| <= bound and x^T G x = m, one per
/// sign pair (first nonzero coordinate positive), lexicographically sorted.
inline std::vector<IntVector> box_vectors(const IntMatrix& g, const Int& m, long bound) {
  const std::size_t n = g.rows();
  std::vector<IntVector> out;
  IntVector x(n, Int(-bound));
  for (;;) {
    bool nonzero = false, positive = false;
    for (const auto& v : x)
      if (v != 0) {
        nonzero = true;
        positive = v > 0;
        break;
      }
    if (nonzero && positive && bilinear(g, x, x) == m) out.push_back(x);
    std::size_t i = 0;
    while (i < n && x[i] == bound) x[i++] = -bound;
    if (i == n) break;
    ++x[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// [L : N + T] computed as |det| of the stacked bases, independently of any
/// discriminant-form machinery.
inline Int sum_index(const Sublattice& n, const Sublattice& t) {
  const std::size_t r = n.parent.rank();
  IntMatrix m(r, r);
  for (std::size_t i = 0; i < n.rank(); ++i)
    for (std::size_t j = 0; j < r; ++j) m(i, j) = n.basis(i, j);
  for (std::size_t i = 0; i < t.rank(); ++i)
    for (std::size_t j = 0; j < r; ++j) m(n.rank() + i, j) = t.basis(i, j);
  return abs(laplace_det(m));
}

/// Coordinate bound for box search: |x_i| <= sqrt(m * (G^-1)_ii).
inline long box_bound(const IntMatrix& g, const Int& m) {
  RatMatrix inv = rational_inverse(g);
  long b = 0;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    Rat t = inv(i, i) * Rat(m);
    long c = static_cast<long>(isqrt(floor(t))) + 1;
    b = std::max(b, c);
  }
  return b;
}

}  // namespace fmlat::oracle
