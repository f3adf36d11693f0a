#pragma once
// Positive definite lattices: short vector enumeration (Fincke-Pohst in exact
// rationals), isometry search by backtracking, automorphism groups and a
// canonical form for rank <= 3.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "fmlat/lattice.hpp"

namespace fmlat {

inline constexpr std::size_t kDefaultShortVectorRank = 8;

/// Unimodular P with P^T G1 P = G2: column i of P is the image in L1 of the
/// i-th basis vector of L2.
struct DefIsometry {
  IntMatrix matrix;
  friend bool operator==(const DefIsometry&, const DefIsometry&) = default;
};

inline void require_definite(const Lattice& l, std::size_t max_rank, const char* what) {
  if (!l.is_positive_definite()) throw PreconditionError(std::string(what) + " requires a positive definite lattice");
  if (l.rank() > max_rank)
    throw PreconditionError(std::string(what) + " supports rank <= " + std::to_string(max_rank));
}

/// Calls f(x, norm) for every nonzero x with x^T G x <= bound (both signs).
inline void for_each_short_vector(const Lattice& l, const Int& bound,
                                  const std::function<void(const IntVector&, const Int&)>& f) {
  const std::size_t n = l.rank();
  if (n == 0 || bound <= 0) return;
  // Q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2
  RatMatrix a = to_rational(l.gram());
  std::vector<Rat> d(n);
  RatMatrix mu(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = a(i, i);
    for (std::size_t j = i + 1; j < n; ++j) mu(i, j) = a(i, j) / d[i];
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = i + 1; k < n; ++k) a(j, k) -= mu(i, j) * mu(i, k) * d[i];
  }
  IntVector x(n, Int(0));
  const Rat rb(bound);
  auto rec = [&](auto&& self, std::size_t i, const Rat& used) -> void {
    Rat c = 0;
    for (std::size_t j = i + 1; j < n; ++j) c += mu(i, j) * Rat(x[j]);
    const Rat t = (rb - used) / d[i];
    Int s = isqrt(floor(t)) + 1;
    Int lo = floor(-c) - s, hi = ceil(-c) + s;
    auto fits = [&](const Int& v) {
      Rat y = Rat(v) + c;
      return y * y <= t;
    };
    while (lo <= hi && !fits(lo)) ++lo;
    while (hi >= lo && !fits(hi)) --hi;
    for (Int v = lo; v <= hi; ++v) {
      x[i] = v;
      Rat y = Rat(v) + c;
      Rat u = used + d[i] * y * y;
      if (i == 0) {
        bool zero = std::all_of(x.begin(), x.end(), [](const Int& z) { return z == 0; });
        if (!zero) f(x, numerator(u));
      } else {
        self(self, i - 1, u);
      }
    }
    x[i] = 0;
  };
  rec(rec, n - 1, Rat(0));
}

/// Vectors of square exactly m, one per sign pair (first nonzero coordinate
/// positive), in lexicographic order.
inline std::vector<IntVector> short_vectors(const Lattice& l, const Int& m,
                                            std::size_t max_rank = kDefaultShortVectorRank) {
  require_definite(l, max_rank, "short_vectors");
  std::vector<IntVector> out;
  for_each_short_vector(l, m, [&](const IntVector& x, const Int& norm) {
    if (norm != m) return;
    for (const auto& c : x)
      if (c != 0) {
        if (c > 0) out.push_back(x);
        return;
      }
  });
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<IntVector> vectors_of_square_and_divisibility(const Lattice& l, const Int& m, const Int& d,
                                                                 std::size_t max_rank = kDefaultShortVectorRank) {
  std::vector<IntVector> out;
  for (auto& v : short_vectors(l, m, max_rank))
    if (l.divisibility(v) == d) out.push_back(std::move(v));
  return out;
}

namespace detail {

/// All vectors (both signs) of norm <= bound, bucketed by norm.
inline std::map<Int, std::vector<IntVector>> vectors_by_norm(const Lattice& l, const Int& bound) {
  std::map<Int, std::vector<IntVector>> out;
  for_each_short_vector(l, bound, [&](const IntVector& x, const Int& norm) { out[norm].push_back(x); });
  for (auto& [k, v] : out) std::sort(v.begin(), v.end());
  return out;
}

inline std::vector<DefIsometry> search_definite(const Lattice& l1, const Lattice& l2, std::size_t limit) {
  std::vector<DefIsometry> out;
  if (l1.rank() != l2.rank() || l1.determinant() != l2.determinant()) return out;
  const std::size_t n = l1.rank();
  if (n == 0) {
    out.push_back({IntMatrix(0, 0)});
    return out;
  }
  const IntMatrix& g2 = l2.gram();
  Int maxd = 0;
  for (std::size_t i = 0; i < n; ++i) maxd = std::max(maxd, g2(i, i));
  auto buckets = vectors_by_norm(l1, maxd);
  std::vector<const std::vector<IntVector>*> cand(n);
  static const std::vector<IntVector> none;
  for (std::size_t i = 0; i < n; ++i) {
    auto it = buckets.find(g2(i, i));
    cand[i] = it == buckets.end() ? &none : &it->second;
    if (cand[i]->empty()) return out;
  }
  std::vector<IntVector> img(n);
  std::vector<IntVector> gimg(n);  // G1 * img[i]
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (out.size() >= limit) return;
    if (i == n) {
      IntMatrix p(n, n);
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) p(r, c) = img[c][r];
      if (abs(determinant(p)) == 1) out.push_back({p});
      return;
    }
    for (const auto& v : *cand[i]) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        Int s = 0;
        for (std::size_t k = 0; k < n; ++k) s += v[k] * gimg[j][k];
        if (s != g2(i, j)) ok = false;
      }
      if (!ok) continue;
      img[i] = v;
      gimg[i] = mul(l1.gram(), v);
      self(self, i + 1);
      if (out.size() >= limit) return;
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace detail

/// A witness P with P^T G1 P = G2, if the lattices are isometric.
inline std::optional<DefIsometry> is_isometric_definite(const Lattice& l1, const Lattice& l2) {
  require_definite(l1, kDefaultShortVectorRank, "is_isometric_definite");
  require_definite(l2, kDefaultShortVectorRank, "is_isometric_definite");
  auto found = detail::search_definite(l1, l2, 1);
  if (found.empty()) return std::nullopt;
  return found.front();
}

/// O(L) for positive definite L of rank <= 4, sorted by matrix entries.
inline std::vector<DefIsometry> automorphism_group(const Lattice& l, std::size_t max_rank = 4) {
  require_definite(l, max_rank, "automorphism_group");
  auto g = detail::search_definite(l, l, static_cast<std::size_t>(-1));
  std::sort(g.begin(), g.end(), [](const DefIsometry& a, const DefIsometry& b) {
    return a.matrix.entries() < b.matrix.entries();
  });
  return g;
}

namespace detail {

// Off-diagonal entries compare non-negative first, then by absolute value.
inline std::tuple<bool, Int> offdiag_key(const Int& x) { return {x < 0, abs(x)}; }

inline auto canonical_key(const IntMatrix& g) {
  std::vector<Int> diag;
  std::vector<std::tuple<bool, Int>> off;
  for (std::size_t i = 0; i < g.rows(); ++i) diag.push_back(g(i, i));
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = i + 1; j < g.rows(); ++j) off.push_back(offdiag_key(g(i, j)));
  return std::make_pair(diag, off);
}

}  // namespace detail

/// Canonical reduced Gram matrix (rank <= 3): among all bases realising the
/// successive minima, the one whose Gram matrix has the smallest key
/// (diagonal, then off-diagonal entries row by row, non-negative preferred).
inline IntMatrix minkowski_canonical(const Lattice& l) {
  require_definite(l, 3, "minkowski_canonical");
  const std::size_t n = l.rank();
  if (n <= 1) return l.gram();
  Int maxd = 0;
  for (std::size_t i = 0; i < n; ++i) maxd = std::max(maxd, l.gram()(i, i));
  auto buckets = detail::vectors_by_norm(l, maxd);
  // successive minima
  std::vector<Int> minima;
  {
    IntMatrix span(0, n);
    std::vector<IntVector> chosen;
    for (const auto& [norm, vs] : buckets) {
      for (const auto& v : vs) {
        IntMatrix trial(chosen.size() + 1, n);
        for (std::size_t r = 0; r < chosen.size(); ++r)
          for (std::size_t c = 0; c < n; ++c) trial(r, c) = chosen[r][c];
        for (std::size_t c = 0; c < n; ++c) trial(chosen.size(), c) = v[c];
        if (rank(trial) == chosen.size() + 1) {
          chosen.push_back(v);
          minima.push_back(norm);
          if (chosen.size() == n) break;
        }
      }
      if (chosen.size() == n) break;
    }
  }
  if (minima.size() != n) throw PreconditionError("successive minima not found");
  std::optional<IntMatrix> best;
  std::optional<decltype(detail::canonical_key(l.gram()))> best_key;
  std::vector<IntVector> basis(n);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      IntMatrix b(n, n);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) b(r, c) = basis[r][c];
      if (abs(determinant(b)) != 1) return;
      IntMatrix g = restricted_gram(l, b);
      auto key = detail::canonical_key(g);
      if (!best_key || key < *best_key) {
        best_key = key;
        best = g;
      }
      return;
    }
    for (const auto& v : buckets.at(minima[i])) {
      basis[i] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  if (!best) throw PreconditionError("no reduced basis found");
  return *best;
}

}  // namespace fmlat
