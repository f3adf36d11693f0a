#pragma once
// Conway-Sloane genus symbols, genus enumeration for definite binary and
// ternary forms, the H(N) filter and the image of O(L) in O(A_L).
//
// String form of a symbol, e.g. for an odd ternary lattice of determinant 77:
//   (3,0) 2:1^+3_I3 7:1^-2,7^+1 11:1^+2,11^-1
// Each constituent is q^{eps n} with q the scale; 2-adic constituents carry
// _II (even) or _It (odd with fused compartment oddity t; only the first
// constituent of a compartment carries the oddity, the others show _I).

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fmlat/definite.hpp"
#include "fmlat/discriminant.hpp"
#include "fmlat/lattice.hpp"

namespace fmlat {

struct LocalConstituent {
  int scale = 0;  // exponent of p
  int dim = 0;
  int eps = 1;
  bool odd = false;  // p = 2: type I
  int oddity = 0;    // p = 2, type I: fused oddity mod 8
  friend bool operator==(const LocalConstituent&, const LocalConstituent&) = default;
};

struct LocalSymbol {
  std::int64_t p = 0;
  std::vector<LocalConstituent> constituents;  // increasing scale, nonzero dims
  friend bool operator==(const LocalSymbol&, const LocalSymbol&) = default;
};

struct GenusSymbol {
  std::size_t rank = 0;
  Signature signature;
  std::vector<LocalSymbol> local;  // p = 2 first, then odd primes dividing det

  friend bool operator==(const GenusSymbol& a, const GenusSymbol& b) {
    return a.rank == b.rank && a.signature.positive == b.signature.positive &&
           a.signature.negative == b.signature.negative && a.local == b.local;
  }

  std::string str() const {
    std::ostringstream os;
    os << '(' << signature.positive << ',' << signature.negative << ')';
    for (const auto& ls : local) {
      os << ' ' << ls.p << ':';
      bool first = true;
      std::int64_t q = 1;
      int at = 0;
      for (const auto& c : ls.constituents) {
        while (at < c.scale) {
          q *= ls.p;
          ++at;
        }
        os << (first ? "" : ",") << q << '^' << (c.eps > 0 ? '+' : '-') << c.dim;
        if (ls.p == 2) os << (c.odd ? "_I" : "_II");
        if (ls.p == 2 && c.odd && c.oddity >= 0) os << c.oddity;
        first = false;
      }
    }
    return os.str();
  }
};

namespace detail {

struct JordanPiece {
  int scale;
  RatMatrix unit;  // 1x1 or 2x2, entries p-adic units after dividing by p^scale
};

/// Jordan splitting over Z_(p) by symmetric elimination on rationals with
/// denominators prime to p.
inline std::vector<JordanPiece> local_jordan(const IntMatrix& gram, const Int& p) {
  RatMatrix a = to_rational(gram);
  std::vector<std::size_t> idx(gram.rows());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<JordanPiece> out;
  auto val = [&](const Rat& r) { return r == 0 ? std::numeric_limits<int>::max() : valuation(r, p); };
  auto pow_p = [&](int k) {
    Int r = 1;
    for (int i = 0; i < k; ++i) r *= p;
    return Rat(r);
  };
  while (!idx.empty()) {
    int v = std::numeric_limits<int>::max();
    for (auto i : idx)
      for (auto j : idx) v = std::min(v, val(a(i, j)));
    std::optional<std::size_t> diag;
    for (auto i : idx)
      if (val(a(i, i)) == v) {
        diag = i;
        break;
      }
    if (!diag && p != 2) {
      // e_i += e_j gives a diagonal entry of valuation v
      for (auto i : idx) {
        for (auto j : idx)
          if (i != j && val(a(i, j)) == v) {
            const Rat aii = a(i, i) + 2 * a(i, j) + a(j, j);
            for (auto k : idx) {
              a(i, k) += a(j, k);
              a(k, i) = a(i, k);
            }
            a(i, i) = aii;
            diag = i;
            break;
          }
        if (diag) break;
      }
    }
    if (diag) {
      const std::size_t i = *diag;
      const Rat piv = a(i, i);
      std::vector<std::size_t> rest;
      for (auto k : idx)
        if (k != i) rest.push_back(k);
      for (auto k : rest) {
        Rat f = a(k, i) / piv;
        for (auto l : rest) a(k, l) -= f * a(i, l);
      }
      for (auto k : rest) a(k, i) = a(i, k) = 0;
      out.push_back({v, RatMatrix{{piv / pow_p(v)}}});
      idx = rest;
      continue;
    }
    // p = 2, all minimal entries off the diagonal: split a 2x2 block
    std::size_t bi = 0, bj = 0;
    bool found = false;
    for (auto i : idx) {
      for (auto j : idx)
        if (i != j && val(a(i, j)) == v) {
          bi = i;
          bj = j;
          found = true;
          break;
        }
      if (found) break;
    }
    RatMatrix b{{a(bi, bi), a(bi, bj)}, {a(bj, bi), a(bj, bj)}};
    RatMatrix binv = rational_inverse(b);
    std::vector<std::size_t> rest;
    for (auto k : idx)
      if (k != bi && k != bj) rest.push_back(k);
    for (auto k : rest) {
      // coefficients c with x_k -= c0 x_bi + c1 x_bj
      Rat c0 = a(k, bi) * binv(0, 0) + a(k, bj) * binv(1, 0);
      Rat c1 = a(k, bi) * binv(0, 1) + a(k, bj) * binv(1, 1);
      for (auto l : rest) a(k, l) -= c0 * a(bi, l) + c1 * a(bj, l);
    }
    for (auto k : rest) a(k, bi) = a(bi, k) = a(k, bj) = a(bj, k) = 0;
    out.push_back({v, b.scaled(Rat(1) / pow_p(v))});
    idx = rest;
  }
  std::stable_sort(out.begin(), out.end(), [](const JordanPiece& x, const JordanPiece& y) { return x.scale < y.scale; });
  return out;
}

/// Residue mod 8 of a rational with odd denominator (d^2 = 1 mod 8).
inline std::int64_t unit_mod8(const Rat& r) {
  Int v = mod(numerator(r) * denominator(r), Int(8));
  return static_cast<std::int64_t>(v);
}

/// Trace of a diagonalisation mod 8 of an odd 2-adic unimodular form given
/// mod 8 (same procedure as splitting off odd vectors one at a time).
inline std::int64_t trace_diag_mod8(std::vector<std::vector<std::int64_t>> a) {
  auto m8 = [](std::int64_t x) { return pmod(x, 8); };
  std::int64_t tr = 0;
  while (!a.empty()) {
    const std::size_t n = a.size();
    if (n == 1) {
      tr += a[0][0];
      break;
    }
    auto odd_index = [](const std::vector<std::vector<std::int64_t>>& m) -> std::optional<std::size_t> {
      for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i][i] % 2 != 0) return i;
      return std::nullopt;
    };
    auto split = [&](const std::vector<std::vector<std::int64_t>>& m, std::size_t i) {
      const std::int64_t u = m[i][i];  // odd, u*u = 1 mod 8
      std::vector<std::vector<std::int64_t>> c;  // rows e_j - m_ji u e_i
      for (std::size_t j = 0; j < m.size(); ++j) {
        if (j == i) continue;
        std::vector<std::int64_t> row(m.size(), 0);
        row[j] = 1;
        row[i] = m8(-m[j][i] * u);
        c.push_back(row);
      }
      std::vector<std::vector<std::int64_t>> b(c.size(), std::vector<std::int64_t>(c.size(), 0));
      for (std::size_t r = 0; r < c.size(); ++r)
        for (std::size_t s = 0; s < c.size(); ++s) {
          std::int64_t acc = 0;
          for (std::size_t x = 0; x < m.size(); ++x)
            for (std::size_t y = 0; y < m.size(); ++y) acc += c[r][x] * m[x][y] * c[s][y];
          b[r][s] = m8(acc);
        }
      return b;
    };
    auto i = odd_index(a);
    if (!i) throw PreconditionError("trace_diag_mod8 on an even form");
    auto b = split(a, *i);
    if (!odd_index(b)) {
      // change basis so that the complement of the split vector is odd
      std::size_t k = *i == 0 ? 1 : 0;
      // e_k += (1 - a_ki u) e_i
      const std::int64_t u = a[*i][*i];
      const std::int64_t t = m8(1 - a[k][*i] * u);
      auto na = a;
      for (std::size_t x = 0; x < n; ++x) na[k][x] = m8(a[k][x] + t * a[*i][x]);
      for (std::size_t x = 0; x < n; ++x) na[x][k] = na[k][x];
      na[k][k] = m8(a[k][k] + 2 * t * a[k][*i] + t * t * a[*i][*i]);
      a = na;
      i = k;
      b = split(a, *i);
      if (!odd_index(b) && !b.empty()) throw PreconditionError("2-adic diagonalisation failed");
    }
    tr += a[*i][*i];
    a = b;
  }
  return m8(tr);
}

inline int eps_from_mod8(std::int64_t d) {
  d = pmod(d, 8);
  return (d == 1 || d == 7) ? 1 : -1;
}

/// Canonical 2-adic symbol: oddity fusion within compartments, then sign
/// walking along trains.
inline void canonicalise_two_adic(std::vector<LocalConstituent>& s) {
  const std::size_t r = s.size();
  std::vector<std::vector<std::size_t>> compartments;
  for (std::size_t i = 0; i < r;) {
    if (!s[i].odd) {
      ++i;
      continue;
    }
    std::vector<std::size_t> c;
    int v = s[i].scale;
    while (i < r && s[i].odd && s[i].scale == v) {
      c.push_back(i);
      ++i;
      ++v;
    }
    compartments.push_back(c);
  }
  for (const auto& c : compartments) {
    int t = 0;
    for (auto i : c) t += s[i].oddity;
    for (auto i : c) s[i].oddity = 0;
    s[c.front()].oddity = static_cast<int>(pmod(t, 8));
  }
  std::vector<std::vector<std::size_t>> trains;
  if (r > 0) {
    std::vector<std::size_t> cur{0};
    for (std::size_t i = 1; i < r; ++i) {
      const auto& prev = s[i - 1];
      const auto& c = s[i];
      const int gap = c.scale - prev.scale;
      bool joined = (gap == 1 && (prev.odd || c.odd)) || (gap == 2 && prev.odd && c.odd);
      if (joined) {
        cur.push_back(i);
      } else {
        trains.push_back(cur);
        cur = {i};
      }
    }
    trains.push_back(cur);
  }
  for (const auto& train : trains) {
    for (std::size_t k = train.size(); k-- > 1;) {
      const std::size_t t1 = train[k];
      if (s[t1].eps != -1) continue;
      s[t1].eps = 1;
      s[t1 - 1].eps *= -1;
      for (const auto& c : compartments) {
        if (std::find(c.begin(), c.end(), t1) != c.end() || std::find(c.begin(), c.end(), t1 - 1) != c.end())
          s[c.front()].oddity = (s[c.front()].oddity + 4) % 8;
      }
    }
  }
  for (auto& c : s)
    if (!c.odd) c.oddity = 0;
}

inline LocalSymbol local_symbol(const IntMatrix& gram, const Int& p) {
  auto pieces = local_jordan(gram, p);
  LocalSymbol ls;
  ls.p = static_cast<std::int64_t>(p);
  std::size_t i = 0;
  while (i < pieces.size()) {
    const int scale = pieces[i].scale;
    std::vector<RatMatrix> blocks;
    bool odd = false;
    while (i < pieces.size() && pieces[i].scale == scale) {
      if (pieces[i].unit.rows() == 1) odd = true;
      blocks.push_back(pieces[i].unit);
      ++i;
    }
    RatMatrix m(0, 0);
    for (const auto& b : blocks) m = block_diagonal(m, b);
    Rat det = 1;
    for (const auto& b : blocks)
      det *= b.rows() == 1 ? b(0, 0) : b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
    LocalConstituent c;
    c.scale = scale;
    c.dim = static_cast<int>(m.rows());
    if (p == 2) {
      c.eps = eps_from_mod8(unit_mod8(det));
      c.odd = odd;
      if (odd) {
        std::vector<std::vector<std::int64_t>> m8(m.rows(), std::vector<std::int64_t>(m.rows()));
        for (std::size_t r = 0; r < m.rows(); ++r)
          for (std::size_t s = 0; s < m.rows(); ++s) m8[r][s] = unit_mod8(m(r, s));
        c.oddity = static_cast<int>(trace_diag_mod8(m8));
      }
    } else {
      c.eps = legendre(numerator(det) * denominator(det), p);
    }
    ls.constituents.push_back(c);
  }
  if (p == 2) canonicalise_two_adic(ls.constituents);
  return ls;
}

}  // namespace detail

/// Full genus symbol (any nondegenerate lattice).
inline GenusSymbol genus_symbol(const Lattice& l) {
  GenusSymbol g;
  g.rank = l.rank();
  g.signature = l.signature();
  if (l.rank() == 0) return g;
  std::vector<Int> primes{2};
  for (const auto& p : prime_divisors(l.discriminant()))
    if (p != 2) primes.push_back(p);
  for (const auto& p : primes) g.local.push_back(detail::local_symbol(l.gram(), p));
  return g;
}

inline bool same_genus(const Lattice& a, const Lattice& b) { return genus_symbol(a) == genus_symbol(b); }

namespace detail {

/// Candidate reduced Gram matrices of the given rank, determinant and parity.
inline std::vector<IntMatrix> reduced_forms(std::size_t rank, const Int& det, bool even) {
  std::vector<IntMatrix> out;
  auto parity_ok = [&](const IntMatrix& g) {
    bool all_even = true;
    for (std::size_t i = 0; i < g.rows(); ++i)
      if (g(i, i) % 2 != 0) all_even = false;
    return all_even == even;
  };
  if (rank == 1) {
    IntMatrix g{{det}};
    if (parity_ok(g)) out.push_back(g);
    return out;
  }
  if (rank == 2) {
    // 0 <= 2b <= a <= c, ac - b^2 = det
    for (Int a = 1; 3 * a * a <= 4 * det; ++a)
      for (Int b = 0; 2 * b <= a; ++b) {
        Int num = det + b * b;
        if (num % a != 0) continue;
        Int c = num / a;
        if (c < a) continue;
        IntMatrix g{{a, b}, {b, c}};
        if (parity_ok(g)) out.push_back(g);
      }
    return out;
  }
  if (rank == 3) {
    for (Int a = 1; a * a * a <= 2 * det; ++a)
      for (Int b = a; a * b * b <= 2 * det; ++b)
        for (Int c = b; a * b * c <= 2 * det; ++c) {
          if (even && (a % 2 != 0 || b % 2 != 0 || c % 2 != 0)) continue;
          for (Int x = -a / 2; 2 * x <= a; ++x)      // a12
            for (Int y = -a / 2; 2 * y <= a; ++y)    // a13
              for (Int z = -b / 2; 2 * z <= b; ++z) {  // a23
                if (2 * abs(x) > a || 2 * abs(y) > a || 2 * abs(z) > b) continue;
                Int d = a * (b * c - z * z) - x * (x * c - z * y) + y * (x * z - b * y);
                if (d != det) continue;
                if (a * b - x * x <= 0) continue;
                IntMatrix g{{a, x, y}, {x, b, z}, {y, z, c}};
                if (parity_ok(g)) out.push_back(g);
              }
        }
    return out;
  }
  throw PreconditionError("genus enumeration supports rank 1 to 3");
}

}  // namespace detail

/// One representative per isometry class in the genus of a positive definite
/// lattice of rank <= 3, given by canonical Gram matrices in canonical order.
inline std::vector<Lattice> genus_representatives(const Lattice& l) {
  require_definite(l, 3, "genus_representatives");
  if (l.rank() == 0) throw PreconditionError("genus enumeration supports rank 1 to 3");
  const GenusSymbol target = genus_symbol(l);
  std::map<decltype(detail::canonical_key(l.gram())), IntMatrix> classes;
  for (const auto& g : detail::reduced_forms(l.rank(), l.determinant(), l.is_even())) {
    Lattice cand(g);
    if (!cand.is_positive_definite()) continue;
    if (!(genus_symbol(cand) == target)) continue;
    IntMatrix c = minkowski_canonical(cand);
    classes.emplace(detail::canonical_key(c), c);
  }
  std::vector<Lattice> out;
  for (const auto& [k, g] : classes) out.emplace_back(g);
  return out;
}

/// Why a lattice fails the H(N) condition, if it does.
struct HFilterWitness {
  IntVector vector;
  Int square;
  Int divisibility;
};

inline std::optional<HFilterWitness> h_filter_witness(const Lattice& l, bool divisibility_rule = true) {
  auto roots = short_vectors(l, 2);
  if (!roots.empty()) return HFilterWitness{roots.front(), 2, l.divisibility(roots.front())};
  if (divisibility_rule) {
    auto six = vectors_of_square_and_divisibility(l, 6, 3);
    if (!six.empty()) return HFilterWitness{six.front(), 6, 3};
  }
  return std::nullopt;
}

/// Keeps the lattices with no vector of square 2 and (unless disabled) no
/// vector of square 6 and divisibility 3.
inline std::vector<Lattice> h_filter(const std::vector<Lattice>& candidates, bool divisibility_rule = true) {
  std::vector<Lattice> out;
  for (const auto& l : candidates)
    if (!h_filter_witness(l, divisibility_rule)) out.push_back(l);
  return out;
}

/// Image of O(L) -> O(A_L), sorted and without repetitions.
inline std::vector<FqmIsometry> disc_isometry_image(const Lattice& l) {
  auto d = discriminant_form_data(l);
  std::vector<FqmIsometry> out;
  for (const auto& f : automorphism_group(l)) out.push_back(d.reduce(f.matrix));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace fmlat
