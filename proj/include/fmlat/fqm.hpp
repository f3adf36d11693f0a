#pragma once
// Finite quadratic modules (discriminant forms).
//
// A module is a finite abelian group Z/d1 + ... + Z/dk with a Q/Z-valued
// symmetric bilinear form b and, for modules coming from even lattices, a
// Q/2Z-valued quadratic form q refining it. Values are stored as integer
// numerators over the exponent e = lcm(d_i): q(x) = Q(x)/e mod 2 and
// b(x,y) = B(x,y)/e mod 1.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fmlat/linalg.hpp"

namespace fmlat {

using Element = std::vector<std::int64_t>;

/// Default cap on the group order for anything that enumerates elements.
inline constexpr std::int64_t kDefaultEnumerationBound = 10000;

class EnumerationBoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline std::int64_t pmod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}
inline std::int64_t to_i64(const Int& x) { return static_cast<std::int64_t>(x); }
}  // namespace detail

/// An exact rational residue num/den taken modulo `modulus` (1 or 2), reduced.
struct RatResidue {
  std::int64_t num = 0;
  std::int64_t den = 1;
  friend bool operator==(const RatResidue&, const RatResidue&) = default;
  friend auto operator<=>(const RatResidue&, const RatResidue&) = default;
  Rat value() const { return Rat(num) / Rat(den); }
  std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }
};

inline RatResidue make_residue(std::int64_t num, std::int64_t den, std::int64_t modulus) {
  num = detail::pmod(num, modulus * den);
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  return {num / g, den / g};
}

class FiniteQuadraticModule {
 public:
  FiniteQuadraticModule() = default;

  /// Build from generator orders and numerators over `exponent`. When
  /// `quadratic` is false only the bilinear form is meaningful (odd lattices).
  FiniteQuadraticModule(std::vector<std::int64_t> orders, std::int64_t exponent, std::vector<std::int64_t> q_num,
                        std::vector<std::vector<std::int64_t>> b_num, bool quadratic = true)
      : orders_(std::move(orders)), e_(exponent), q_(std::move(q_num)), b_(std::move(b_num)), quadratic_(quadratic) {
    const std::size_t k = orders_.size();
    if (q_.size() != k || b_.size() != k) throw PreconditionError("module data size mismatch");
    std::int64_t l = 1;
    for (auto d : orders_) {
      if (d <= 1) throw PreconditionError("generator orders must exceed 1");
      l = std::lcm(l, d);
    }
    if (k == 0) e_ = 1;
    if (e_ != l && k > 0) throw PreconditionError("exponent must equal lcm of the generator orders");
    for (std::size_t i = 0; i < k; ++i) {
      if (b_[i].size() != k) throw PreconditionError("bilinear matrix must be square");
      q_[i] = detail::pmod(q_[i], 2 * e_);
      for (auto& v : b_[i]) v = detail::pmod(v, e_);
    }
    if (!quadratic_)
      for (std::size_t i = 0; i < k; ++i) q_[i] = b_[i][i];
  }

  /// Build from exact rational values: `gram(i,i)` is q(g_i) mod 2 and the
  /// off-diagonal entries are b(g_i,g_j) mod 1.
  static FiniteQuadraticModule from_rational_gram(const std::vector<std::int64_t>& orders, const RatMatrix& gram,
                                                  bool quadratic = true) {
    std::int64_t e = 1;
    for (auto d : orders) e = std::lcm(e, d);
    const std::size_t k = orders.size();
    std::vector<std::int64_t> q(k);
    std::vector<std::vector<std::int64_t>> b(k, std::vector<std::int64_t>(k));
    auto scaled = [&](const Rat& r) {
      Rat s = r * Rat(e);
      if (denominator(s) != 1) throw PreconditionError("form value denominator does not divide the exponent");
      return detail::to_i64(mod(numerator(s), Int(2 * e)));
    };
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        std::int64_t v = scaled(gram(i, j));
        if (i == j) q[i] = v;
        b[i][j] = v;
      }
    return FiniteQuadraticModule(orders, e, q, b, quadratic);
  }

  static FiniteQuadraticModule trivial() { return FiniteQuadraticModule({}, 1, {}, {}); }

  std::size_t ngens() const { return orders_.size(); }
  const std::vector<std::int64_t>& orders() const { return orders_; }
  std::int64_t exponent() const { return e_; }
  bool is_quadratic() const { return quadratic_; }
  const std::vector<std::int64_t>& q_numerators() const { return q_; }
  const std::vector<std::vector<std::int64_t>>& b_numerators() const { return b_; }

  /// Group order as an exact integer.
  Int order_exact() const {
    Int n = 1;
    for (auto d : orders_) n *= d;
    return n;
  }
  std::int64_t order() const {
    Int n = order_exact();
    if (n > Int(std::numeric_limits<std::int64_t>::max() / 4)) throw EnumerationBoundError("module too large");
    return detail::to_i64(n);
  }
  bool is_trivial() const { return orders_.empty(); }

  Element zero() const { return Element(ngens(), 0); }
  Element gen(std::size_t i) const {
    Element x = zero();
    x[i] = 1;
    return x;
  }
  Element reduce(Element x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = detail::pmod(x[i], orders_[i]);
    return x;
  }
  Element add(const Element& x, const Element& y) const {
    Element z(ngens());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = (x[i] + y[i]) % orders_[i];
    return z;
  }
  Element neg(const Element& x) const {
    Element z(ngens());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = detail::pmod(-x[i], orders_[i]);
    return z;
  }
  Element mul(std::int64_t k, const Element& x) const {
    Element z(ngens());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = detail::pmod((k % orders_[i]) * x[i], orders_[i]);
    return z;
  }
  bool is_zero(const Element& x) const {
    return std::all_of(x.begin(), x.end(), [](std::int64_t v) { return v == 0; });
  }
  std::int64_t order_of(const Element& x) const {
    std::int64_t o = 1;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] != 0) o = std::lcm(o, orders_[i] / std::gcd(orders_[i], x[i]));
    return o;
  }

  /// Numerator of q(x) over the exponent, in [0, 2e).
  std::int64_t q_num(const Element& x) const {
    const std::int64_t m = 2 * e_;
    std::int64_t s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) continue;
      s = (s + (x[i] * x[i] % m) * q_[i]) % m;
      for (std::size_t j = i + 1; j < x.size(); ++j)
        if (x[j] != 0) s = (s + 2 * ((x[i] * x[j]) % m) * b_[i][j]) % m;
    }
    return s;
  }
  /// Numerator of b(x,y) over the exponent, in [0, e).
  std::int64_t b_num(const Element& x, const Element& y) const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < y.size(); ++j)
        if (y[j] != 0) s = (s + ((x[i] * y[j]) % e_) * b_[i][j]) % e_;
    }
    return s;
  }
  RatResidue q(const Element& x) const {
    if (!quadratic_) throw PreconditionError("quadratic form undefined on a module from an odd lattice");
    return make_residue(q_num(x), e_, 2);
  }
  RatResidue b(const Element& x, const Element& y) const { return make_residue(b_num(x, y), e_, 1); }

  // Mixed-radix enumeration of elements.
  std::int64_t index_of(const Element& x) const {
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) idx = idx * orders_[i] + x[i];
    return idx;
  }
  Element element_at(std::int64_t idx) const {
    Element x(ngens());
    for (std::size_t i = ngens(); i-- > 0;) {
      x[i] = idx % orders_[i];
      idx /= orders_[i];
    }
    return x;
  }
  std::vector<Element> elements(std::int64_t bound = kDefaultEnumerationBound) const {
    require_bound(bound);
    const std::int64_t n = order();
    std::vector<Element> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) out.push_back(element_at(i));
    return out;
  }
  void require_bound(std::int64_t bound) const {
    if (order_exact() > Int(bound))
      throw EnumerationBoundError("module order " + order_exact().str() + " exceeds enumeration bound " +
                                  std::to_string(bound));
  }

  /// Checks the structural invariants: b symmetric, well defined on each
  /// cyclic factor, q refining b and vanishing on d_i g_i, and nondegeneracy.
  bool is_valid(std::int64_t bound = kDefaultEnumerationBound) const {
    const std::size_t k = ngens();
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (b_[i][j] != b_[j][i]) return false;
        if ((orders_[i] * b_[i][j]) % e_ != 0) return false;
      }
      if (detail::pmod(q_[i] - b_[i][i], e_) != 0) return false;
      if (quadratic_) {
        const std::int64_t d = orders_[i] % (2 * e_);
        if ((d * d % (2 * e_)) * q_[i] % (2 * e_) != 0) return false;
      }
    }
    return is_nondegenerate(bound);
  }

  bool is_nondegenerate(std::int64_t bound = kDefaultEnumerationBound) const {
    if (is_trivial()) return true;
    require_bound(bound);
    const std::int64_t n = order();
    for (std::int64_t idx = 1; idx < n; ++idx) {
      Element x = element_at(idx);
      bool radical = true;
      for (std::size_t j = 0; j < ngens() && radical; ++j)
        if (b_num(x, gen(j)) != 0) radical = false;
      if (radical) return false;
    }
    return true;
  }

  friend bool operator==(const FiniteQuadraticModule& a, const FiniteQuadraticModule& b) {
    return a.orders_ == b.orders_ && a.e_ == b.e_ && a.q_ == b.q_ && a.b_ == b.b_ && a.quadratic_ == b.quadratic_;
  }

  /// Invariant-factor orders of the underlying group.
  std::vector<std::int64_t> invariant_factors() const {
    IntMatrix rel(ngens(), ngens());
    for (std::size_t i = 0; i < ngens(); ++i) rel(i, i) = orders_[i];
    std::vector<std::int64_t> out;
    for (const auto& d : smith_normal_form(rel).invariant_factors())
      if (d != 1) out.push_back(detail::to_i64(d));
    return out;
  }

  std::string describe() const {
    std::ostringstream os;
    os << "orders=[";
    for (std::size_t i = 0; i < ngens(); ++i) os << (i ? "," : "") << orders_[i];
    os << "] q=[";
    for (std::size_t i = 0; i < ngens(); ++i)
      os << (i ? "," : "") << make_residue(q_[i], e_, quadratic_ ? 2 : 1).str();
    os << "]";
    return os.str();
  }

 private:
  std::vector<std::int64_t> orders_;
  std::int64_t e_ = 1;
  std::vector<std::int64_t> q_;
  std::vector<std::vector<std::int64_t>> b_;
  bool quadratic_ = true;
};

/// A subquotient S/H of a module together with representatives in the
/// ambient module for each of its generators.
struct Subquotient {
  FiniteQuadraticModule module;
  std::vector<Element> lifts;
};

/// Structure of the subquotient <s_gens>/<h_gens> (h_gens must lie in the
/// span of s_gens). Generators are in invariant-factor form, ordered by
/// ascending order and then by q-value.
inline Subquotient subquotient(const FiniteQuadraticModule& a, const std::vector<Element>& s_gens,
                               const std::vector<Element>& h_gens) {
  const std::size_t k = a.ngens();
  if (k == 0) return {FiniteQuadraticModule::trivial(), {}};
  auto stacked = [&](const std::vector<Element>& gens) {
    IntMatrix m(gens.size() + k, k);
    for (std::size_t r = 0; r < gens.size(); ++r)
      for (std::size_t c = 0; c < k; ++c) m(r, c) = gens[r][c];
    for (std::size_t c = 0; c < k; ++c) m(gens.size() + c, c) = a.orders()[c];
    return m;
  };
  // basis of the lattice spanned by s_gens and the relations
  IntMatrix ms = stacked(s_gens);
  SmithForm snf = smith_normal_form(ms);
  IntMatrix vinv = unimodular_inverse(snf.V);
  IntMatrix basis(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) basis(i, j) = snf.S(i, i) * vinv(i, j);
  // coordinates of h_gens + relations in that basis
  RatMatrix coords = to_rational(stacked(h_gens)) * rational_inverse(basis);
  IntMatrix c(coords.rows(), coords.cols());
  for (std::size_t i = 0; i < coords.rows(); ++i)
    for (std::size_t j = 0; j < coords.cols(); ++j) {
      if (denominator(coords(i, j)) != 1) throw PreconditionError("subgroup H is not contained in S");
      c(i, j) = numerator(coords(i, j));
    }
  SmithForm q = smith_normal_form(c);
  IntMatrix gens = unimodular_inverse(q.V) * basis;

  struct Gen {
    std::int64_t order;
    Element lift;
    std::int64_t qn;
  };
  std::vector<Gen> kept;
  for (std::size_t i = 0; i < k; ++i) {
    std::int64_t o = detail::to_i64(q.S(i, i));
    if (o == 1) continue;
    Element x(k);
    for (std::size_t j = 0; j < k; ++j) x[j] = detail::to_i64(mod(gens(i, j), Int(a.orders()[j])));
    kept.push_back({o, x, a.q_num(x)});
  }
  std::int64_t e = 1;
  for (const auto& g : kept) e = std::lcm(e, g.order);
  auto rescale_num = [&](std::int64_t num, std::int64_t modulus) {
    // num / a.e  ->  num' / e
    Int n = Int(num) * e;
    if (n % a.exponent() != 0) throw PreconditionError("subquotient form is not well defined");
    return detail::pmod(detail::to_i64(n / a.exponent()), modulus);
  };
  for (auto& g : kept) g.qn = rescale_num(g.qn, 2 * e);
  std::stable_sort(kept.begin(), kept.end(), [](const Gen& x, const Gen& y) {
    return x.order != y.order ? x.order < y.order : x.qn < y.qn;
  });
  std::vector<std::int64_t> orders, qs;
  std::vector<Element> lifts;
  for (const auto& g : kept) {
    orders.push_back(g.order);
    qs.push_back(g.qn);
    lifts.push_back(g.lift);
  }
  std::vector<std::vector<std::int64_t>> bs(kept.size(), std::vector<std::int64_t>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = 0; j < kept.size(); ++j)
      bs[i][j] = i == j && a.is_quadratic() ? detail::pmod(qs[i], e) : rescale_num(a.b_num(lifts[i], lifts[j]), e);
  if (!a.is_quadratic())
    for (std::size_t i = 0; i < kept.size(); ++i) qs[i] = bs[i][i];
  return {FiniteQuadraticModule(orders, e, qs, bs, a.is_quadratic()), lifts};
}

/// Invariant-factor presentation of the same module.
inline Subquotient normal_form(const FiniteQuadraticModule& a) {
  std::vector<Element> gens;
  for (std::size_t i = 0; i < a.ngens(); ++i) gens.push_back(a.gen(i));
  return subquotient(a, gens, {});
}

/// The module with q and b multiplied by s = +1 or -1.
inline FiniteQuadraticModule rescale_fqm(const FiniteQuadraticModule& a, int s = -1) {
  if (s != 1 && s != -1) throw PreconditionError("only rescaling by +1 or -1 is supported");
  std::vector<std::int64_t> q = a.q_numerators();
  auto b = a.b_numerators();
  for (auto& v : q) v *= s;
  for (auto& r : b)
    for (auto& v : r) v *= s;
  return FiniteQuadraticModule(a.orders(), a.exponent(), q, b, a.is_quadratic());
}

/// Orthogonal direct sum; generators of `a` come first, then those of `b`.
inline FiniteQuadraticModule orthogonal_sum(const FiniteQuadraticModule& a, const FiniteQuadraticModule& b) {
  if (a.is_quadratic() != b.is_quadratic()) throw PreconditionError("cannot sum quadratic and bilinear-only modules");
  std::vector<std::int64_t> orders = a.orders();
  orders.insert(orders.end(), b.orders().begin(), b.orders().end());
  std::int64_t e = std::lcm(a.exponent(), b.exponent());
  const std::size_t k = orders.size(), ka = a.ngens();
  std::vector<std::int64_t> q(k);
  std::vector<std::vector<std::int64_t>> bb(k, std::vector<std::int64_t>(k, 0));
  for (std::size_t i = 0; i < ka; ++i) {
    q[i] = a.q_numerators()[i] * (e / a.exponent());
    for (std::size_t j = 0; j < ka; ++j) bb[i][j] = a.b_numerators()[i][j] * (e / a.exponent());
  }
  for (std::size_t i = 0; i < b.ngens(); ++i) {
    q[ka + i] = b.q_numerators()[i] * (e / b.exponent());
    for (std::size_t j = 0; j < b.ngens(); ++j) bb[ka + i][ka + j] = b.b_numerators()[i][j] * (e / b.exponent());
  }
  return FiniteQuadraticModule(orders, e, q, bb, a.is_quadratic());
}

/// Element-set view of a subgroup.
struct FqmSubgroup {
  std::vector<Element> generators;
  std::vector<std::int64_t> members;  // sorted element indices
  std::int64_t order() const { return static_cast<std::int64_t>(members.size()); }
};

namespace detail {

/// Extends the membership mask of a subgroup by one element.
inline void extend_subgroup(const FiniteQuadraticModule& a, std::vector<char>& in, std::vector<std::int64_t>& members,
                            const Element& x) {
  if (in[static_cast<std::size_t>(a.index_of(x))]) return;
  // smallest m with m*x in the subgroup
  std::int64_t m = 1;
  Element y = x;
  while (!in[static_cast<std::size_t>(a.index_of(y))]) {
    y = a.add(y, x);
    ++m;
  }
  const std::size_t base = members.size();
  std::vector<Element> mult;
  Element jx = x;
  for (std::int64_t j = 1; j < m; ++j) {
    mult.push_back(jx);
    jx = a.add(jx, x);
  }
  for (std::size_t s = 0; s < base; ++s) {
    Element sv = a.element_at(members[s]);
    for (const auto& v : mult) {
      std::int64_t idx = a.index_of(a.add(sv, v));
      in[static_cast<std::size_t>(idx)] = 1;
      members.push_back(idx);
    }
  }
}

}  // namespace detail

/// The subgroup generated by `gens`, with a reduced generating set.
inline FqmSubgroup span(const FiniteQuadraticModule& a, const std::vector<Element>& gens,
                        std::int64_t bound = kDefaultEnumerationBound) {
  a.require_bound(bound);
  std::vector<char> in(static_cast<std::size_t>(a.order()), 0);
  std::vector<std::int64_t> members{0};
  in[0] = 1;
  FqmSubgroup h;
  for (const auto& g : gens) {
    Element x = a.reduce(g);
    if (in[static_cast<std::size_t>(a.index_of(x))]) continue;
    detail::extend_subgroup(a, in, members, x);
    h.generators.push_back(x);
  }
  std::sort(members.begin(), members.end());
  h.members = std::move(members);
  return h;
}

inline bool is_isotropic(const FiniteQuadraticModule& a, const FqmSubgroup& h) {
  for (auto idx : h.members)
    if (a.q_num(a.element_at(idx)) != 0) return false;
  return true;
}

/// Generators of the orthogonal complement of the subgroup generated by `gens`.
inline std::vector<Element> orthogonal_complement(const FiniteQuadraticModule& a, const std::vector<Element>& gens,
                                                  std::int64_t bound = kDefaultEnumerationBound) {
  a.require_bound(bound);
  std::vector<Element> perp;
  const std::int64_t n = a.order();
  for (std::int64_t idx = 0; idx < n; ++idx) {
    Element x = a.element_at(idx);
    bool ok = true;
    for (const auto& g : gens)
      if (a.b_num(x, g) != 0) {
        ok = false;
        break;
      }
    if (ok) perp.push_back(std::move(x));
  }
  return span(a, perp, bound).generators;
}

/// H^perp / H for an isotropic subgroup H; has order |A| / |H|^2.
inline FiniteQuadraticModule perp_quotient(const FiniteQuadraticModule& a, const FqmSubgroup& h,
                                           std::int64_t bound = kDefaultEnumerationBound) {
  if (!is_isotropic(a, h)) throw PreconditionError("perp_quotient requires an isotropic subgroup");
  return subquotient(a, orthogonal_complement(a, h.generators, bound), h.generators).module;
}

/// p-primary part of a module as a subquotient (with lifts into `a`).
inline Subquotient primary_part(const FiniteQuadraticModule& a, std::int64_t p) {
  std::int64_t e = a.exponent();
  std::int64_t cofactor = e;
  while (cofactor % p == 0) cofactor /= p;
  std::vector<Element> gens;
  for (std::size_t i = 0; i < a.ngens(); ++i) gens.push_back(a.mul(cofactor, a.gen(i)));
  return subquotient(a, gens, {});
}

inline std::vector<std::int64_t> primes_of(const FiniteQuadraticModule& a) {
  std::vector<std::int64_t> ps;
  for (const auto& p : prime_divisors(Int(a.exponent()))) ps.push_back(detail::to_i64(p));
  return ps;
}

/// Orthogonal splitting into p-primary parts, by increasing prime.
inline std::vector<std::pair<std::int64_t, FiniteQuadraticModule>> primary_decomposition(
    const FiniteQuadraticModule& a) {
  std::vector<std::pair<std::int64_t, FiniteQuadraticModule>> out;
  for (auto p : primes_of(a)) out.emplace_back(p, primary_part(a, p).module);
  return out;
}

/// Part of the module of order coprime to p.
inline Subquotient coprime_part(const FiniteQuadraticModule& a, std::int64_t p) {
  std::int64_t pp = 1;
  std::int64_t e = a.exponent();
  while (e % p == 0) {
    e /= p;
    pp *= p;
  }
  std::vector<Element> gens;
  for (std::size_t i = 0; i < a.ngens(); ++i) gens.push_back(a.mul(pp, a.gen(i)));
  return subquotient(a, gens, {});
}

/// Splitting of a module whose 3-primary part has order exactly 3 into
/// (coprime-to-3 part rescaled by -1, order-3 part).
struct SplitOffThree {
  FiniteQuadraticModule transcendental;  // the coprime part with q negated
  FiniteQuadraticModule c3;              // the 3-part, of order 3
  Subquotient coprime;                   // the coprime part inside the input (not negated)
  Subquotient three;                     // the 3-part inside the input
};

inline SplitOffThree split_off_3(const FiniteQuadraticModule& a) {
  Subquotient three = primary_part(a, 3);
  if (three.module.order_exact() != 3)
    throw PreconditionError("3-primary part has order " + three.module.order_exact().str() + ", expected 3");
  Subquotient rest = coprime_part(a, 3);
  return {rescale_fqm(rest.module, -1), three.module, rest, three};
}

// ---------------------------------------------------------------------------
// Milgram signature via Jordan decomposition.

/// One orthogonal Jordan block of a p-primary module: cyclic (dim 1) or, for
/// p = 2 only, an even 2-dimensional block.
struct JordanBlock {
  std::int64_t p = 0;
  int scale = 0;  // block lives at scale p^scale
  int dim = 1;
  int epsilon = 1;    // +1 / -1 class of the corresponding lattice constituent
  int oddity = 0;     // p = 2, dim 1: the unit mod 8; otherwise 0
};

namespace detail {

inline int eps_mod8(std::int64_t u) {
  std::int64_t r = pmod(u, 8);
  return (r == 1 || r == 7) ? 1 : -1;
}

inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  Int inv;
  Int aa = mod(Int(a), Int(m));
  // extended Euclid
  Int r0 = m, r1 = aa, s0 = 0, s1 = 1;
  while (r1 != 0) {
    Int qq = r0 / r1;
    Int t = r0 - qq * r1;
    r0 = r1;
    r1 = t;
    t = s0 - qq * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1) throw PreconditionError("element not invertible");
  return to_i64(mod(s0, Int(m)));
}

}  // namespace detail

/// Jordan blocks of the p-primary part of a quadratic module.
inline std::vector<JordanBlock> jordan_blocks(const FiniteQuadraticModule& a, std::int64_t p,
                                              std::int64_t bound = kDefaultEnumerationBound) {
  if (!a.is_quadratic()) throw PreconditionError("Jordan blocks require a quadratic module");
  std::vector<JordanBlock> blocks;
  FiniteQuadraticModule m = primary_part(a, p).module;
  while (!m.is_trivial()) {
    m.require_bound(bound);
    const std::int64_t e = m.exponent();  // p^k
    int k = 0;
    for (std::int64_t t = e; t > 1; t /= p) ++k;
    const auto elems = m.elements(bound);
    std::optional<Element> single;
    std::optional<std::pair<Element, Element>> pair;
    for (const auto& x : elems)
      if (m.order_of(x) == e && m.b_num(x, x) % p != 0) {
        single = x;
        break;
      }
    if (!single) {
      for (std::size_t i = 0; i < elems.size() && !pair; ++i) {
        if (m.order_of(elems[i]) != e) continue;
        for (std::size_t j = i + 1; j < elems.size(); ++j)
          if (m.order_of(elems[j]) == e && m.b_num(elems[i], elems[j]) % p != 0) {
            pair = std::make_pair(elems[i], elems[j]);
            break;
          }
      }
      if (!pair) throw PreconditionError("degenerate module: no Jordan block found");
      if (p != 2) single = m.add(pair->first, pair->second);
    }
    JordanBlock blk;
    blk.p = p;
    blk.scale = k;
    std::vector<Element> used;
    if (single) {
      const std::int64_t qa = m.q_num(*single);  // q = qa / p^k mod 2
      if (p == 2) {
        std::int64_t u = detail::inverse_mod(qa, 2 * e);
        blk.oddity = static_cast<int>(detail::pmod(u, 8));
        blk.epsilon = detail::eps_mod8(u);
      } else {
        blk.epsilon = legendre(Int(qa), Int(p));
      }
      used = {*single};
    } else {
      const std::int64_t qx = m.q_num(pair->first), qy = m.q_num(pair->second);
      const std::int64_t bxy = m.b_num(pair->first, pair->second);
      Int det = Int(qx) * qy - Int(bxy) * bxy;
      blk.dim = 2;
      blk.epsilon = detail::eps_mod8(detail::to_i64(mod(det, Int(8))));
      used = {pair->first, pair->second};
    }
    blocks.push_back(blk);
    m = subquotient(m, orthogonal_complement(m, used, bound), {}).module;
  }
  return blocks;
}

/// Signature mod 8 (Milgram) from the oddity formula applied to a Jordan
/// decomposition: oddity(2-part) - sum over odd p of p-excess.
inline int signature_mod8(const FiniteQuadraticModule& a, std::int64_t bound = kDefaultEnumerationBound) {
  if (!a.is_quadratic()) throw PreconditionError("signature requires a quadratic module");
  if (!a.is_nondegenerate(bound)) throw PreconditionError("signature of a degenerate module");
  std::int64_t total = 0;
  for (auto p : primes_of(a)) {
    std::map<int, std::pair<int, int>> by_scale;  // scale -> (dim, epsilon)
    std::int64_t oddity = 0;
    for (const auto& blk : jordan_blocks(a, p, bound)) {
      auto& s = by_scale.try_emplace(blk.scale, 0, 1).first->second;
      s.first += blk.dim;
      s.second *= blk.epsilon;
      oddity += blk.oddity;
    }
    std::int64_t contrib = 0;
    for (const auto& [scale, de] : by_scale) {
      const bool antisquare = (scale % 2 == 1) && de.second == -1;
      if (p == 2) {
        contrib += antisquare ? 4 : 0;
      } else {
        std::int64_t q = 1;
        for (int i = 0; i < scale; ++i) q *= p;
        contrib += de.first * (q - 1) + (antisquare ? 4 : 0);
      }
    }
    if (p == 2)
      total += oddity + contrib;
    else
      total -= contrib;
  }
  return static_cast<int>(detail::pmod(total, 8));
}

// ---------------------------------------------------------------------------
// Isometries.

/// Map between modules given by the images of the source generators.
struct FqmIsometry {
  std::vector<Element> images;
  friend bool operator==(const FqmIsometry&, const FqmIsometry&) = default;
  friend auto operator<=>(const FqmIsometry&, const FqmIsometry&) = default;
};

inline Element apply(const FiniteQuadraticModule& target, const FqmIsometry& f, const Element& x) {
  Element y = target.zero();
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0) y = target.add(y, target.mul(x[i], f.images[i]));
  return y;
}

inline FqmIsometry identity_isometry(const FiniteQuadraticModule& a) {
  FqmIsometry f;
  for (std::size_t i = 0; i < a.ngens(); ++i) f.images.push_back(a.gen(i));
  return f;
}

inline FqmIsometry negation(const FiniteQuadraticModule& a) {
  FqmIsometry f;
  for (std::size_t i = 0; i < a.ngens(); ++i) f.images.push_back(a.neg(a.gen(i)));
  return f;
}

/// f after g (g: A -> B, f: B -> C); `c` is the final target.
inline FqmIsometry compose(const FiniteQuadraticModule& c, const FqmIsometry& f, const FqmIsometry& g) {
  FqmIsometry h;
  for (const auto& img : g.images) h.images.push_back(apply(c, f, img));
  return h;
}

/// Inverse of an isometry f: A -> B (|A| = |B|), found by locating preimages
/// of B's generators.
inline FqmIsometry inverse(const FiniteQuadraticModule& a, const FiniteQuadraticModule& b, const FqmIsometry& f,
                           std::int64_t bound = kDefaultEnumerationBound) {
  std::map<Element, Element> pre;
  for (const auto& x : a.elements(bound)) pre.emplace(apply(b, f, x), x);
  FqmIsometry inv;
  for (std::size_t i = 0; i < b.ngens(); ++i) {
    auto it = pre.find(b.gen(i));
    if (it == pre.end()) throw PreconditionError("map is not surjective");
    inv.images.push_back(it->second);
  }
  return inv;
}

/// Does f preserve q (or b for bilinear-only modules) on generators and pairs?
inline bool is_isometry(const FiniteQuadraticModule& a, const FiniteQuadraticModule& b, const FqmIsometry& f) {
  if (f.images.size() != a.ngens()) return false;
  for (std::size_t i = 0; i < a.ngens(); ++i) {
    if (b.order_of(f.images[i]) != a.orders()[i]) return false;
    if (a.is_quadratic() && !(a.q(a.gen(i)) == b.q(f.images[i]))) return false;
    for (std::size_t j = 0; j < a.ngens(); ++j)
      if (!(a.b(a.gen(i), a.gen(j)) == b.b(f.images[i], f.images[j]))) return false;
  }
  if (a.order_exact() != b.order_exact()) return false;
  return true;
}

namespace detail {

/// Backtracking search for isometries a -> b. Stops after `limit` results.
inline std::vector<FqmIsometry> search_isometries(const FiniteQuadraticModule& a, const FiniteQuadraticModule& b,
                                                  std::size_t limit, std::int64_t bound) {
  std::vector<FqmIsometry> out;
  if (a.is_quadratic() != b.is_quadratic()) return out;
  if (a.order_exact() != b.order_exact()) return out;
  if (a.invariant_factors() != b.invariant_factors()) return out;
  if (a.is_trivial()) {
    out.push_back(FqmIsometry{});
    return out;
  }
  b.require_bound(bound);
  const std::size_t k = a.ngens();
  // candidate images per generator: same order and same q (or b(x,x))
  std::vector<std::vector<Element>> cand(k);
  const auto belems = b.elements(bound);
  for (std::size_t i = 0; i < k; ++i) {
    const Element g = a.gen(i);
    const auto target_q = a.is_quadratic() ? make_residue(a.q_num(g), a.exponent(), 2)
                                           : make_residue(a.b_num(g, g), a.exponent(), 1);
    for (const auto& y : belems) {
      if (b.order_of(y) != a.orders()[i]) continue;
      const auto qy = b.is_quadratic() ? make_residue(b.q_num(y), b.exponent(), 2)
                                       : make_residue(b.b_num(y, y), b.exponent(), 1);
      if (qy == target_q) cand[i].push_back(y);
    }
    if (cand[i].empty()) return out;
  }
  std::vector<std::vector<RatResidue>> bij(k, std::vector<RatResidue>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) bij[i][j] = a.b(a.gen(i), a.gen(j));
  FqmIsometry cur;
  cur.images.resize(k);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (out.size() >= limit) return;
    if (i == k) {
      out.push_back(cur);
      return;
    }
    for (const auto& y : cand[i]) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j)
        if (!(b.b(y, cur.images[j]) == bij[i][j])) ok = false;
      if (!ok) continue;
      cur.images[i] = y;
      self(self, i + 1);
      if (out.size() >= limit) return;
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace detail

/// A witness isometry a -> b if one exists.
inline std::optional<FqmIsometry> is_isometric(const FiniteQuadraticModule& a, const FiniteQuadraticModule& b,
                                               std::int64_t bound = kDefaultEnumerationBound) {
  if (a == b) return identity_isometry(a);
  auto found = detail::search_isometries(a, b, 1, bound);
  if (found.empty()) return std::nullopt;
  return found.front();
}

/// All isometries of a module, sorted by generator images.
inline std::vector<FqmIsometry> isometry_group(const FiniteQuadraticModule& a,
                                               std::int64_t bound = kDefaultEnumerationBound) {
  a.require_bound(bound);
  auto g = detail::search_isometries(a, a, static_cast<std::size_t>(-1), bound);
  std::sort(g.begin(), g.end());
  return g;
}

// ---------------------------------------------------------------------------
// Subgroup enumeration.

/// All subgroups, ordered by (order, member list).
inline std::vector<FqmSubgroup> all_subgroups(const FiniteQuadraticModule& a,
                                              std::int64_t bound = kDefaultEnumerationBound) {
  a.require_bound(bound);
  if (a.is_trivial()) return {span(a, {}, bound)};
  // subgroups of each primary part, then combine
  std::vector<std::vector<FqmSubgroup>> per_prime;
  for (auto p : primes_of(a)) {
    Subquotient part = primary_part(a, p);
    // elements of the p-part, as elements of a
    FqmSubgroup whole = span(a, part.lifts, bound);
    std::vector<FqmSubgroup> found{span(a, {}, bound)};
    std::map<std::vector<std::int64_t>, std::size_t> seen{{found[0].members, 0}};
    for (std::size_t i = 0; i < found.size(); ++i) {
      for (auto idx : whole.members) {
        Element x = a.element_at(idx);
        if (std::binary_search(found[i].members.begin(), found[i].members.end(), idx)) continue;
        std::vector<Element> gens = found[i].generators;
        gens.push_back(x);
        FqmSubgroup s = span(a, gens, bound);
        if (seen.emplace(s.members, found.size()).second) found.push_back(std::move(s));
      }
    }
    per_prime.push_back(std::move(found));
  }
  std::vector<FqmSubgroup> result{span(a, {}, bound)};
  for (const auto& options : per_prime) {
    std::vector<FqmSubgroup> next;
    for (const auto& r : result)
      for (const auto& o : options) {
        std::vector<Element> gens = r.generators;
        gens.insert(gens.end(), o.generators.begin(), o.generators.end());
        next.push_back(span(a, gens, bound));
      }
    result = std::move(next);
  }
  std::sort(result.begin(), result.end(), [](const FqmSubgroup& x, const FqmSubgroup& y) {
    return x.order() != y.order() ? x.order() < y.order() : x.members < y.members;
  });
  return result;
}

/// All subgroups on which q vanishes identically.
inline std::vector<FqmSubgroup> isotropic_subgroups(const FiniteQuadraticModule& a,
                                                    std::int64_t bound = kDefaultEnumerationBound) {
  std::vector<FqmSubgroup> out;
  for (auto& h : all_subgroups(a, bound))
    if (is_isotropic(a, h)) out.push_back(std::move(h));
  return out;
}

// ---------------------------------------------------------------------------
// Orbit counting on finite groups of isometries.

/// Closure of a set of isometries of `a` under composition (includes identity).
inline std::vector<FqmIsometry> generated_group(const FiniteQuadraticModule& a, std::vector<FqmIsometry> gens) {
  std::vector<FqmIsometry> group{identity_isometry(a)};
  std::map<FqmIsometry, bool> seen{{group[0], true}};
  for (std::size_t i = 0; i < group.size(); ++i)
    for (const auto& g : gens) {
      FqmIsometry h = compose(a, g, group[i]);
      if (seen.emplace(h, true).second) group.push_back(h);
    }
  std::sort(group.begin(), group.end());
  return group;
}

/// Number of double cosets K \ G / H where K, H are subgroups (given by
/// generating sets) of the finite group G of isometries of `a`.
inline std::size_t double_coset_count(const FiniteQuadraticModule& a, const std::vector<FqmIsometry>& group,
                                      const std::vector<FqmIsometry>& left, const std::vector<FqmIsometry>& right) {
  std::map<FqmIsometry, std::size_t> index;
  for (std::size_t i = 0; i < group.size(); ++i) index.emplace(group[i], i);
  std::vector<char> visited(group.size(), 0);
  std::size_t orbits = 0;
  for (std::size_t s = 0; s < group.size(); ++s) {
    if (visited[s]) continue;
    ++orbits;
    std::vector<std::size_t> stack{s};
    visited[s] = 1;
    while (!stack.empty()) {
      const FqmIsometry x = group[stack.back()];
      stack.pop_back();
      auto visit = [&](const FqmIsometry& y) {
        auto it = index.find(y);
        if (it == index.end()) throw PreconditionError("acting isometry does not lie in the group");
        if (!visited[it->second]) {
          visited[it->second] = 1;
          stack.push_back(it->second);
        }
      };
      for (const auto& k : left) visit(compose(a, k, x));
      for (const auto& h : right) visit(compose(a, x, h));
    }
  }
  return orbits;
}

}  // namespace fmlat
