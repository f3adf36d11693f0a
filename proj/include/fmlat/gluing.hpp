#pragma once
// Overlattices and primitive embeddings through discriminant forms: gluing
// data (G, gamma), the discriminant identity, overlattices from isotropic
// subgroups and orbit enumeration of embeddings with a fixed complement.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "fmlat/definite.hpp"
#include "fmlat/discriminant.hpp"
#include "fmlat/fqm.hpp"

namespace fmlat {

inline constexpr std::int64_t kGluingEnumerationBound = 200000;

/// disc(T) * disc(N) == glue_order^2 * disc(L), evaluated exactly.
inline bool check_gluing_identity(const Int& disc_t, const Int& disc_n, const Int& disc_l, const Int& glue_order) {
  if (disc_t <= 0 || disc_n <= 0 || disc_l <= 0 || glue_order <= 0)
    throw PreconditionError("gluing identity expects positive integers");
  return disc_t * disc_n == glue_order * glue_order * disc_l;
}

/// The glue order forced by the identity, if disc(T) disc(N) / disc(L) is a perfect square.
inline std::optional<Int> forced_glue_order(const Int& disc_t, const Int& disc_n, const Int& disc_l) {
  const Int prod = disc_t * disc_n;
  if (disc_l <= 0 || prod <= 0 || prod % disc_l != 0) return std::nullopt;
  const Int r = isqrt(prod / disc_l);
  if (r * r != prod / disc_l) return std::nullopt;
  return r;
}

/// An overlattice together with its basis in rational coordinates of the
/// original lattice (rows).
struct Overlattice {
  Lattice lattice;
  RatMatrix basis;
};

namespace detail {

/// Z-span of the rows of `gens` (rational, full rank) as a lattice with the form of `l`.
inline Overlattice lattice_from_generators(const Lattice& l, const RatMatrix& gens) {
  const std::size_t n = l.rank();
  Int den = 1;
  for (const auto& x : gens.entries()) {
    const Int d = denominator(x);
    den = den / gcd(den, d) * d;
  }
  IntMatrix m(gens.rows(), n);
  for (std::size_t i = 0; i < gens.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = numerator(gens(i, j) * Rat(den));
  const IntMatrix h = hermite_normal_form(m);
  if (h.rows() != n) throw PreconditionError("generators do not span a full-rank lattice");
  RatMatrix basis(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) basis(i, j) = Rat(h(i, j)) / Rat(den);
  RatMatrix g = basis * to_rational(l.gram()) * basis.transpose();
  IntMatrix gi(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (denominator(g(i, j)) != 1) throw PreconditionError("overlattice form is not integral");
      gi(i, j) = numerator(g(i, j));
    }
  return {Lattice(std::move(gi)), std::move(basis)};
}

}  // namespace detail

/// L + lifts of H for an isotropic subgroup H of A_L (L even). The result is
/// even with disc(L) / |H|^2.
inline Overlattice overlattice_data(const Lattice& l, const FqmSubgroup& h) {
  if (!l.is_even()) throw PreconditionError("overlattice_from_isotropic requires an even lattice");
  DiscriminantForm d = discriminant_form_data(l);
  if (!is_isotropic(d.module, h)) throw PreconditionError("subgroup is not isotropic");
  const std::size_t n = l.rank();
  RatMatrix gens(n + h.generators.size(), n);
  for (std::size_t i = 0; i < n; ++i) gens(i, i) = 1;
  for (std::size_t k = 0; k < h.generators.size(); ++k) {
    RatVector v = d.lift(h.generators[k]);
    for (std::size_t j = 0; j < n; ++j) gens(n + k, j) = v[j];
  }
  Overlattice o = detail::lattice_from_generators(l, gens);
  if (!o.lattice.is_even()) throw std::logic_error("overlattice of an isotropic subgroup must be even");
  if (o.lattice.discriminant() * Int(h.order()) * Int(h.order()) != l.discriminant())
    throw std::logic_error("overlattice discriminant mismatch");
  return o;
}

inline Lattice overlattice_from_isotropic(const Lattice& l, const FqmSubgroup& h) {
  return overlattice_data(l, h).lattice;
}

/// Gluing data of a primitive embedding N -> L with complement T: the glue
/// group G in A_N and gamma: G -> A_T, stored as the graph.
struct GluingData {
  FiniteQuadraticModule a_n;
  FiniteQuadraticModule a_t;
  FqmSubgroup g;
  std::vector<std::pair<Element, Element>> graph;  // (x, gamma(x)), sorted

  std::int64_t order() const { return static_cast<std::int64_t>(graph.size()); }

  Element gamma(const Element& x) const {
    Element r = a_n.reduce(x);
    auto it = std::lower_bound(graph.begin(), graph.end(), r,
                               [](const std::pair<Element, Element>& p, const Element& k) { return p.first < k; });
    if (it == graph.end() || it->first != r) throw PreconditionError("element is not in the glue group");
    return it->second;
  }
};

namespace detail {

/// Closure of generator pairs under addition in A_N x A_T.
inline std::vector<std::pair<Element, Element>> graph_closure(const FiniteQuadraticModule& an,
                                                              const FiniteQuadraticModule& at,
                                                              const std::vector<std::pair<Element, Element>>& gens) {
  std::set<std::pair<Element, Element>> seen{{an.zero(), at.zero()}};
  std::vector<std::pair<Element, Element>> todo{{an.zero(), at.zero()}};
  while (!todo.empty()) {
    auto cur = todo.back();
    todo.pop_back();
    for (const auto& [x, y] : gens) {
      std::pair<Element, Element> nxt{an.add(cur.first, x), at.add(cur.second, y)};
      if (seen.insert(nxt).second) todo.push_back(std::move(nxt));
    }
  }
  return {seen.begin(), seen.end()};
}

inline GluingData make_gluing(const FiniteQuadraticModule& an, const FiniteQuadraticModule& at,
                              const std::vector<std::pair<Element, Element>>& gens) {
  GluingData d{an, at, {}, graph_closure(an, at, gens)};
  std::set<Element> firsts, seconds;
  for (const auto& [x, y] : d.graph) {
    firsts.insert(x);
    seconds.insert(y);
    d.g.members.push_back(an.index_of(x));
  }
  if (firsts.size() != d.graph.size() || seconds.size() != d.graph.size())
    throw PreconditionError("glue graph is not the graph of an injective map");
  std::sort(d.g.members.begin(), d.g.members.end());
  for (const auto& [x, y] : gens)
    if (!an.is_zero(x)) d.g.generators.push_back(an.reduce(x));
  return d;
}

}  // namespace detail

/// Checks the defining properties of gluing data: gamma is injective and its
/// graph is isotropic (q when both modules are quadratic, b otherwise).
inline bool is_valid_gluing(const GluingData& d) {
  std::set<Element> seconds;
  for (const auto& [x, y] : d.graph) {
    seconds.insert(y);
    if (d.a_n.is_quadratic() && d.a_t.is_quadratic()) {
      Rat q = d.a_n.q(x).value() + d.a_t.q(y).value();
      if (denominator(q / 2) != 1) return false;
    }
    for (const auto& [x2, y2] : d.graph) {
      Rat s = d.a_n.b(x, x2).value() + d.a_t.b(y, y2).value();
      if (denominator(s) != 1) return false;
    }
  }
  return seconds.size() == d.graph.size();
}

/// Gluing data of a primitive sublattice N of `parent` and its orthogonal
/// complement T. Odd lattices carry bilinear-only discriminant forms.
inline GluingData gluing_data_of(const Lattice& parent, const Sublattice& sub) {
  if (!(sub.parent == parent)) throw PreconditionError("sublattice does not belong to the given parent");
  if (!is_primitive(sub)) throw PreconditionError("gluing_data_of requires a primitive sublattice");
  const Sublattice comp = orthogonal_complement(sub);
  const Lattice n = sub.lattice(), t = comp.lattice();
  const bool quadratic = parent.is_even();
  const DiscriminantForm dn = discriminant_form_data(n, quadratic), dt = discriminant_form_data(t, quadratic);
  const std::size_t r = parent.rank(), rn = n.rank();
  IntMatrix m(r, r);
  for (std::size_t i = 0; i < rn; ++i)
    for (std::size_t j = 0; j < r; ++j) m(i, j) = sub.basis(i, j);
  for (std::size_t i = 0; i < comp.rank(); ++i)
    for (std::size_t j = 0; j < r; ++j) m(rn + i, j) = comp.basis(i, j);
  // row j of m^-1: coordinates of the j-th parent basis vector in N + T
  const RatMatrix minv = rational_inverse(to_rational(m));
  std::vector<std::pair<Element, Element>> gens;
  for (std::size_t j = 0; j < r; ++j) {
    RatVector cn(rn), ct(comp.rank());
    for (std::size_t i = 0; i < rn; ++i) cn[i] = minv(j, i);
    for (std::size_t i = 0; i < comp.rank(); ++i) ct[i] = minv(j, rn + i);
    gens.emplace_back(dn.element_of(cn), dt.element_of(ct));
  }
  return detail::make_gluing(dn.module, dt.module, gens);
}

/// The overlattice of N + T defined by gluing data whose modules are the
/// discriminant forms of N and T (as produced by discriminant_form_data).
inline Overlattice glue(const Lattice& n, const Lattice& t, const GluingData& d) {
  const DiscriminantForm dn = discriminant_form_data(n, d.a_n.is_quadratic());
  const DiscriminantForm dt = discriminant_form_data(t, d.a_t.is_quadratic());
  const Lattice sum = direct_sum(n, t);
  const std::size_t r = sum.rank();
  RatMatrix gens(r + d.graph.size(), r);
  for (std::size_t i = 0; i < r; ++i) gens(i, i) = 1;
  for (std::size_t k = 0; k < d.graph.size(); ++k) {
    RatVector a = dn.lift(d.graph[k].first), b = dt.lift(d.graph[k].second);
    for (std::size_t j = 0; j < a.size(); ++j) gens(r + k, j) = a[j];
    for (std::size_t j = 0; j < b.size(); ++j) gens(r + k, a.size() + j) = b[j];
  }
  return detail::lattice_from_generators(sum, gens);
}

/// Rank, signature and discriminant form of the lattice embedded into.
struct AmbientGenus {
  std::size_t rank = 0;
  Signature signature;
  FiniteQuadraticModule module;
};

struct EmbeddingClass {
  Lattice complement;
  GluingData data;
  std::size_t orbit = 0;       // index of the orbit, in enumeration order
  std::size_t orbit_size = 0;  // number of gluing graphs in the orbit
};

namespace detail {

/// Injective homomorphisms a -> b with q_b(f x) = s * q_a(x) (s = +1 or -1).
inline std::vector<FqmIsometry> search_embeddings(const FiniteQuadraticModule& a, const FiniteQuadraticModule& b,
                                                  int s, std::int64_t bound) {
  std::vector<FqmIsometry> out;
  if (a.is_trivial()) {
    out.push_back(FqmIsometry{});
    return out;
  }
  const FiniteQuadraticModule as = rescale_fqm(a, s);
  const std::size_t k = as.ngens();
  const auto belems = b.elements(bound);
  std::vector<std::vector<Element>> cand(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Element g = as.gen(i);
    for (const auto& y : belems)
      if (b.order_of(y) == as.orders()[i] && as.q(g) == b.q(y)) cand[i].push_back(y);
    if (cand[i].empty()) return out;
  }
  FqmIsometry cur;
  cur.images.resize(k);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == k) {
      std::set<Element> img;
      for (const auto& x : as.elements(bound)) img.insert(apply(b, cur, x));
      if (static_cast<std::int64_t>(img.size()) == as.order()) out.push_back(cur);
      return;
    }
    for (const auto& y : cand[i]) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j)
        if (!(b.b(y, cur.images[j]) == as.b(as.gen(i), as.gen(j)))) ok = false;
      if (!ok) continue;
      cur.images[i] = y;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

/// Graph key of gluing data in A_N (+) A_T: sorted indices of its members.
inline std::vector<std::int64_t> graph_key(const FiniteQuadraticModule& sum, const GluingData& d) {
  std::vector<std::int64_t> key;
  for (const auto& [x, y] : d.graph) {
    Element z = x;
    z.insert(z.end(), y.begin(), y.end());
    key.push_back(sum.index_of(z));
  }
  std::sort(key.begin(), key.end());
  return key;
}

}  // namespace detail

/// All gluing data (G, gamma) of T (given by A_T and its signature) with the
/// complement lattice whose graph has perp quotient isometric to the ambient
/// form, one representative per orbit under O(complement) acting on A_N and
/// `right` acting on A_T.
inline std::vector<EmbeddingClass> embedding_classes(const FiniteQuadraticModule& a_t, const Signature& sig_t,
                                                     const AmbientGenus& ambient, const Lattice& complement,
                                                     const std::vector<FqmIsometry>& right,
                                                     std::int64_t bound = kGluingEnumerationBound) {
  if (complement.rank() + sig_t.positive + sig_t.negative != ambient.rank ||
      complement.signature().positive + sig_t.positive != ambient.signature.positive ||
      complement.signature().negative + sig_t.negative != ambient.signature.negative)
    throw PreconditionError("rank and signature data are inconsistent");
  if (!a_t.is_quadratic() || !ambient.module.is_quadratic() || !complement.is_even())
    throw PreconditionError("embedding_classes works with even lattices");
  const int st = static_cast<int>(sig_t.positive) - static_cast<int>(sig_t.negative);
  if (detail::pmod(signature_mod8(a_t, bound) - st, 8) != 0)
    throw PreconditionError("A_T is incompatible with the signature of T");

  const DiscriminantForm dn = discriminant_form_data(complement);
  const FiniteQuadraticModule& a_n = dn.module;
  const FiniteQuadraticModule sum = orthogonal_sum(a_n, a_t);
  sum.require_bound(bound);
  const Int glue_sq = a_n.order_exact() * a_t.order_exact();
  std::vector<FqmIsometry> left;
  for (const auto& f : automorphism_group(complement, 3)) left.push_back(dn.reduce(f.matrix));

  std::vector<GluingData> found;
  std::map<std::vector<std::int64_t>, std::size_t> index;
  for (const auto& g : all_subgroups(a_n, bound)) {
    if (Int(g.order()) * Int(g.order()) * ambient.module.order_exact() != glue_sq) continue;
    Subquotient s = subquotient(a_n, g.generators, {});
    for (const auto& phi : detail::search_embeddings(s.module, a_t, -1, bound)) {
      std::vector<std::pair<Element, Element>> gens;
      for (std::size_t i = 0; i < s.lifts.size(); ++i) gens.emplace_back(s.lifts[i], phi.images[i]);
      GluingData d = detail::make_gluing(a_n, a_t, gens);
      std::vector<Element> sgens;
      for (const auto& [x, y] : gens) {
        Element z = x;
        z.insert(z.end(), y.begin(), y.end());
        sgens.push_back(z);
      }
      FqmSubgroup graph = span(sum, sgens, bound);
      if (!is_isotropic(sum, graph)) continue;
      if (!is_isometric(perp_quotient(sum, graph, bound), ambient.module, bound)) continue;
      if (index.emplace(detail::graph_key(sum, d), found.size()).second) found.push_back(std::move(d));
    }
  }

  // orbits of graphs under left x right
  const std::size_t kn = a_n.ngens();
  auto act = [&](const std::vector<std::int64_t>& key, const FqmIsometry* f, const FqmIsometry* h) {
    std::vector<std::int64_t> out;
    for (auto idx : key) {
      Element z = sum.element_at(idx);
      Element x(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(kn)), y(z.begin() + static_cast<std::ptrdiff_t>(kn), z.end());
      if (f) x = apply(a_n, *f, x);
      if (h) y = apply(a_t, *h, y);
      x.insert(x.end(), y.begin(), y.end());
      out.push_back(sum.index_of(x));
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  std::vector<std::vector<std::int64_t>> keys(found.size());
  for (const auto& [k, i] : index) keys[i] = k;
  std::vector<std::size_t> orbit(found.size(), static_cast<std::size_t>(-1));
  std::vector<EmbeddingClass> out;
  for (std::size_t s = 0; s < found.size(); ++s) {
    if (orbit[s] != static_cast<std::size_t>(-1)) continue;
    const std::size_t label = out.size();
    std::size_t size = 0;
    std::vector<std::size_t> stack{s};
    orbit[s] = label;
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      ++size;
      auto visit = [&](const std::vector<std::int64_t>& k) {
        auto it = index.find(k);
        if (it == index.end()) throw std::logic_error("gluing orbit left the enumerated set");
        if (orbit[it->second] == static_cast<std::size_t>(-1)) {
          orbit[it->second] = label;
          stack.push_back(it->second);
        }
      };
      for (const auto& f : left) visit(act(keys[cur], &f, nullptr));
      for (const auto& h : right) visit(act(keys[cur], nullptr, &h));
    }
    out.push_back({complement, found[s], label, 0});
    out.back().orbit_size = size;
  }
  return out;
}

/// Isometry carrying the coprime-to-3 part of A_N (negated) onto A_T,
/// fixed once per pair of modules: the first one found.
inline FqmIsometry split_identification(const SplitOffThree& split, const FiniteQuadraticModule& a_t,
                                        std::int64_t bound = kDefaultEnumerationBound) {
  auto phi = is_isometric(split.transcendental, a_t, bound);
  if (!phi) throw PreconditionError("A_T is not isometric to the coprime-to-3 part of A_N(-1)");
  return *phi;
}

/// The sigma-component (on the coprime-to-3 part, in split_off_3 coordinates)
/// of the discriminant isometry induced by f in O(N).
inline FqmIsometry coprime_action(const DiscriminantForm& dn, const SplitOffThree& split, const IntMatrix& f,
                                  std::int64_t bound = kDefaultEnumerationBound) {
  const FqmIsometry fbar = dn.reduce(f);
  const FiniteQuadraticModule& s = split.coprime.module;
  std::map<Element, Element> coords;
  for (const auto& x : s.elements(bound)) coords.emplace(apply(dn.module, FqmIsometry{split.coprime.lifts}, x), x);
  FqmIsometry sigma;
  for (const auto& lift : split.coprime.lifts) {
    auto it = coords.find(apply(dn.module, fbar, lift));
    if (it == coords.end()) throw std::logic_error("induced isometry does not preserve the coprime part");
    sigma.images.push_back(it->second);
  }
  return sigma;
}

/// sigma in O(A_T) induced by an isometry f of N' (3 must not divide |A_T|).
inline FqmIsometry split_action(const Lattice& n, const DefIsometry& f, const FiniteQuadraticModule& a_t,
                                std::int64_t bound = kDefaultEnumerationBound) {
  if (a_t.order_exact() % 3 == 0) throw PreconditionError("split_action requires 3 not dividing |A_T|");
  const DiscriminantForm dn = discriminant_form_data(n);
  const SplitOffThree split = split_off_3(dn.module);
  const FqmIsometry phi = split_identification(split, a_t, bound);
  const FqmIsometry sigma = coprime_action(dn, split, f.matrix, bound);
  const FqmIsometry phi_inv = inverse(split.transcendental, a_t, phi, bound);
  return compose(a_t, phi, compose(split.transcendental, sigma, phi_inv));
}

}  // namespace fmlat
