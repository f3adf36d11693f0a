#pragma once
// Discriminant form A_L = L^v / L of a lattice, with explicit lifts of the
// generators to L^v so that lattice data (isometries, dual vectors) can be
// pushed down to the finite module.

#include <numeric>
#include <vector>

#include "fmlat/fqm.hpp"
#include "fmlat/lattice.hpp"

namespace fmlat {

struct DiscriminantForm {
  Lattice lattice;
  FiniteQuadraticModule module;
  /// Row i: rational coordinates (in the lattice basis) of a lift of generator i.
  RatMatrix lifts;

  /// Class of a dual vector v (rational coordinates, G*v integral) in the module.
  Element element_of(const RatVector& v) const {
    RatVector gv = mul(to_rational(lattice.gram()), v);
    IntVector w(gv.size());
    for (std::size_t i = 0; i < gv.size(); ++i) {
      if (denominator(gv[i]) != 1) throw PreconditionError("vector is not in the dual lattice");
      w[i] = numerator(gv[i]);
    }
    IntVector c = mul(U_, w);
    Element x(module.ngens());
    for (std::size_t pos = 0; pos < slots_.size(); ++pos)
      x[pos] = detail::to_i64(mod(c[slots_[pos]], Int(module.orders()[pos])));
    return x;
  }

  /// Rational lift of an element: sum of x_i times the generator lifts.
  RatVector lift(const Element& x) const {
    RatVector v(lattice.rank(), Rat(0));
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) v[j] += Rat(x[i]) * lifts(i, j);
    return v;
  }

  /// Induced isometry of A_L for a lattice isometry P (P^T G P = G, acting on
  /// column coordinate vectors).
  FqmIsometry reduce(const IntMatrix& p) const {
    FqmIsometry f;
    const RatMatrix pr = to_rational(p);
    for (std::size_t i = 0; i < module.ngens(); ++i) f.images.push_back(element_of(mul(pr, lifts.row(i))));
    return f;
  }

  IntMatrix U_;
  std::vector<std::size_t> slots_;  // module generator position -> SNF index
};

/// Discriminant form with lifts. For odd lattices `quadratic` must be false and
/// only the bilinear form is recorded.
inline DiscriminantForm discriminant_form_data(const Lattice& l, bool quadratic = true) {
  if (quadratic && !l.is_even()) throw PreconditionError("discriminant quadratic form requires an even lattice");
  const std::size_t n = l.rank();
  SmithForm snf = smith_normal_form(l.gram());
  const RatMatrix g = to_rational(l.gram());
  const RatMatrix v = to_rational(snf.V);

  struct Gen {
    std::size_t slot;
    std::int64_t order;
    RatVector lift;
    Rat q;
  };
  std::vector<Gen> gens;
  for (std::size_t i = 0; i < n; ++i) {
    Int s = snf.S(i, i);
    if (s == 1) continue;
    RatVector w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = v(j, i) / Rat(s);
    if (s > Int(std::numeric_limits<std::int64_t>::max() / 4)) throw EnumerationBoundError("discriminant too large");
    gens.push_back({i, detail::to_i64(s), w, bilinear(g, w, w)});
  }
  auto residue = [&](const Rat& r, int m) {
    Rat t = r - Rat(m) * Rat(floor(r / Rat(m)));
    return t;
  };
  std::stable_sort(gens.begin(), gens.end(), [&](const Gen& a, const Gen& b) {
    if (a.order != b.order) return a.order < b.order;
    return residue(a.q, quadratic ? 2 : 1) < residue(b.q, quadratic ? 2 : 1);
  });

  DiscriminantForm d;
  d.lattice = l;
  d.U_ = snf.U;
  std::vector<std::int64_t> orders;
  RatMatrix gram(gens.size(), gens.size());
  d.lifts = RatMatrix(gens.size(), n);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    orders.push_back(gens[i].order);
    d.slots_.push_back(gens[i].slot);
    for (std::size_t j = 0; j < n; ++j) d.lifts(i, j) = gens[i].lift[j];
    for (std::size_t j = 0; j < gens.size(); ++j) gram(i, j) = bilinear(g, gens[i].lift, gens[j].lift);
  }
  d.module = FiniteQuadraticModule::from_rational_gram(orders, gram, quadratic);
  return d;
}

/// A_L with its Q/2Z-valued quadratic form (L even).
inline FiniteQuadraticModule discriminant_form(const Lattice& l) { return discriminant_form_data(l, true).module; }

/// A_L with only its bilinear form (any lattice).
inline FiniteQuadraticModule discriminant_bilinear_form(const Lattice& l) {
  return discriminant_form_data(l, false).module;
}

}  // namespace fmlat
