#pragma once
// Named lattices used throughout the cubic fourfold computations.
//
// E8 is fixed as the Cartan matrix of the E8 root system with the Dynkin
// diagram numbered as a chain 0-1-2-3-4-5-6 plus node 7 attached to node 4.
// Every derived number in the test-suite is computed from this matrix.

#include <string>
#include <vector>

#include "fmlat/lattice.hpp"

namespace fmlat::catalog {

inline Lattice rank_one(const Int& n) { return Lattice(IntMatrix{{n}}); }

inline Lattice hyperbolic_plane() { return Lattice(IntMatrix{{0, 1}, {1, 0}}); }

inline Lattice a2() { return Lattice(IntMatrix{{2, -1}, {-1, 2}}); }

inline Lattice e8() {
  IntMatrix g(8, 8);
  for (std::size_t i = 0; i < 8; ++i) g(i, i) = 2;
  auto link = [&](std::size_t a, std::size_t b) {
    g(a, b) = -1;
    g(b, a) = -1;
  };
  for (std::size_t i = 0; i + 1 < 7; ++i) link(i, i + 1);
  link(4, 7);
  return Lattice(std::move(g));
}

inline Lattice repeat(const Lattice& l, int times) {
  std::vector<Lattice> parts(static_cast<std::size_t>(times), l);
  return direct_sum(parts);
}

/// H^4 of a cubic fourfold: E8^2 + U^2 + <1>^3, signature (21,2).
inline Lattice lambda_cub() {
  return direct_sum({repeat(e8(), 2), repeat(hyperbolic_plane(), 2), repeat(rank_one(1), 3)});
}

/// The square of the hyperplane class, (1,1,1) in the <1>^3 summand of lambda_cub().
inline IntVector h_squared() {
  IntVector v(23, 0);
  v[20] = v[21] = v[22] = 1;
  return v;
}

/// Primitive cohomology: E8^2 + U^2 + A2, signature (20,2), discriminant 3.
inline Lattice lambda0_cub() {
  return direct_sum({repeat(e8(), 2), repeat(hyperbolic_plane(), 2), a2()});
}

/// U^4 + E8^2, even unimodular of signature (20,4).
inline Lattice lambda_tilde() { return direct_sum({repeat(hyperbolic_plane(), 4), repeat(e8(), 2)}); }

/// U^3 + E8(-1)^2, even unimodular of signature (3,19).
inline Lattice lambda_k3() {
  return direct_sum({repeat(hyperbolic_plane(), 3), repeat(rescale(e8(), -1), 2)});
}

/// Mukai lattice H^0 + H^2 + H^4 with (r,l,s).(r',l',s') = l.l' - (rs' + r's).
/// Basis order: r, then the K3 lattice, then s.
inline Lattice mukai() {
  const Lattice k3 = lambda_k3();
  const std::size_t n = k3.rank() + 2;
  IntMatrix g(n, n);
  g(0, n - 1) = g(n - 1, 0) = -1;
  for (std::size_t i = 0; i < k3.rank(); ++i)
    for (std::size_t j = 0; j < k3.rank(); ++j) g(i + 1, j + 1) = k3.gram()(i, j);
  return Lattice(std::move(g));
}

/// (3 1 1 / 1 3 0 / 1 0 n): algebraic lattices of cubics containing a plane.
inline Lattice l_n(const Int& n) {
  Lattice l(IntMatrix{{3, 1, 1}, {1, 3, 0}, {1, 0, n}});
  if (!l.is_positive_definite()) throw PreconditionError("L_n is only defined for positive definite parameters");
  return l;
}

/// Basis coordinates of the hyperplane class h^2 in L_n: first basis vector
/// when n is odd, second when n is even.
inline IntVector l_n_h_squared(const Int& n) {
  return (n % 2 != 0) ? IntVector{1, 0, 0} : IntVector{0, 1, 0};
}

/// (14 a / a 2b), positive definite.
inline Lattice l_ab(const Int& a, const Int& b) {
  IntMatrix g{{14, a}, {a, 2 * b}};
  if (28 * b - a * a <= 0) throw PreconditionError("L_{a,b} must be positive definite");
  return Lattice(std::move(g));
}

/// Algebraic lattice of a cubic containing two disjoint planes.
inline Lattice two_planes() { return l_n(3); }

/// Orthogonal complement of h^2 inside L_n.
inline Lattice l_n_primitive(const Int& n) {
  const IntVector h = l_n_h_squared(n);
  IntMatrix b(1, 3);
  for (std::size_t i = 0; i < 3; ++i) b(0, i) = h[i];
  return orthogonal_complement(Sublattice{l_n(n), b}).lattice();
}

/// Primitive algebraic lattice of the two-planes cubic, in the reduced basis.
inline Lattice two_planes_primitive() { return Lattice(IntMatrix{{12, -3}, {-3, 6}}); }

/// Primitive algebraic lattice of a very general Pfaffian cubic.
inline Lattice pfaffian_primitive() { return rank_one(42); }

/// Look up a lattice by name. Accepted names: U, A2, E8, <n> (param n),
/// Lambda_cub, Lambda0_cub, Lambda_tilde, Lambda_K3, Mukai, L_n (param n),
/// L_n_prim (param n), L_ab (params a, b), two_planes, two_planes_prim, pfaffian_N.
inline Lattice by_name(const std::string& name, const std::vector<Int>& params) {
  auto need = [&](std::size_t k) {
    if (params.size() != k) throw PreconditionError("catalog entry '" + name + "' expects " + std::to_string(k) + " parameter(s)");
  };
  if (name == "U") return need(0), hyperbolic_plane();
  if (name == "A2") return need(0), a2();
  if (name == "E8") return need(0), e8();
  if (name == "<n>" || name == "rank_one") return need(1), rank_one(params[0]);
  if (name == "Lambda_cub") return need(0), lambda_cub();
  if (name == "Lambda0_cub") return need(0), lambda0_cub();
  if (name == "Lambda_tilde") return need(0), lambda_tilde();
  if (name == "Lambda_K3") return need(0), lambda_k3();
  if (name == "Mukai") return need(0), mukai();
  if (name == "L_n") return need(1), l_n(params[0]);
  if (name == "L_ab") return need(2), l_ab(params[0], params[1]);
  if (name == "L_n_prim") return need(1), l_n_primitive(params[0]);
  if (name == "two_planes") return need(0), two_planes();
  if (name == "two_planes_prim") return need(0), two_planes_primitive();
  if (name == "pfaffian_N") return need(0), pfaffian_primitive();
  throw PreconditionError("unknown catalog lattice '" + name + "'");
}

}  // namespace fmlat::catalog
