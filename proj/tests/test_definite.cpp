#include <gtest/gtest.h>

#include <set>

#include "fmlat/catalog.hpp"
#include "fmlat/definite.hpp"
#include "support.hpp"

using namespace fmlat;

namespace {

const IntMatrix kN{{24, -3}, {-3, 10}};

void expect_matches_box(const Lattice& l, const Int& m) {
  auto got = short_vectors(l, m);
  auto want = oracle::box_vectors(l.gram(), m, oracle::box_bound(l.gram(), m));
  EXPECT_EQ(got, want) << to_string(l.gram()) << " m=" << m;
}

}  // namespace

TEST(ShortVectors, A2Roots) {
  auto v = short_vectors(catalog::a2(), 2);
  EXPECT_EQ(v.size(), 3u);
  expect_matches_box(catalog::a2(), 2);
}

TEST(ShortVectors, Examples) {
  EXPECT_TRUE(short_vectors(Lattice(kN), 2).empty());
  auto n2 = short_vectors(Lattice(IntMatrix{{126, 2}, {2, 2}}), 2);
  EXPECT_NE(std::find(n2.begin(), n2.end(), IntVector{0, 1}), n2.end());
  EXPECT_THROW(short_vectors(catalog::hyperbolic_plane(), 2), PreconditionError);
  EXPECT_THROW(short_vectors(catalog::repeat(catalog::rank_one(1), 9), 1), PreconditionError);
}

TEST(ShortVectors, AgreeWithBoxSearch) {
  std::vector<Lattice> ls{catalog::a2(), Lattice(kN), catalog::l_n(10), catalog::l_ab(2, 9), catalog::two_planes(),
                          catalog::two_planes_primitive(), Lattice(IntMatrix{{6, -3}, {-3, 40}}),
                          Lattice(IntMatrix{{62, 0}, {0, 4}}), Lattice(IntMatrix{{126, 2}, {2, 2}})};
  for (int t = 0; t < 20; ++t) ls.emplace_back(oracle::random_even_definite(oracle::uniform(1, 3)));
  for (const auto& l : ls)
    for (int m = 1; m <= 14; ++m) expect_matches_box(l, m);
}

TEST(SquareAndDivisibility, Examples) {
  auto v = vectors_of_square_and_divisibility(Lattice(IntMatrix{{6, -3}, {-3, 40}}), 6, 3);
  EXPECT_NE(std::find(v.begin(), v.end(), IntVector{1, 0}), v.end());
  EXPECT_TRUE(vectors_of_square_and_divisibility(Lattice(IntMatrix{{62, 0}, {0, 4}}), 6, 3).empty());
  EXPECT_EQ(vectors_of_square_and_divisibility(Lattice(IntMatrix{{4}}), 4, 4), (std::vector<IntVector>{{1}}));
}

TEST(Canonical, Examples) {
  EXPECT_EQ(minkowski_canonical(Lattice(IntMatrix{{126, 16}, {16, 4}})), (IntMatrix{{4, 0}, {0, 62}}));
  EXPECT_EQ(minkowski_canonical(Lattice(IntMatrix{{7}})), (IntMatrix{{7}}));
  IntMatrix c = minkowski_canonical(Lattice(IntMatrix{{10, -3}, {-3, 24}}));
  EXPECT_EQ(c, (IntMatrix{{10, 3}, {3, 24}}));
  EXPECT_EQ(c, minkowski_canonical(Lattice(kN)));
  EXPECT_THROW(minkowski_canonical(catalog::repeat(catalog::rank_one(1), 4)), PreconditionError);
}

TEST(Canonical, ExhaustiveUnimodularOracle) {
  // Minimal key over all unimodular 2x2 changes of basis with entries in [-3,3].
  auto oracle_min = [](const IntMatrix& g) {
    std::optional<IntMatrix> best;
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b)
        for (int c = -3; c <= 3; ++c)
          for (int d = -3; d <= 3; ++d) {
            if (a * d - b * c != 1 && a * d - b * c != -1) continue;
            IntMatrix p{{a, b}, {c, d}};
            IntMatrix h = p * g * p.transpose();
            auto key = [](const IntMatrix& m) {
              return std::make_tuple(m(0, 0), m(1, 1), m(0, 1) < 0, abs(m(0, 1)));
            };
            if (!best || key(h) < key(*best)) best = h;
          }
    return *best;
  };
  for (const auto& g : {kN, IntMatrix{{10, -3}, {-3, 24}}, IntMatrix{{6, -3}, {-3, 40}}, IntMatrix{{14, 2}, {2, 18}},
                        IntMatrix{{12, -3}, {-3, 6}}, IntMatrix{{4, 2}, {2, 4}}})
    EXPECT_EQ(minkowski_canonical(Lattice(g)), oracle_min(g)) << to_string(g);
}

TEST(Canonical, InvariantUnderBasisChange) {
  for (int t = 0; t < 30; ++t) {
    std::size_t n = oracle::uniform(2, 3);
    IntMatrix g = oracle::random_even_definite(n);
    IntMatrix p = oracle::random_unimodular(n, 6);
    ASSERT_EQ(minkowski_canonical(Lattice(g)), minkowski_canonical(Lattice(p.transpose() * g * p)));
  }
}

TEST(DefiniteIsometry, Witnesses) {
  for (int t = 0; t < 20; ++t) {
    std::size_t n = oracle::uniform(1, 3);
    Lattice l(oracle::random_even_definite(n));
    IntMatrix p = oracle::random_unimodular(n, 5);
    Lattice lp(p.transpose() * l.gram() * p);
    auto w = is_isometric_definite(l, lp);
    ASSERT_TRUE(w.has_value());
    ASSERT_EQ(w->matrix.transpose() * l.gram() * w->matrix, lp.gram());
  }
  auto w = is_isometric_definite(Lattice(IntMatrix{{126, 16}, {16, 4}}), Lattice(IntMatrix{{62, 0}, {0, 4}}));
  ASSERT_TRUE(w.has_value());
  EXPECT_FALSE(is_isometric_definite(Lattice(kN), Lattice(IntMatrix{{6, -3}, {-3, 40}})).has_value());
}

TEST(Automorphisms, Orders) {
  EXPECT_EQ(automorphism_group(Lattice(kN)).size(), 2u);
  EXPECT_EQ(automorphism_group(catalog::l_ab(2, 9)).size(), 2u);
  EXPECT_EQ(automorphism_group(catalog::a2()).size(), 12u);
}

TEST(Automorphisms, A2BruteForce) {
  // every assignment of basis images among the six roots, kept if it preserves the form
  auto roots = short_vectors(catalog::a2(), 2);
  std::vector<IntVector> all;
  for (auto r : roots) {
    all.push_back(r);
    for (auto& x : r) x = -x;
    all.push_back(r);
  }
  std::size_t count = 0;
  const IntMatrix g = catalog::a2().gram();
  for (const auto& a : all)
    for (const auto& b : all) {
      IntMatrix p{{a[0], b[0]}, {a[1], b[1]}};
      if (p.transpose() * g * p == g) ++count;
    }
  EXPECT_EQ(count, 12u);
}

TEST(Automorphisms, GroupAxioms) {
  for (const auto& g : {kN, IntMatrix{{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}, IntMatrix{{3, 1, 1}, {1, 3, 0}, {1, 0, 10}},
                        IntMatrix{{2, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 2, 1}, {0, 0, 1, 2}}}) {
    Lattice l(g);
    auto grp = automorphism_group(l);
    std::set<std::vector<Int>> s;
    for (const auto& f : grp) {
      ASSERT_EQ(f.matrix.transpose() * g * f.matrix, g);
      s.insert(f.matrix.entries());
    }
    ASSERT_EQ(s.size(), grp.size());
    for (const auto& a : grp)
      for (const auto& b : grp) ASSERT_TRUE(s.count((a.matrix * b.matrix).entries()));
  }
}
