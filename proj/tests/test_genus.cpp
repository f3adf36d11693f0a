#include <gtest/gtest.h>

#include "fmlat/catalog.hpp"
#include "fmlat/genus.hpp"
#include "support.hpp"

using namespace fmlat;

namespace {

const IntMatrix kN{{24, -3}, {-3, 10}};
const IntMatrix kNprime{{6, -3}, {-3, 40}};
const IntMatrix kL10prime{{3, -1, 0}, {-1, 4, 0}, {0, 0, 7}};

// Independent genus test: L and M are in the same genus iff L(2) and M(2),
// which are even, have equal signatures and isometric discriminant forms.
bool oracle_same_genus(const Lattice& a, const Lattice& b) {
  if (a.rank() != b.rank()) return false;
  if (a.signature().positive != b.signature().positive || a.signature().negative != b.signature().negative)
    return false;
  auto qa = discriminant_form(rescale(a, 2));
  auto qb = discriminant_form(rescale(b, 2));
  return is_isometric(qa, qb).has_value();
}

bool contains_class(const std::vector<Lattice>& reps, const IntMatrix& g) {
  IntMatrix c = minkowski_canonical(Lattice(g));
  for (const auto& r : reps)
    if (r.gram() == c) return true;
  return false;
}

}  // namespace

TEST(GenusSymbol, Unimodular) {
  auto s = genus_symbol(catalog::hyperbolic_plane());
  ASSERT_EQ(s.local.size(), 1u);
  ASSERT_EQ(s.local[0].constituents.size(), 1u);
  EXPECT_FALSE(s.local[0].constituents[0].odd);
  EXPECT_EQ(s.local[0].constituents[0].dim, 2);
  EXPECT_EQ(s.str(), "(1,1) 2:1^+2_II");
}

TEST(GenusSymbol, PaperPairs) {
  EXPECT_EQ(genus_symbol(catalog::l_n(10)), genus_symbol(Lattice(kL10prime)));
  EXPECT_EQ(genus_symbol(Lattice(kN)), genus_symbol(Lattice(kNprime)));
  EXPECT_FALSE(genus_symbol(Lattice(kN)) == genus_symbol(catalog::l_n(10)));
}

TEST(GenusSymbol, StableUnderBasisChange) {
  for (int t = 0; t < 40; ++t) {
    std::size_t n = oracle::uniform(1, 4);
    IntMatrix g = oracle::random_even_gram(n);
    if (oracle::uniform(0, 1)) g(0, 0) += 1;  // odd variant
    if (determinant(g) == 0) continue;
    IntMatrix p = oracle::random_unimodular(n);
    ASSERT_EQ(genus_symbol(Lattice(g)), genus_symbol(Lattice(p.transpose() * g * p))) << to_string(g);
  }
}

TEST(GenusSymbol, AgreesWithScaledDiscriminantOracle) {
  // all reduced forms of small determinant, both parities, pairwise
  std::size_t checked = 0;
  for (int det = 1; det <= 40; ++det) {
    for (std::size_t rank : {2u, 3u}) {
      std::vector<Lattice> forms;
      for (bool even : {true, false})
        for (const auto& g : detail::reduced_forms(rank, det, even)) {
          Lattice l(g);
          if (l.is_positive_definite()) forms.push_back(l);
        }
      for (std::size_t i = 0; i < forms.size(); ++i)
        for (std::size_t j = i; j < forms.size(); ++j) {
          ASSERT_EQ(same_genus(forms[i], forms[j]), oracle_same_genus(forms[i], forms[j]))
              << to_string(forms[i].gram()) << " vs " << to_string(forms[j].gram()) << "\n"
              << genus_symbol(forms[i]).str() << "\n"
              << genus_symbol(forms[j]).str();
          ++checked;
        }
    }
  }
  EXPECT_GT(checked, 500u);
}

TEST(GenusSymbol, IndefiniteAgreesWithOracle) {
  std::map<std::pair<Int, bool>, std::vector<Lattice>> by_det;
  for (int t = 0; t < 400; ++t) {
    std::size_t n = oracle::uniform(2, 3);
    IntMatrix a = oracle::random_even_gram(n);
    if (oracle::uniform(0, 1)) a(0, 0) += 1;
    if (determinant(a) == 0) continue;
    Lattice la(a);
    if (la.is_positive_definite() || la.signature().positive == 0) continue;
    if (la.discriminant() > 60) continue;
    by_det[{la.determinant(), la.rank() == 2}].push_back(la);
  }
  std::size_t checked = 0;
  for (const auto& [key, ls] : by_det)
    for (std::size_t i = 0; i < ls.size() && i < 8; ++i)
      for (std::size_t j = i + 1; j < ls.size() && j < 8; ++j) {
        ASSERT_EQ(same_genus(ls[i], ls[j]), oracle_same_genus(ls[i], ls[j]))
            << to_string(ls[i].gram()) << " vs " << to_string(ls[j].gram());
        ++checked;
      }
  EXPECT_GT(checked, 50u);
}

TEST(GenusRepresentatives, N) {
  auto reps = genus_representatives(Lattice(kN));
  ASSERT_EQ(reps.size(), 2u);
  EXPECT_TRUE(contains_class(reps, kN));
  EXPECT_TRUE(contains_class(reps, kNprime));
}

TEST(GenusRepresentatives, L10) {
  auto reps = genus_representatives(catalog::l_n(10));
  ASSERT_EQ(reps.size(), 5u);
  EXPECT_TRUE(contains_class(reps, kL10prime));
  EXPECT_TRUE(contains_class(reps, catalog::l_n(10).gram()));
}

TEST(GenusRepresentatives, L29) {
  auto reps = genus_representatives(catalog::l_ab(2, 9));
  ASSERT_EQ(reps.size(), 3u);
  EXPECT_TRUE(contains_class(reps, IntMatrix{{14, 2}, {2, 18}}));
  EXPECT_TRUE(contains_class(reps, IntMatrix{{62, 0}, {0, 4}}));
  EXPECT_TRUE(contains_class(reps, IntMatrix{{126, 2}, {2, 2}}));
}

TEST(GenusRepresentatives, Properties) {
  std::vector<Lattice> inputs{Lattice(kN), catalog::l_n(10), catalog::l_ab(2, 9), catalog::two_planes_primitive(),
                              catalog::l_n(3)};
  for (int t = 0; t < 8; ++t) inputs.emplace_back(oracle::random_even_definite(oracle::uniform(2, 3), 2));
  for (const auto& l : inputs) {
    if (l.discriminant() > 400) continue;
    auto reps = genus_representatives(l);
    std::size_t own = 0;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      ASSERT_EQ(genus_symbol(reps[i]), genus_symbol(l));
      if (is_isometric_definite(reps[i], l)) ++own;
      for (std::size_t j = i + 1; j < reps.size(); ++j) ASSERT_FALSE(is_isometric_definite(reps[i], reps[j]));
    }
    ASSERT_EQ(own, 1u) << to_string(l.gram());
  }
  EXPECT_THROW(genus_representatives(catalog::repeat(catalog::rank_one(1), 4)), PreconditionError);
  EXPECT_THROW(genus_representatives(catalog::hyperbolic_plane()), PreconditionError);
}

TEST(HFilter, Examples) {
  auto kept = h_filter(genus_representatives(Lattice(kN)));
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].gram(), minkowski_canonical(Lattice(kN)));
  auto w = h_filter_witness(Lattice(kNprime));
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->square, 6);
  EXPECT_EQ(w->divisibility, 3);

  auto l29 = h_filter(genus_representatives(catalog::l_ab(2, 9)));
  EXPECT_EQ(l29.size(), 2u);
  auto n2 = h_filter_witness(Lattice(IntMatrix{{126, 2}, {2, 2}}));
  ASSERT_TRUE(n2.has_value());
  EXPECT_EQ(n2->square, 2);
  EXPECT_TRUE(h_filter({catalog::a2()}).empty());
  EXPECT_EQ(h_filter({Lattice(kNprime)}, false).size(), 1u);
}

TEST(HFilter, IdempotentAndOrderPreserving) {
  auto reps = genus_representatives(catalog::l_n(10));
  auto once = h_filter(reps);
  EXPECT_EQ(h_filter(once), once);
  std::size_t pos = 0;
  for (const auto& l : once) {
    while (pos < reps.size() && !(reps[pos] == l)) ++pos;
    ASSERT_LT(pos, reps.size());
  }
}

TEST(HFilter, SurvivorsShareDiscriminantForm) {
  for (const auto& g : {kN, IntMatrix{{14, 2}, {2, 18}}, IntMatrix{{42}}, IntMatrix{{12, -3}, {-3, 6}}}) {
    Lattice n(g);
    auto an = discriminant_form(n);
    for (const auto& m : h_filter(genus_representatives(n)))
      ASSERT_TRUE(is_isometric(discriminant_form(m), an).has_value());
  }
}

TEST(DiscImage, Examples) {
  // two planes: O(N) has order 4 while the 3-part of A_N is an anisotropic
  // plane over F_3, so O(A_N) = O^-(2,3) x {+-1} has order 16
  auto tp = catalog::two_planes_primitive();
  auto img = disc_isometry_image(tp);
  EXPECT_EQ(automorphism_group(tp).size(), 4u);
  EXPECT_EQ(img.size(), 4u);
  EXPECT_EQ(isometry_group(discriminant_form(tp)).size(), 16u);
  EXPECT_EQ(disc_isometry_image(Lattice(IntMatrix{{42}})).size(), 2u);
  EXPECT_EQ(disc_isometry_image(Lattice(kN)).size(), 2u);
}

TEST(GenusSymbol, MilgramConsistency) {
  for (int t = 0; t < 20; ++t) {
    Lattice l(oracle::random_even_definite(oracle::uniform(1, 3)));
    if (l.discriminant() > 3000) continue;
    ASSERT_EQ(signature_mod8(discriminant_form(l)), static_cast<int>(l.rank() % 8));
  }
}
