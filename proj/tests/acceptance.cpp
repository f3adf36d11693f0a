// Acceptance run: one PASS/FAIL line per criterion, with the checks behind
// each line indented below it. Criterion 9 reports WARN instead of FAIL.
// Exits nonzero when any criterion fails.

#include <CLI11.hpp>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <iostream>

#include "fmlat/json_io.hpp"
#include "fmlat/registry.hpp"
#include "support.hpp"

using namespace fmlat;

namespace {

const IntMatrix kL10N{{24, -3}, {-3, 10}};
const IntMatrix kN1{{62, 0}, {0, 4}};
const IntMatrix kN2{{126, 2}, {2, 2}};

struct Criterion {
  int number;
  std::string title;
  bool warn_only = false;
  std::vector<std::pair<bool, std::string>> checks;

  void check(bool ok, const std::string& what) { checks.emplace_back(ok, what); }
  bool ok() const {
    for (const auto& [good, what] : checks)
      if (!good) return false;
    return true;
  }
};

template <class F>
void guarded(Criterion& c, const std::string& what, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    c.check(false, what + ": threw " + e.what());
  }
}

std::string eq(const std::string& what, std::size_t got, std::size_t want) {
  return what + " = " + std::to_string(got) + " (expected " + std::to_string(want) + ")";
}

Criterion c1() {
  Criterion c{1, "Pfaffian count"};
  guarded(c, "count_fm", [&] {
    const auto t = count_fm(catalog::pfaffian_primitive(), HodgeIsometrySpec::pm_id()).total;
    c.check(t == 1, eq("count_fm(<42>, +-id) total", t, 1));
  });
  return c;
}

Criterion c2() {
  Criterion c{2, "L10 pipeline"};
  guarded(c, "L10", [&] {
    const Lattice n(kL10N);
    const auto reps = genus_representatives(n);
    c.check(reps.size() == 2, eq("genus size of N", reps.size(), 2));
    const auto h = h_filter(reps);
    c.check(h.size() == 1, eq("|H(N)|", h.size(), 1));
    const auto a_t = derive_transcendental_fqm(n);
    c.check(a_t.order() == 77, eq("|A_T|", static_cast<std::size_t>(a_t.order()), 77));
    const auto o = isometry_group(a_t).size();
    c.check(o == 4, eq("|O(A_T)|", o, 4));
    const auto aut = automorphism_group(n).size();
    c.check(aut == 2, eq("|O(N)|", aut, 2));
    const auto t = count_fm(n, HodgeIsometrySpec::pm_id()).total;
    c.check(t == 2, eq("count_fm total", t, 2));
  });
  return c;
}

Criterion c3() {
  Criterion c{3, "Two-planes"};
  guarded(c, "two-planes", [&] {
    const Lattice n = catalog::two_planes_primitive();
    const auto t = count_fm_general(n, HodgeIsometrySpec::pm_id()).total;
    c.check(t == 1, eq("count_fm_general total", t, 1));
    const auto img = disc_isometry_image(n).size();
    const auto all = isometry_group(discriminant_form(n)).size();
    c.check(img == all, "O(N) -> O(A_N) surjective: image " + std::to_string(img) + " of " + std::to_string(all));
  });
  return c;
}

Criterion c4() {
  Criterion c{4, "L2,9"};
  guarded(c, "L2,9", [&] {
    const Lattice l = catalog::l_ab(2, 9);
    const auto reps = genus_representatives(l);
    c.check(reps.size() == 3, eq("genus size", reps.size(), 3));
    const Lattice n2(kN2);
    const auto w = h_filter_witness(n2);
    const bool explicit_root = w && n2.norm(w->vector) == 2;
    c.check(explicit_root && h_filter({n2}).empty(),
            "N2 rejected by h_filter" + (w ? " via " + to_string(w->vector) + " of square " + n2.norm(w->vector).str()
                                            : std::string(" (no witness)")));
    const auto self = count_fm_fixed_complement(l, l, HodgeIsometrySpec::pm_id());
    c.check(self == 2, eq("fixed-complement count for L2,9", self, 2));
    const auto n1 = count_fm_fixed_complement(l, Lattice(kN1), HodgeIsometrySpec::pm_id());
    c.check(n1 == 1, eq("fixed-complement count for N1", n1, 1));
  });
  return c;
}

Criterion c5() {
  Criterion c{5, "Genus of L10"};
  guarded(c, "L10 genus", [&] {
    const auto reps = genus_representatives(catalog::l_n(10));
    c.check(reps.size() == 5, eq("genus size", reps.size(), 5));
    const Lattice lp(IntMatrix{{3, -1, 0}, {-1, 4, 0}, {0, 0, 7}});
    bool found = false;
    for (const auto& r : reps) found = found || is_isometric_definite(r, lp).has_value();
    c.check(found, "[[3,-1,0],[-1,4,0],[0,0,7]] among the representatives");
    const auto threes = short_vectors(lp, 3);
    c.check(threes.size() == 1, eq("square-3 vectors up to sign", threes.size(), 1));
    if (threes.size() != 1) return;
    IntMatrix b(1, 3);
    for (std::size_t i = 0; i < 3; ++i) b(0, i) = threes[0][i];
    const Lattice perp = orthogonal_complement(Sublattice{lp, b}).lattice();
    const bool match = is_isometric_definite(perp, Lattice(IntMatrix{{7, 0}, {0, 33}})).has_value();
    c.check(match && !perp.is_even(), "complement " + to_string(perp.gram()) + " isometric to [[7,0],[0,33]], odd");
  });
  return c;
}

Criterion c6() {
  Criterion c{6, "Milgram suite"};
  const std::vector<std::pair<std::string, Lattice>> suite{
      {"U", catalog::hyperbolic_plane()},
      {"A2", catalog::a2()},
      {"A2(-1)", rescale(catalog::a2(), -1)},
      {"E8", catalog::e8()},
      {"E8+U", direct_sum(catalog::e8(), catalog::hyperbolic_plane())},
      {"Lambda0_cub", catalog::lambda0_cub()}};
  for (const auto& [name, l] : suite)
    guarded(c, name, [&, &name = name, &l = l] {
      const int s = signature_mod8(discriminant_form(l));
      const int want = ((static_cast<int>(l.signature().positive) - static_cast<int>(l.signature().negative)) % 8 + 8) % 8;
      c.check(s == want, name + ": signature_mod8 = " + std::to_string(s) + ", (l+ - l-) mod 8 = " + std::to_string(want));
    });
  guarded(c, "reference values", [&] {
    c.check(signature_mod8(discriminant_form(catalog::a2())) == 2, "A2 gives 2");
    c.check(signature_mod8(discriminant_form(rescale(catalog::a2(), -1))) == 6, "A2(-1) gives 6");
    const auto a0 = discriminant_form(catalog::lambda0_cub());
    c.check(is_isometric(rescale_fqm(discriminant_form(rescale(catalog::a2(), -1)), -1), a0).has_value(),
            "A_{Lambda0_cub} is A_{A2(-1)}(-1)");
  });
  return c;
}

Criterion c7() {
  Criterion c{7, "Gluing identity on random primitive sublattices"};
  std::size_t ok = 0, total = 0, glue_agrees = 0;
  std::string first_bad;
  for (std::size_t k = 1; k <= 2; ++k)
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = oracle::uniform(k + 1, 4);
      const Sublattice s = oracle::random_primitive_sublattice(n, k, oracle::uniform(0, 1) == 1);
      const Sublattice comp = orthogonal_complement(s);
      const Int g = oracle::sum_index(s, comp);
      const Int lhs = s.lattice().discriminant() * comp.lattice().discriminant();
      const Int rhs = g * g * s.parent.discriminant();
      ++total;
      if (lhs == rhs) ++ok;
      else if (first_bad.empty()) first_bad = to_string(s.parent.gram()) + " / " + to_string(s.basis);
      try {
        if (Int(gluing_data_of(s.parent, s).order()) == g) ++glue_agrees;
      } catch (const std::exception&) {
      }
    }
  c.check(ok == total, std::to_string(ok) + " of " + std::to_string(total) +
                           " sublattices satisfy disc(T) disc(N) = |G|^2 disc(L)" +
                           (first_bad.empty() ? "" : "; first failure " + first_bad));
  c.check(glue_agrees == total, std::to_string(glue_agrees) + " of " + std::to_string(total) +
                                    " glue orders from gluing_data_of match the index oracle");
  return c;
}

std::vector<Lattice> registry_lattices() {
  std::vector<Lattice> out{Lattice(kL10N),       catalog::pfaffian_primitive(), catalog::two_planes_primitive(),
                           catalog::l_n(10),     catalog::l_ab(2, 9),           Lattice(kN1),
                           Lattice(kN2),         Lattice(IntMatrix{{66, 12}, {12, 36}}),
                           Lattice(IntMatrix{{18, -60}, {-60, 324}})};
  for (int n : {11, 17, 26, 28}) out.push_back(catalog::l_n_primitive(n));
  for (auto [a, b] : std::vector<std::pair<int, int>>{{4, 6}, {5, 6}, {6, 5}, {6, 10}, {8, 6}, {9, 8}})
    out.push_back(catalog::l_ab(a, b));
  return out;
}

Criterion c8() {
  Criterion c{8, "Oracle equivalence"};
  const auto pm = HodgeIsometrySpec::pm_id();
  // split path against general path
  for (const Lattice& n : {Lattice(kL10N), catalog::pfaffian_primitive(), catalog::l_n_primitive(11),
                           catalog::l_n_primitive(17), catalog::l_n_primitive(26), catalog::l_n_primitive(28)})
    guarded(c, "split vs general " + to_string(n.gram()), [&] {
      const auto a = count_fm(n, pm).total, b = count_fm_general(n, pm).total;
      c.check(a == b, "count_fm = " + std::to_string(a) + ", count_fm_general = " + std::to_string(b) + " on " +
                          to_string(n.gram()));
    });
  // fixed-complement path against general path, per complement
  for (const Lattice& n : {catalog::l_ab(2, 9), catalog::l_ab(4, 6), catalog::l_ab(6, 5)})
    guarded(c, "fixed vs general " + to_string(n.gram()), [&] {
      const auto r = count_fm_general(n, pm);
      bool agree = true;
      std::size_t sum = 0;
      for (const auto& np : h_filter(genus_representatives(n))) {
        const auto k = count_fm_fixed_complement(n, np, pm);
        sum += k;
        std::size_t g = 0;
        for (const auto& rep : r.representatives)
          if (is_isometric_definite(Lattice(rep.gram), np)) g = rep.count;
        agree = agree && g == k;
      }
      c.check(agree && sum == r.total, "fixed-complement counts sum to " + std::to_string(sum) +
                                           ", count_fm_general total " + std::to_string(r.total) + " on " +
                                           to_string(n.gram()));
    });
  // short vectors against box enumeration
  std::size_t sv_checks = 0, sv_ok = 0;
  for (const auto& l : registry_lattices()) {
    Int top = 0;
    for (std::size_t i = 0; i < l.rank(); ++i) top = std::max(top, l.gram()(i, i));
    for (Int m = 1; m <= std::min(top, Int(40)); ++m) {
      ++sv_checks;
      if (short_vectors(l, m) == oracle::box_vectors(l.gram(), m, oracle::box_bound(l.gram(), m))) ++sv_ok;
    }
  }
  c.check(sv_ok == sv_checks, std::to_string(sv_ok) + " of " + std::to_string(sv_checks) +
                                  " short-vector sets match box enumeration on registry lattices");
  // SNF against gcd of minors
  std::size_t snf_ok = 0;
  for (int t = 0; t < 100; ++t) {
    const IntMatrix m = oracle::random_matrix(oracle::uniform(1, 4), oracle::uniform(1, 4), -9, 9);
    std::vector<Int> got;
    for (const auto& d : smith_normal_form(m).invariant_factors()) got.push_back(d);
    if (got == oracle::minors_invariant_factors(m)) ++snf_ok;
  }
  c.check(snf_ok == 100, std::to_string(snf_ok) + " of 100 SNF invariant factor lists match the minors oracle");
  return c;
}

Criterion c9() {
  Criterion c{9, "Remark-level count-2 pattern", true};
  const auto pm = HodgeIsometrySpec::pm_id();
  for (int n : {11, 17, 26, 28})
    guarded(c, "L_" + std::to_string(n), [&] {
      const Lattice l = catalog::l_n_primitive(n);
      const auto k = registry_detail::self_class_count(l, count_fm(l, pm));
      c.check(k == 2, eq("L_" + std::to_string(n) + " self-class count", k, 2));
    });
  for (auto [a, b] : std::vector<std::pair<int, int>>{{4, 6}, {5, 6}, {6, 5}, {6, 10}, {8, 6}, {9, 8}})
    guarded(c, "L_ab", [&, a = a, b = b] {
      const Lattice l = catalog::l_ab(a, b);
      const auto k = count_fm_fixed_complement(l, l, pm);
      c.check(k == 2, eq("L_{" + std::to_string(a) + "," + std::to_string(b) + "} fixed-complement self count", k, 2));
    });
  return c;
}

Criterion c10() {
  Criterion c{10, "Consistency audit"};
  guarded(c, "registry", [&] {
    const auto results = run_registry(paper_examples());
    bool det = false, glue = false;
    for (const auto& r : results)
      for (const auto& w : r.warnings) {
        det = det || (r.label == "N3_determinant" && w.find("computed 2232") != std::string::npos &&
                      w.find("stated 2242") != std::string::npos);
        glue = glue || (r.label == "N3_gluing_identity" && w.find("not a square") != std::string::npos);
      }
    c.check(det, "N3 determinant warning (computed 2232, stated 2242)");
    c.check(glue, "gluing-identity non-square warning");
    c.check(registry_passed(results), "all core rows pass");
  });
#ifdef FMLAT_CLI
  const std::string cmd = std::string(FMLAT_CLI) + " verify-paper 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  if (p) {
    std::array<char, 4096> buf{};
    std::size_t k;
    while ((k = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), k);
    const int status = pclose(p);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    c.check(code == 0, "verify-paper exits " + std::to_string(code));
    c.check(out.find("computed 2232, stated 2242") != std::string::npos, "verify-paper prints the N3 warning");
  } else {
    c.check(false, "could not run verify-paper");
  }
#endif
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t seed = oracle::seed();
  bool verbose = false;
  CLI::App app{"Acceptance criteria"};
  app.add_option("--seed", seed, "seed for the randomized criteria");
  app.add_flag("-v,--verbose", verbose, "print passing checks too");
  CLI11_PARSE(app, argc, argv);
  oracle::rng().seed(seed);
  std::cout << "seed " << seed << "\n";

  bool all = true;
  for (auto make : {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10}) {
    const Criterion c = make();
    const std::string status = c.ok() ? "PASS" : (c.warn_only ? "WARN" : "FAIL");
    if (!c.ok() && !c.warn_only) all = false;
    std::cout << "criterion " << c.number << ": " << status << "  " << c.title << "\n";
    for (const auto& [good, what] : c.checks)
      if (verbose || !good) std::cout << "    " << (good ? "ok   " : "FAIL ") << what << "\n";
  }
  return all ? 0 : 1;
}
