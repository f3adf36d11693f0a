#pragma once
// Worked examples with their expected values. Each row computes a short
// string and compares it with the expected one. Core rows must match; a
// mismatch in a remark-level or consistency row is only a warning.

#include <functional>
#include <string>
#include <vector>

#include "fmlat/counting.hpp"

namespace fmlat {

enum class Provenance { core, remark, consistency };
enum class RowStatus { pass, fail, warn };

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::core: return "core";
    case Provenance::remark: return "remark";
    case Provenance::consistency: return "consistency";
  }
  return {};
}

inline std::string to_string(RowStatus s) {
  switch (s) {
    case RowStatus::pass: return "PASS";
    case RowStatus::fail: return "FAIL";
    case RowStatus::warn: return "WARN";
  }
  return {};
}

struct RowOutput {
  std::string computed;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
};

struct PaperExample {
  std::string label;
  Provenance provenance;
  std::string description;
  std::string expected;
  std::function<RowOutput()> run;
};

struct RowResult {
  std::string label;
  Provenance provenance;
  std::string description;
  std::string expected;
  std::string computed;
  RowStatus status;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
};

namespace registry_detail {

inline const IntMatrix kL10N{{24, -3}, {-3, 10}};
inline const IntMatrix kN1{{62, 0}, {0, 4}};
inline const IntMatrix kN2{{126, 2}, {2, 2}};
inline const IntMatrix kN3{{66, 12}, {12, 36}};
inline const IntMatrix kN4{{18, -60}, {-60, 324}};
inline const Int kN3StatedDisc = 2242;

inline RowOutput count_row(std::size_t c) { return {std::to_string(c), {}, {}}; }

inline bool is_square(const Int& x) {
  if (x < 0) return false;
  const Int r = boost::multiprecision::sqrt(x);
  return r * r == x;
}

/// Solves a b = 3 |G|^2 for |G|, or says why there is no integral solution.
inline std::string glue_order_text(const Int& disc_t, const Int& disc_n) {
  const Int p = disc_t * disc_n;
  if (p % 3 != 0) return disc_t.str() + "*" + disc_n.str() + " is not divisible by 3";
  const Int s = p / 3;
  if (!is_square(s)) return disc_t.str() + "*" + disc_n.str() + "/3 = " + s.str() + " is not a square";
  return "|G| = " + boost::multiprecision::sqrt(s).str();
}

/// Per-representative count of the class isometric to n; 0 if n was filtered out.
inline std::size_t self_class_count(const Lattice& n, const FmCountReport& r) {
  for (const auto& rep : r.representatives)
    if (is_isometric_definite(Lattice(rep.gram), n)) return rep.count;
  return 0;
}

inline std::string genus_sizes(const Lattice& l) {
  auto reps = genus_representatives(l);
  return std::to_string(reps.size());
}

}  // namespace registry_detail

/// The registry behind verify-paper, in a fixed order.
inline std::vector<PaperExample> paper_examples() {
  using namespace registry_detail;
  const auto pm = HodgeIsometrySpec::pm_id();
  std::vector<PaperExample> rows;

  rows.push_back({"pfaffian_very_general", Provenance::core, "count_fm(<42>, +-id)", "1",
                  [pm] { return count_row(count_fm(catalog::pfaffian_primitive(), pm).total); }});
  rows.push_back({"two_planes", Provenance::core, "count_fm_general([[12,-3],[-3,6]], +-id)", "1", [pm] {
                    auto r = count_fm_general(catalog::two_planes_primitive(), pm);
                    return RowOutput{std::to_string(r.total), r.warnings, r.notes};
                  }});
  rows.push_back({"L10", Provenance::core, "count_fm([[24,-3],[-3,10]], +-id)", "2",
                  [pm] { return count_row(count_fm(Lattice(kL10N), pm).total); }});
  rows.push_back({"L10_H(N)", Provenance::core, "h_filter of the genus of N", "{N}", [] {
                    auto h = h_filter(genus_representatives(Lattice(kL10N)));
                    if (h.size() == 1 && is_isometric_definite(h.front(), Lattice(kL10N))) return RowOutput{"{N}", {}, {}};
                    std::string s = "{";
                    for (std::size_t i = 0; i < h.size(); ++i) s += (i ? ", " : "") + to_string(h[i].gram());
                    return RowOutput{s + "}", {}, {}};
                  }});
  rows.push_back({"L10_genus_N", Provenance::core, "genus size of [[24,-3],[-3,10]]", "2",
                  [] { return RowOutput{genus_sizes(Lattice(kL10N)), {}, {}}; }});
  rows.push_back({"L10_genus_L10", Provenance::core, "genus size of L_10 (odd, ternary)", "5",
                  [] { return RowOutput{genus_sizes(catalog::l_n(10)), {}, {}}; }});
  rows.push_back({"L2,9_genus", Provenance::core, "genus size of L_{2,9}", "3",
                  [] { return RowOutput{genus_sizes(catalog::l_ab(2, 9)), {}, {}}; }});
  rows.push_back({"L2,9_self", Provenance::core, "count_fm_fixed_complement(L_{2,9}, L_{2,9}, +-id)", "2", [pm] {
                    const Lattice l = catalog::l_ab(2, 9);
                    return count_row(count_fm_fixed_complement(l, l, pm));
                  }});
  rows.push_back({"L2,9_N1", Provenance::core, "count_fm_fixed_complement(L_{2,9}, [[62,0],[0,4]], +-id)", "1",
                  [pm] { return count_row(count_fm_fixed_complement(catalog::l_ab(2, 9), Lattice(kN1), pm)); }});
  rows.push_back({"L2,9_N2_excluded", Provenance::core, "[[126,2],[2,2]] fails the H filter",
                  "excluded by a vector of square 2", [] {
                    auto w = h_filter_witness(Lattice(kN2));
                    if (!w) return RowOutput{"passes the H filter", {}, {}};
                    return RowOutput{"excluded by a vector of square " + w->square.str(), {},
                                     {"witness " + to_string(w->vector)}};
                  }});

  for (int n : {11, 17, 26, 28})
    rows.push_back({"L" + std::to_string(n) + "_self", Provenance::remark,
                    "count_fm(N, +-id) on the class of N, N = h^2-perp in L_" + std::to_string(n), "2", [n, pm] {
                      const Lattice l = catalog::l_n_primitive(n);
                      return RowOutput{std::to_string(self_class_count(l, count_fm(l, pm))), {},
                                       {"N = " + to_string(l.gram())}};
                    }});
  for (auto [a, b] : std::vector<std::pair<int, int>>{{4, 6}, {5, 6}, {6, 5}, {6, 10}, {8, 6}, {9, 8}})
    rows.push_back({"L" + std::to_string(a) + "," + std::to_string(b) + "_self", Provenance::remark,
                    "count_fm_fixed_complement(L_{a,b}, L_{a,b}, +-id)", "2", [a, b, pm] {
                      const Lattice l = catalog::l_ab(a, b);
                      return count_row(count_fm_fixed_complement(l, l, pm));
                    }});

  rows.push_back({"two_planes_surjectivity", Provenance::consistency,
                  "O(N) -> O(A_N) for N = [[12,-3],[-3,6]]", "surjective", [] {
                    const Lattice n = catalog::two_planes_primitive();
                    const std::size_t img = disc_isometry_image(n).size();
                    const std::size_t all = isometry_group(discriminant_form(n)).size();
                    if (img == all) return RowOutput{"surjective", {}, {}};
                    return RowOutput{"image of order " + std::to_string(img) + " in O(A_N) of order " +
                                         std::to_string(all),
                                     {"two-planes: O(N) -> O(A_N) is not surjective (image " + std::to_string(img) +
                                      " of " + std::to_string(all) + ")"},
                                     {}};
                  }});
  rows.push_back({"N3_determinant", Provenance::consistency, "det [[66,12],[12,36]]", kN3StatedDisc.str(), [] {
                    const Int d = Lattice(kN3).determinant();
                    RowOutput out{d.str(), {}, {}};
                    if (d != kN3StatedDisc)
                      out.warnings.push_back("N3 determinant: computed " + d.str() + ", stated " +
                                             kN3StatedDisc.str() + (kN3StatedDisc % 3 != 0 ? " (which is not divisible by 3)" : ""));
                    return out;
                  }});
  rows.push_back({"N4_determinant", Provenance::consistency, "det [[18,-60],[-60,324]] equals det N3",
                  Lattice(kN3).determinant().str(), [] { return RowOutput{Lattice(kN4).determinant().str(), {}, {}}; }});
  rows.push_back({"N3_gluing_identity", Provenance::consistency,
                  "3 |G|^2 = disc(N) disc(N3) with disc(N) = 248 and the stated disc(N3) = 2242", "integral |G|", [] {
                    const Int disc_n = catalog::l_ab(2, 9).discriminant();
                    const Int disc_t = 3 * disc_n;
                    const Int d3 = Lattice(kN3).determinant();
                    RowOutput out;
                    const std::string stated = glue_order_text(disc_n, kN3StatedDisc);
                    out.computed = stated;
                    out.warnings.push_back("gluing identity with disc(N) = " + disc_n.str() + ": " + stated + "; with " +
                                           d3.str() + ": " + glue_order_text(disc_n, d3));
                    out.notes.push_back("with disc(T) = " + disc_t.str() + ": stated gives " +
                                        glue_order_text(disc_t, kN3StatedDisc) + ", computed gives " +
                                        glue_order_text(disc_t, d3));
                    return out;
                  }});
  rows.push_back({"N3_genus", Provenance::consistency, "genus of N3 is {N3, N4}, both in H", "{N3, N4}", [] {
                    const Lattice n3(kN3), n4(kN4);
                    auto reps = genus_representatives(n3);
                    auto h = h_filter(reps);
                    bool has3 = false, has4 = false;
                    for (const auto& r : h) {
                      has3 = has3 || is_isometric_definite(r, n3).has_value();
                      has4 = has4 || is_isometric_definite(r, n4).has_value();
                    }
                    if (reps.size() == 2 && h.size() == 2 && has3 && has4) return RowOutput{"{N3, N4}", {}, {}};
                    return RowOutput{std::to_string(reps.size()) + " classes, " + std::to_string(h.size()) + " in H", {}, {}};
                  }});
  return rows;
}

/// Runs one row. Exceptions become FAIL (core) or WARN (otherwise).
inline RowResult run_example(const PaperExample& e) {
  RowResult r{e.label, e.provenance, e.description, e.expected, {}, RowStatus::pass, {}, {}};
  bool matched = false;
  try {
    RowOutput out = e.run();
    r.computed = std::move(out.computed);
    r.warnings = std::move(out.warnings);
    r.notes = std::move(out.notes);
    matched = r.computed == e.expected;
  } catch (const std::exception& ex) {
    r.computed = std::string("error: ") + ex.what();
  }
  if (!matched) {
    r.status = e.provenance == Provenance::core ? RowStatus::fail : RowStatus::warn;
    if (r.warnings.empty() && r.status == RowStatus::warn)
      r.warnings.push_back(e.label + ": expected " + e.expected + ", computed " + r.computed);
  }
  return r;
}

inline std::vector<RowResult> run_registry(const std::vector<PaperExample>& rows) {
  std::vector<RowResult> out;
  out.reserve(rows.size());
  for (const auto& e : rows) out.push_back(run_example(e));
  return out;
}

inline bool registry_passed(const std::vector<RowResult>& results) {
  for (const auto& r : results)
    if (r.status == RowStatus::fail) return false;
  return true;
}

}  // namespace fmlat
