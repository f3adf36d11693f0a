#pragma once
// Counting Fourier-Mukai partners of cubic fourfolds from lattice data:
// the double-coset formula over H(N), the fixed-complement count, and the
// general orbit count over gluing data.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fmlat/catalog.hpp"
#include "fmlat/genus.hpp"
#include "fmlat/gluing.hpp"

namespace fmlat {

inline constexpr const char* kTorelliBanner =
    "counts are valid under the derived Torelli assumption for Kuznetsov components";

/// The group O_Hodge(T), seen through its image in O(A_T).
struct HodgeIsometrySpec {
  enum class Mode { pm_id, full, trivial, explicit_list };
  Mode mode = Mode::pm_id;
  std::vector<FqmIsometry> isometries;  // explicit_list only

  static HodgeIsometrySpec pm_id() { return {Mode::pm_id, {}}; }
  static HodgeIsometrySpec full() { return {Mode::full, {}}; }
  static HodgeIsometrySpec trivial() { return {Mode::trivial, {}}; }
  static HodgeIsometrySpec explicit_list(std::vector<FqmIsometry> list) {
    return {Mode::explicit_list, std::move(list)};
  }

  std::string describe() const {
    switch (mode) {
      case Mode::pm_id: return "O_Hodge(T) acts on A_T as {id, -id}";
      case Mode::full: return "O_Hodge(T) acts on A_T as the full group O(A_T)";
      case Mode::trivial: return "O_Hodge(T) acts trivially on A_T";
      case Mode::explicit_list: return "O_Hodge(T) acts on A_T through an explicit list of " +
                                       std::to_string(isometries.size()) + " isometries";
    }
    return {};
  }
};

/// Elements of the image of O_Hodge(T) in O(A_T), sorted.
inline std::vector<FqmIsometry> hodge_group(const HodgeIsometrySpec& spec, const FiniteQuadraticModule& a_t,
                                            std::int64_t bound = kDefaultEnumerationBound) {
  using Mode = HodgeIsometrySpec::Mode;
  switch (spec.mode) {
    case Mode::pm_id: return generated_group(a_t, {negation(a_t)});
    case Mode::trivial: return generated_group(a_t, {});
    case Mode::full: return isometry_group(a_t, bound);
    case Mode::explicit_list: {
      for (const auto& f : spec.isometries)
        if (!is_isometry(a_t, a_t, f)) throw PreconditionError("explicit Hodge list contains a non-isometry of A_T");
      std::vector<FqmIsometry> list = spec.isometries;
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      if (generated_group(a_t, list) != list)
        throw PreconditionError("explicit Hodge list is not a subgroup containing the identity");
      return list;
    }
  }
  return {};
}

struct RepresentativeCount {
  IntMatrix gram;
  std::size_t count = 0;
};

struct FmCountReport {
  IntMatrix input;
  std::string path;
  std::string assumption;
  FiniteQuadraticModule transcendental;
  std::vector<RepresentativeCount> representatives;
  std::size_t total = 0;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
};

namespace detail {

inline void require_even_definite(const Lattice& n, const char* what) {
  require_definite(n, 3, what);
  if (!n.is_even()) throw PreconditionError(std::string(what) + " requires an even lattice");
}

/// Orbits of Iso(s, t) under precomposition with `left` (automorphisms of s)
/// and postcomposition with `right` (automorphisms of t).
inline std::size_t isometry_orbit_count(const FiniteQuadraticModule& s, const FiniteQuadraticModule& t,
                                        const std::vector<FqmIsometry>& left, const std::vector<FqmIsometry>& right,
                                        std::int64_t bound) {
  auto isos = search_isometries(s, t, static_cast<std::size_t>(-1), bound);
  std::sort(isos.begin(), isos.end());
  std::map<FqmIsometry, std::size_t> index;
  for (std::size_t i = 0; i < isos.size(); ++i) index.emplace(isos[i], i);
  std::vector<char> seen(isos.size(), 0);
  std::size_t orbits = 0;
  for (std::size_t i = 0; i < isos.size(); ++i) {
    if (seen[i]) continue;
    ++orbits;
    seen[i] = 1;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const FqmIsometry g = isos[stack.back()];
      stack.pop_back();
      auto visit = [&](const FqmIsometry& h) {
        auto it = index.find(h);
        if (it == index.end()) throw std::logic_error("orbit left the set of isometries");
        if (!seen[it->second]) {
          seen[it->second] = 1;
          stack.push_back(it->second);
        }
      };
      for (const auto& f : left) visit(compose(t, g, f));
      for (const auto& h : right) visit(compose(t, h, g));
    }
  }
  return orbits;
}

inline std::vector<Lattice> complement_candidates(const Lattice& n, bool virtual_count, FmCountReport& report) {
  auto reps = genus_representatives(n);
  report.notes.push_back("genus of N has " + std::to_string(reps.size()) + " classes");
  if (virtual_count) {
    report.warnings.push_back("virtual count: genus representatives are not filtered by H(N)");
    return reps;
  }
  auto kept = h_filter(reps);
  report.notes.push_back("H(N) keeps " + std::to_string(kept.size()) + " of them");
  return kept;
}

}  // namespace detail

/// A_T for N = A(X)_prim when 3 does not divide disc(T): the coprime-to-3
/// part of A_N with q negated.
inline FiniteQuadraticModule derive_transcendental_fqm(const Lattice& n) {
  detail::require_even_definite(n, "derive_transcendental_fqm");
  try {
    return split_off_3(discriminant_form(n)).transcendental;
  } catch (const PreconditionError& e) {
    throw PreconditionError(std::string(e.what()) + "; use the general counting path");
  }
}

/// Sum over N' in H(N) of |O(N') \ O(A_T) / O_Hodge(T)|, valid when 3 does
/// not divide disc(T). With `virtual_count` the genus is not filtered.
inline FmCountReport count_fm(const Lattice& n, const HodgeIsometrySpec& hodge, bool virtual_count = false,
                              std::int64_t bound = kDefaultEnumerationBound) {
  FmCountReport report;
  report.input = n.gram();
  report.path = "split";
  report.assumption = hodge.describe() + "; " + kTorelliBanner;
  report.transcendental = derive_transcendental_fqm(n);
  const FiniteQuadraticModule& a_t = report.transcendental;
  const auto right = hodge_group(hodge, a_t, bound);
  report.notes.push_back("A_T is the coprime-to-3 part of A_N(-1), order " + a_t.order_exact().str());
  for (const auto& np : detail::complement_candidates(n, virtual_count, report)) {
    const DiscriminantForm dn = discriminant_form_data(np);
    const SplitOffThree split = split_off_3(dn.module);
    std::vector<FqmIsometry> left;
    for (const auto& f : automorphism_group(np, 3)) left.push_back(coprime_action(dn, split, f.matrix, bound));
    const std::size_t c = detail::isometry_orbit_count(split.transcendental, a_t, left, right, bound);
    report.representatives.push_back({np.gram(), c});
    report.total += c;
  }
  return report;
}

/// |O(N') \ O(A_N) / O_Hodge(T)| for one complement N' in H(N), valid when 3
/// does not divide disc(N). Then A_T = A_N(-1) + C_3 and the Hodge action is
/// read on the A_N(-1) summand.
inline std::size_t count_fm_fixed_complement(const Lattice& n, const Lattice& n_prime, const HodgeIsometrySpec& hodge,
                                             std::int64_t bound = kDefaultEnumerationBound) {
  detail::require_even_definite(n, "count_fm_fixed_complement");
  detail::require_even_definite(n_prime, "count_fm_fixed_complement");
  if (n.discriminant() % 3 == 0) throw PreconditionError("count_fm_fixed_complement requires 3 not dividing disc(N)");
  if (!same_genus(n, n_prime)) throw PreconditionError("N' is not in the genus of N");
  if (auto w = h_filter_witness(n_prime))
    throw PreconditionError("N' is not in H(N): it contains " + to_string(w->vector) + " of square " +
                            w->square.str() + " and divisibility " + w->divisibility.str());
  const FiniteQuadraticModule a_n = discriminant_form(n);
  const FiniteQuadraticModule a_t = orthogonal_sum(rescale_fqm(a_n, -1), discriminant_form(catalog::a2()));
  std::vector<FqmIsometry> right;
  for (const auto& h : hodge_group(hodge, a_t, bound)) {
    FqmIsometry r;
    for (std::size_t i = 0; i < a_n.ngens(); ++i)
      r.images.emplace_back(h.images[i].begin(), h.images[i].begin() + static_cast<std::ptrdiff_t>(a_n.ngens()));
    right.push_back(std::move(r));
  }
  const DiscriminantForm dp = discriminant_form_data(n_prime);
  std::vector<FqmIsometry> left;
  for (const auto& f : automorphism_group(n_prime, 3)) left.push_back(dp.reduce(f.matrix));
  return detail::isometry_orbit_count(dp.module, a_n, left, right, bound);
}

/// Candidate A_T for X with A(X)_prim = N: T is the orthogonal complement of
/// the saturation of N + A2(-1) in the even unimodular lattice of signature
/// (20,4), so A_T = (Gamma^perp / Gamma)(-1) for a glue Gamma in
/// A_N + A_{A2(-1)}. Nontrivial glues are preferred; one module per isometry class.
inline std::vector<FiniteQuadraticModule> transcendental_candidates(const Lattice& n,
                                                                    std::int64_t bound = kGluingEnumerationBound) {
  detail::require_even_definite(n, "transcendental_candidates");
  const FiniteQuadraticModule a_n = discriminant_form(n);
  const FiniteQuadraticModule c3m = discriminant_form(rescale(catalog::a2(), -1));
  const FiniteQuadraticModule k = orthogonal_sum(a_n, c3m);
  std::vector<FiniteQuadraticModule> out;
  auto add = [&](const FiniteQuadraticModule& m) {
    for (const auto& o : out)
      if (is_isometric(o, m, bound)) return;
    out.push_back(m);
  };
  const std::size_t kn = a_n.ngens();
  for (const auto& g : isotropic_subgroups(k, bound)) {
    if (g.order() != 3) continue;
    const Element x = k.element_at(g.members[1]);
    const bool n_zero = std::all_of(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(kn), [](auto v) { return v == 0; });
    const bool c_zero = std::all_of(x.begin() + static_cast<std::ptrdiff_t>(kn), x.end(), [](auto v) { return v == 0; });
    if (n_zero || c_zero) continue;  // not a graph: N or A2(-1) would not be primitive
    add(rescale_fqm(normal_form(perp_quotient(k, g, bound)).module, -1));
  }
  if (out.empty()) out.push_back(rescale_fqm(normal_form(k).module, -1));
  return out;
}

/// A vector v of N' with v^2 = 6 and divisibility 3 in the overlattice glued
/// along `data`: v/3 lies in N'^v and its class is orthogonal to the glue group.
/// When G has no 3-torsion this is divisibility 3 inside N' itself.
inline std::optional<IntVector> ambient_long_root(const Lattice& np, const GluingData& data) {
  const DiscriminantForm dn = discriminant_form_data(np);
  for (const auto& v : short_vectors(np, 6)) {
    if (np.divisibility(v) % 3 != 0) continue;
    RatVector w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = Rat(v[i]) / 3;
    const Element x = dn.element_of(w);
    bool orthogonal = true;
    for (const auto& [g, img] : data.graph)
      if (dn.module.b_num(x, g) != 0) {
        orthogonal = false;
        break;
      }
    if (orthogonal) return v;
  }
  return std::nullopt;
}

/// Orbit count of gluing data (G, gamma) of T into the primitive cohomology
/// lattice, per complement N' in H(N), without assuming 3 does not divide disc(T).
inline FmCountReport count_fm_general(const Lattice& n, const HodgeIsometrySpec& hodge,
                                      const std::optional<FiniteQuadraticModule>& a_t_given = std::nullopt,
                                      bool virtual_count = false, std::int64_t bound = kGluingEnumerationBound) {
  detail::require_even_definite(n, "count_fm_general");
  FmCountReport report;
  report.input = n.gram();
  report.path = "general";
  report.assumption = hodge.describe() + "; " + kTorelliBanner;
  if (a_t_given) {
    report.transcendental = *a_t_given;
    report.notes.push_back("A_T supplied by the caller");
  } else {
    auto cands = transcendental_candidates(n, bound);
    if (cands.size() != 1)
      throw PreconditionError("A_T is not determined by N (" + std::to_string(cands.size()) +
                              " candidates); supply it explicitly");
    report.transcendental = cands.front();
    report.notes.push_back("A_T derived from the saturation of N + A2(-1), order " +
                           report.transcendental.order_exact().str());
  }
  const FiniteQuadraticModule& a_t = report.transcendental;
  const auto right = hodge_group(hodge, a_t, bound);
  const AmbientGenus ambient{22, Signature{20, 2}, discriminant_form(catalog::a2())};
  const Signature sig_t{20 - n.rank(), 2};
  auto reps = genus_representatives(n);
  report.notes.push_back("genus of N has " + std::to_string(reps.size()) + " classes");
  if (virtual_count) report.warnings.push_back("virtual count: genus representatives are not filtered by H(N)");
  for (const auto& np : reps) {
    if (!virtual_count && !short_vectors(np, 2).empty()) continue;
    const auto classes = embedding_classes(a_t, sig_t, ambient, np, right, bound);
    std::size_t kept = 0;
    for (const auto& c : classes)
      if (virtual_count || !ambient_long_root(np, c.data)) ++kept;
    if (kept == 0 && !virtual_count) continue;
    if (kept != classes.size())
      report.notes.push_back(to_string(np.gram()) + ": " + std::to_string(classes.size() - kept) + " of " +
                             std::to_string(classes.size()) +
                             " gluing classes contain a vector of square 6 and divisibility 3 in the ambient lattice");
    report.representatives.push_back({np.gram(), kept});
    report.total += kept;
  }
  return report;
}

}  // namespace fmlat
