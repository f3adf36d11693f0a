// fmlat: lattice inspection, genus queries, finite quadratic modules and
// Fourier-Mukai partner counts for cubic fourfolds.
//
// Exit codes: 0 ok, 2 malformed input, 3 degenerate lattice, 4 rank or
// definiteness outside the supported range, 5 failed precondition,
// 6 verification mismatch.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fmlat/json_io.hpp"
#include "fmlat/registry.hpp"

using namespace fmlat;

namespace {

enum ExitCode { kOk = 0, kParse = 2, kDegenerate = 3, kShape = 4, kPrecondition = 5, kMismatch = 6 };

struct Failure : std::runtime_error {
  int code;
  Failure(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

struct Config {
  std::string input_file;
  std::string gram;
  std::string format = "table";
  std::int64_t bound = 0;  // 0: per-operation default
  std::uint64_t seed = 20240601;
  bool h_filter = false;
  std::string fixed_complement;
  std::string hodge = "pm_id";
  bool general_path = false;
  bool virtual_count = false;
  bool dry_run = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure(kParse, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json input_json(const Config& c) {
  if (c.input_file.empty() == c.gram.empty()) throw Failure(kParse, "give exactly one of --input and --gram");
  return parse_json_text(c.gram.empty() ? read_file(c.input_file) : c.gram);
}

Lattice to_lattice(const IntMatrix& g) {
  if (determinant(g) == 0) throw Failure(kDegenerate, "degenerate Gram matrix (determinant 0)");
  return Lattice(g);
}

void require_definite(const Lattice& l, std::size_t max_rank, bool even) {
  if (l.rank() > max_rank || !l.is_positive_definite())
    throw Failure(kShape, "expected a positive definite lattice of rank at most " + std::to_string(max_rank) +
                              ", got rank " + std::to_string(l.rank()) + " and signature (" +
                              std::to_string(l.signature().positive) + "," +
                              std::to_string(l.signature().negative) + ")");
  if (even && !l.is_even()) throw Failure(kShape, "expected an even lattice");
}

std::int64_t bound_or(const Config& c, std::int64_t fallback) { return c.bound > 0 ? c.bound : fallback; }

std::string json_inline(const Json& j) { return j.dump(); }

void print(const Config& c, const Json& j, const std::vector<std::pair<std::string, std::string>>& table) {
  if (c.format == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::size_t w = 0;
  for (const auto& [k, v] : table) w = std::max(w, k.size());
  for (const auto& [k, v] : table) std::cout << k << std::string(w - k.size() + 2, ' ') << v << "\n";
}

// lattice-info

int cmd_lattice_info(const Config& c) {
  const Lattice l = to_lattice(lattice_gram_from_json(input_json(c)));
  const FiniteQuadraticModule a = l.is_even() ? discriminant_form(l) : discriminant_bilinear_form(l);
  Json j;
  j["gram"] = to_json(l.gram());
  j["rank"] = l.rank();
  j["signature"] = {l.signature().positive, l.signature().negative};
  j["determinant"] = detail::int_to_json(l.determinant());
  j["discriminant"] = detail::int_to_json(l.discriminant());
  j["parity"] = l.is_even() ? "even" : "odd";
  j["invariant_factors"] = a.invariant_factors();
  j["discriminant_form"] = to_json(a);
  j["genus_symbol"] = genus_symbol(l).str();
  std::string inv;
  for (auto d : a.invariant_factors()) inv += (inv.empty() ? "Z/" : " + Z/") + std::to_string(d);
  print(c, j,
        {{"gram", to_string(l.gram())},
         {"rank", std::to_string(l.rank())},
         {"signature", "(" + std::to_string(l.signature().positive) + "," + std::to_string(l.signature().negative) + ")"},
         {"determinant", l.determinant().str()},
         {"discriminant", l.discriminant().str()},
         {"parity", l.is_even() ? "even" : "odd"},
         {"discriminant group", inv.empty() ? "0" : inv},
         {"discriminant form", a.describe()},
         {"genus symbol", genus_symbol(l).str()}});
  return kOk;
}

// genus

int cmd_genus(const Config& c) {
  const Lattice l = to_lattice(lattice_gram_from_json(input_json(c)));
  require_definite(l, 3, false);
  const auto reps = genus_representatives(l);
  Json j;
  j["input"] = to_json(l.gram());
  j["genus_symbol"] = genus_symbol(l).str();
  j["genus_size"] = reps.size();
  j["h_filter"] = c.h_filter;
  Json kept = Json::array(), excluded = Json::array();
  std::vector<std::pair<std::string, std::string>> table{{"input", to_string(l.gram())},
                                                         {"genus symbol", genus_symbol(l).str()},
                                                         {"genus size", std::to_string(reps.size())}};
  for (const auto& r : reps) {
    const IntMatrix g = minkowski_canonical(r);
    std::optional<HFilterWitness> w;
    if (c.h_filter) w = h_filter_witness(r);
    if (!w) {
      kept.push_back(to_json(g));
      table.emplace_back("representative", to_string(g));
      continue;
    }
    Json x;
    x["gram"] = to_json(g);
    x["witness"] = {{"vector", to_json(w->vector)},
                    {"square", detail::int_to_json(w->square)},
                    {"divisibility", detail::int_to_json(w->divisibility)}};
    excluded.push_back(std::move(x));
    table.emplace_back("excluded", to_string(g) + "  vector " + to_string(w->vector) + " of square " +
                                       w->square.str() + " and divisibility " + w->divisibility.str());
  }
  j["count"] = kept.size();
  j["representatives"] = std::move(kept);
  if (c.h_filter) j["excluded"] = std::move(excluded);
  table.insert(table.begin() + 3, {"count", std::to_string(j["count"].get<std::size_t>())});
  print(c, j, table);
  return kOk;
}

// fqm

int cmd_fqm(const Config& c) {
  const Json in = input_json(c);
  FiniteQuadraticModule a;
  if (in.is_object() && in.contains("orders")) {
    a = fqm_from_json(in);
  } else {
    const Lattice l = to_lattice(lattice_gram_from_json(in));
    a = l.is_even() ? discriminant_form(l) : discriminant_bilinear_form(l);
  }
  const std::int64_t bound = bound_or(c, kDefaultEnumerationBound);
  if (a.order_exact() > bound)
    throw Failure(kPrecondition, "module of order " + a.order_exact().str() + " exceeds the enumeration bound " +
                                     std::to_string(bound) + "; raise --bound");
  if (!a.is_valid(bound)) throw Failure(kParse, "the given values do not define a form on the group");
  Json j;
  j["module"] = to_json(a);
  j["order"] = detail::int_to_json(a.order_exact());
  j["invariant_factors"] = a.invariant_factors();
  const bool nondeg = a.is_nondegenerate(bound);
  j["nondegenerate"] = nondeg;
  std::vector<std::pair<std::string, std::string>> table{{"module", a.describe()},
                                                         {"order", a.order_exact().str()},
                                                         {"invariant factors", json_inline(j["invariant_factors"])},
                                                         {"nondegenerate", nondeg ? "yes" : "no"}};
  if (nondeg && a.is_quadratic()) {
    const int s = signature_mod8(a, bound);
    j["signature_mod8"] = s;
    table.emplace_back("signature mod 8", std::to_string(s));
  }
  if (nondeg) {
    const auto iso = isometry_group(a, bound);
    j["isometry_group_order"] = iso.size();
    table.emplace_back("|O(A)|", std::to_string(iso.size()));
    const auto nf = normal_form(a).module;
    j["normal_form"] = to_json(nf);
    table.emplace_back("normal form", nf.describe());
  }
  print(c, j, table);
  return kOk;
}

// count-fm

std::vector<FqmIsometry> read_isometry_list(const std::string& path) {
  const Json j = parse_json_text(read_file(path));
  if (!j.is_array()) throw Failure(kParse, "Hodge file must hold an array of isometries");
  std::vector<FqmIsometry> out;
  for (const auto& f : j) {
    if (!f.is_array()) throw Failure(kParse, "an isometry is an array of generator images");
    FqmIsometry iso;
    for (const auto& img : f) {
      if (!img.is_array()) throw Failure(kParse, "a generator image is an array of integers");
      Element x;
      for (const auto& v : img) {
        if (!v.is_number_integer()) throw Failure(kParse, "a generator image is an array of integers");
        x.push_back(v.get<std::int64_t>());
      }
      iso.images.push_back(std::move(x));
    }
    out.push_back(std::move(iso));
  }
  return out;
}

HodgeIsometrySpec hodge_spec(const Config& c) {
  if (c.hodge == "pm_id") return HodgeIsometrySpec::pm_id();
  if (c.hodge == "full") return HodgeIsometrySpec::full();
  if (c.hodge == "trivial") return HodgeIsometrySpec::trivial();
  return HodgeIsometrySpec::explicit_list(read_isometry_list(c.hodge));
}

Lattice fixed_complement(const Config& c, const Lattice& n) {
  if (c.fixed_complement == "self") return n;
  const std::string& v = c.fixed_complement;
  const bool inline_json = !v.empty() && (v[0] == '[' || v[0] == '{');
  const Lattice np = to_lattice(lattice_gram_from_json(parse_json_text(inline_json ? v : read_file(v))));
  require_definite(np, 3, true);
  return np;
}

FmCountReport fixed_complement_report(const Config& c, const Lattice& n, const HodgeIsometrySpec& hodge) {
  if (n.discriminant() % 3 == 0)
    throw Failure(kPrecondition, "--fixed-complement needs 3 not dividing disc(N) = " + n.discriminant().str() +
                                     "; use the split path (omit --fixed-complement) or --general-path");
  const Lattice np = fixed_complement(c, n);
  FmCountReport r;
  r.input = n.gram();
  r.path = "fixed-complement";
  r.assumption = hodge.describe() + "; " + kTorelliBanner;
  r.transcendental = orthogonal_sum(rescale_fqm(discriminant_form(n), -1), discriminant_form(catalog::a2()));
  const std::size_t k = count_fm_fixed_complement(n, np, hodge, bound_or(c, kDefaultEnumerationBound));
  r.representatives.push_back({np.gram(), k});
  r.total = k;
  r.notes.push_back("A_T is A_N(-1) + C_3, order " + r.transcendental.order_exact().str());
  return r;
}

int cmd_count_fm(const Config& c) {
  const Lattice n = to_lattice(lattice_gram_from_json(input_json(c)));
  require_definite(n, 3, true);
  const HodgeIsometrySpec hodge = hodge_spec(c);
  FmCountReport r;
  if (!c.fixed_complement.empty()) {
    r = fixed_complement_report(c, n, hodge);
  } else if (c.general_path) {
    r = count_fm_general(n, hodge, std::nullopt, c.virtual_count, bound_or(c, kGluingEnumerationBound));
  } else {
    const auto three = primary_part(discriminant_form(n), 3).module.order_exact();
    if (three != 3)
      throw Failure(kPrecondition, "the split path needs the 3-part of A_N to have order 3 (it has order " +
                                       three.str() + "); use --general-path");
    r = count_fm(n, hodge, c.virtual_count, bound_or(c, kDefaultEnumerationBound));
  }
  std::vector<std::pair<std::string, std::string>> table{{"input", to_string(r.input)},
                                                         {"path", r.path},
                                                         {"assumption", r.assumption},
                                                         {"A_T", r.transcendental.describe()}};
  for (const auto& rep : r.representatives)
    table.emplace_back("representative", to_string(rep.gram) + "  count " + std::to_string(rep.count));
  table.emplace_back("total", std::to_string(r.total));
  for (const auto& w : r.warnings) table.emplace_back("warning", w);
  for (const auto& note : r.notes) table.emplace_back("note", note);
  print(c, to_json(r), table);
  return kOk;
}

// verify-paper

int cmd_verify_paper(const Config& c) {
  const auto rows = c.dry_run ? std::vector<PaperExample>{} : paper_examples();
  const auto results = run_registry(rows);
  std::size_t pass = 0, fail = 0, warn = 0;
  Json jr = Json::array();
  for (const auto& r : results) {
    (r.status == RowStatus::pass ? pass : r.status == RowStatus::fail ? fail : warn)++;
    Json x;
    x["label"] = r.label;
    x["provenance"] = to_string(r.provenance);
    x["description"] = r.description;
    x["expected"] = r.expected;
    x["computed"] = r.computed;
    x["status"] = to_string(r.status);
    x["warnings"] = r.warnings;
    x["notes"] = r.notes;
    jr.push_back(std::move(x));
  }
  const bool ok = registry_passed(results);
  if (c.format == "json") {
    Json j;
    j["seed"] = c.seed;
    j["assumption"] = kTorelliBanner;
    j["rows"] = std::move(jr);
    j["summary"] = {{"pass", pass}, {"fail", fail}, {"warn", warn}};
    j["result"] = ok ? "PASS" : "FAIL";
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "seed " << c.seed << "\n" << kTorelliBanner << "\n\n";
    std::size_t wl = 5, we = 8;
    for (const auto& r : results) {
      wl = std::max(wl, r.label.size());
      we = std::max(we, r.expected.size());
    }
    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size() + 2, ' '); };
    std::cout << pad("status", 6) << pad("kind", 11) << pad("label", wl) << pad("expected", we) << "computed\n";
    for (const auto& r : results) {
      std::cout << pad(to_string(r.status), 6) << pad(to_string(r.provenance), 11) << pad(r.label, wl)
                << pad(r.expected, we) << r.computed << "\n";
      for (const auto& w : r.warnings) std::cout << "    warning: " << w << "\n";
    }
    std::cout << "\n" << pass << " pass, " << fail << " fail, " << warn << " warn: " << (ok ? "PASS" : "FAIL") << "\n";
  }
  return ok ? kOk : kMismatch;
}

void add_input(CLI::App* sub, Config& c) {
  auto* f = sub->add_option("--input", c.input_file, "JSON file with a Gram matrix or catalog entry");
  auto* g = sub->add_option("--gram", c.gram, "inline JSON Gram matrix or catalog entry");
  f->excludes(g);
}

}  // namespace

int main(int argc, char** argv) {
  Config c;
  CLI::App app{"Lattice computations for Fourier-Mukai partners of cubic fourfolds"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"table", "json"}));
  app.add_option("--bound", c.bound, "enumeration bound on module orders")->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed, "seed, echoed in verify-paper output");

  auto* info = app.add_subcommand("lattice-info", "rank, signature, discriminant, parity, discriminant form");
  add_input(info, c);
  auto* genus = app.add_subcommand("genus", "genus representatives of a positive definite lattice of rank <= 3");
  add_input(genus, c);
  genus->add_flag("--h-filter", c.h_filter, "drop classes with roots or vectors of square 6 and divisibility 3");
  auto* fqm = app.add_subcommand("fqm", "finite quadratic module given directly or as a discriminant form");
  add_input(fqm, c);
  auto* count = app.add_subcommand("count-fm", "count Fourier-Mukai partners from A(X)_prim");
  add_input(count, c);
  auto* fc = count->add_option("--fixed-complement", c.fixed_complement,
                               "count for one complement: 'self', a JSON file, or inline JSON");
  auto* gp = count->add_flag("--general-path", c.general_path, "orbit count over gluing data");
  fc->excludes(gp);
  count->add_option("--hodge", c.hodge, "pm_id, full, trivial, or a JSON file of isometries of A_T");
  count->add_flag("--virtual", c.virtual_count, "do not filter the genus by H(N)");
  auto* verify = app.add_subcommand("verify-paper", "run the worked-example registry");
  verify->add_flag("--dry-run", c.dry_run, "run an empty registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*info) return cmd_lattice_info(c);
    if (*genus) return cmd_genus(c);
    if (*fqm) return cmd_fqm(c);
    if (*count) return cmd_count_fm(c);
    if (*verify) return cmd_verify_paper(c);
  } catch (const Failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const EnumerationBoundError& e) {
    std::cerr << "error: " << e.what() << "; raise --bound\n";
    return kPrecondition;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  }
  return kOk;
}
