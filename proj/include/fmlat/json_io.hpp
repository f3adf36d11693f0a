#pragma once
// JSON reading and writing for Gram matrices, finite quadratic modules and
// count reports. Integers that fit in 64 bits are written as numbers, larger
// ones as decimal strings; rationals are written as "p/q" strings.

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "fmlat/catalog.hpp"
#include "fmlat/counting.hpp"

namespace fmlat {

using Json = nlohmann::ordered_json;

/// Malformed input: bad JSON, wrong shape, non-integer entries.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline Json int_to_json(const Int& x) {
  if (x >= Int(std::numeric_limits<std::int64_t>::min()) && x <= Int(std::numeric_limits<std::int64_t>::max()))
    return static_cast<std::int64_t>(x);
  return x.str();
}

inline Int int_from_json(const Json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos)
      throw InputError("not an integer: \"" + s + "\"");
    return Int(s[0] == '+' ? s.substr(1) : s);
  }
  throw InputError("expected an integer, got " + j.dump());
}

inline Rat rat_from_json(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(int_from_json(Json(s)));
    const Int den = int_from_json(Json(s.substr(slash + 1)));
    if (den == 0) throw InputError("zero denominator in \"" + s + "\"");
    return Rat(int_from_json(Json(s.substr(0, slash)))) / Rat(den);
  }
  return Rat(int_from_json(j));
}

}  // namespace detail

inline Json to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(detail::int_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const IntVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(detail::int_to_json(x));
  return out;
}

/// A square symmetric integer matrix. Degeneracy is not checked here.
inline IntMatrix gram_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InputError("Gram matrix must be a non-empty array of rows");
  const std::size_t n = j.size();
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) throw InputError("Gram matrix must be square");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = detail::int_from_json(j[i][k]);
  }
  if (!m.is_symmetric()) throw InputError("Gram matrix must be symmetric");
  return m;
}

/// Lattice input: a bare Gram array, {"gram": ...}, or {"name": ..., "params": [...]}.
inline IntMatrix lattice_gram_from_json(const Json& j) {
  if (j.is_array()) return gram_from_json(j);
  if (!j.is_object()) throw InputError("lattice input must be a Gram array or an object");
  if (j.contains("gram")) return gram_from_json(j.at("gram"));
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw InputError("\"name\" must be a string");
    std::vector<Int> params;
    if (j.contains("params")) {
      if (!j.at("params").is_array()) throw InputError("\"params\" must be an array");
      for (const auto& p : j.at("params")) params.push_back(detail::int_from_json(p));
    }
    try {
      return catalog::by_name(j.at("name").get<std::string>(), params).gram();
    } catch (const PreconditionError& e) {
      throw InputError(e.what());
    }
  }
  throw InputError("lattice object needs \"gram\" or \"name\"");
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

inline Json to_json(const FiniteQuadraticModule& a) {
  Json out;
  out["orders"] = a.orders();
  Json q = Json::array(), b = Json::array();
  for (std::size_t i = 0; i < a.ngens(); ++i) {
    if (a.is_quadratic()) q.push_back(a.q(a.gen(i)).str());
    Json row = Json::array();
    for (std::size_t k = 0; k < a.ngens(); ++k) row.push_back(a.b(a.gen(i), a.gen(k)).str());
    b.push_back(std::move(row));
  }
  if (a.is_quadratic()) out["q"] = std::move(q);
  out["b"] = std::move(b);
  out["quadratic"] = a.is_quadratic();
  return out;
}

/// Inverse of to_json: q gives the diagonal, b the off-diagonal values.
inline FiniteQuadraticModule fqm_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("orders") || !j.contains("b"))
    throw InputError("module needs \"orders\" and \"b\"");
  const bool quadratic = j.value("quadratic", true);
  if (quadratic && !j.contains("q")) throw InputError("quadratic module needs \"q\"");
  std::vector<std::int64_t> orders;
  for (const auto& d : j.at("orders")) {
    const Int x = detail::int_from_json(d);
    if (x <= 1 || x > Int(1) << 40) throw InputError("generator orders must be integers greater than 1");
    orders.push_back(static_cast<std::int64_t>(x));
  }
  const std::size_t k = orders.size();
  const Json& b = j.at("b");
  if (!b.is_array() || b.size() != k) throw InputError("\"b\" must be a k x k array");
  if (quadratic && (!j.at("q").is_array() || j.at("q").size() != k)) throw InputError("\"q\" must have k entries");
  RatMatrix gram(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!b[i].is_array() || b[i].size() != k) throw InputError("\"b\" must be a k x k array");
    for (std::size_t l = 0; l < k; ++l) gram(i, l) = detail::rat_from_json(b[i][l]);
    if (quadratic) {
      const Rat q = detail::rat_from_json(j.at("q")[i]);
      const Rat d = q - gram(i, i);
      if (denominator(d) != 1) throw InputError("b(g,g) must equal q(g) mod 1 for every generator");
      gram(i, i) = q;
    }
  }
  try {
    return FiniteQuadraticModule::from_rational_gram(orders, gram, quadratic);
  } catch (const PreconditionError& e) {
    throw InputError(e.what());
  }
}

inline Json to_json(const FmCountReport& r) {
  Json out;
  out["input"] = to_json(r.input);
  out["path"] = r.path;
  out["assumption"] = r.assumption;
  out["transcendental"] = to_json(r.transcendental);
  Json reps = Json::array();
  for (const auto& rep : r.representatives) {
    Json x;
    x["gram"] = to_json(rep.gram);
    x["count"] = rep.count;
    reps.push_back(std::move(x));
  }
  out["representatives"] = std::move(reps);
  out["total"] = r.total;
  out["warnings"] = r.warnings;
  out["notes"] = r.notes;
  return out;
}

inline FmCountReport report_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("report must be an object");
  try {
    FmCountReport r;
    r.input = gram_from_json(j.at("input"));
    r.path = j.at("path").get<std::string>();
    r.assumption = j.at("assumption").get<std::string>();
    r.transcendental = fqm_from_json(j.at("transcendental"));
    for (const auto& x : j.at("representatives"))
      r.representatives.push_back({gram_from_json(x.at("gram")), x.at("count").get<std::size_t>()});
    r.total = j.at("total").get<std::size_t>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.notes = j.value("notes", std::vector<std::string>{});
    return r;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace fmlat
