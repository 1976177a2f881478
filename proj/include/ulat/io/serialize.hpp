#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ulat/error.hpp"
#include "ulat/finring/builders.hpp"
#include "ulat/finring/local.hpp"
#include "ulat/finring/radical.hpp"
#include "ulat/k2/certificate.hpp"
#include "ulat/matgroup/factor.hpp"
#include "ulat/spectral/gap.hpp"
#include "ulat/spectral/tau.hpp"

namespace ulat::io {

using nlohmann::json;

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, path + ": " + e.what());
  }
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(Errc::ParseError, std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("field \"") + key + "\": " + e.what());
  }
}

// ---------------------------------------------------------------- rings

/// {"kind":"zmod","n":8}, {"kind":"quotient",...}, {"kind":"product","factors":[...]}
/// or {"kind":"table","orders":[...],"mul":[[[...]]],"one":[...]}.
inline FiniteRing ring_from_json(const json& j, std::uint64_t size_cap = kDefaultSizeCap) {
  const auto kind = field<std::string>(j, "kind");
  if (kind == "zmod") return make_zmod(field<std::int64_t>(j, "n"), size_cap);
  if (kind == "quotient")
    return make_quotient(field<std::int64_t>(j, "n"), field<std::vector<std::string>>(j, "vars"),
                         field<std::vector<std::string>>(j, "relations"),
                         field<std::vector<std::string>>(j, "monomials"), size_cap);
  if (kind == "product") {
    std::vector<FiniteRing> factors;
    for (const auto& f : field<json>(j, "factors")) factors.push_back(ring_from_json(f, size_cap));
    if (factors.empty()) throw Error(Errc::ParseError, "product needs at least one factor");
    return make_product(factors);
  }
  if (kind == "table") {
    const auto orders = field<std::vector<std::int64_t>>(j, "orders");
    std::vector<std::vector<Coeffs>> mul;
    for (const auto& row : field<std::vector<std::vector<std::vector<std::int64_t>>>>(j, "mul")) {
      mul.emplace_back();
      for (const auto& c : row) mul.back().emplace_back(c.begin(), c.end());
    }
    const auto one = field<std::vector<std::int64_t>>(j, "one");
    const std::string label = j.contains("label") ? field<std::string>(j, "label") : "table";
    return FiniteRing(orders, mul, Coeffs(one.begin(), one.end()), label, size_cap);
  }
  throw Error(Errc::ParseError, "unknown ring kind \"" + kind + "\"");
}

// ------------------------------------------------------------- elements

inline json to_json(const RingElement& x) { return std::vector<std::int64_t>(x.coeffs.begin(), x.coeffs.end()); }

/// An integer n means n * 1; a list is a coefficient vector.
inline RingElement element_from_json(const FiniteRing& R, const json& j) {
  if (j.is_number_integer()) return R.from_int(j.get<std::int64_t>());
  if (!j.is_array() || j.size() != R.dim())
    throw Error(Errc::ParseError, "element must be an integer or a list of " + std::to_string(R.dim()) + " coefficients");
  Coeffs c;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw Error(Errc::ParseError, "coefficients must be integers");
    c.push_back(v.get<std::int64_t>());
  }
  return R.reduce(c);
}

inline RingElement element_from_string(const FiniteRing& R, const std::string& s) {
  try {
    return element_from_json(R, json::parse(s));
  } catch (const json::exception&) {
    throw Error(Errc::ParseError, "cannot read element \"" + s + "\"");
  }
}

inline json to_json(const std::vector<RingElement>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(to_json(x));
  return out;
}

// ------------------------------------------------------- ring reports

inline json ring_info(const FiniteRing& R) {
  std::size_t units = 0;
  R.for_each_element([&](const RingElement& x) { units += R.is_unit(x); });
  json basis = json::array();
  for (std::size_t i = 0; i < R.dim(); ++i) basis.push_back(to_json(R.basis(i)));
  return {{"label", R.label()},
          {"size", R.size()},
          {"additive_orders", std::vector<std::int64_t>(R.orders().begin(), R.orders().end())},
          {"one", to_json(R.one())},
          {"units", units},
          {"local_components", decompose_local(R).components.size()}};
}

inline json decomposition_json(const FiniteRing& R, const Decomposition& d) {
  json comps = json::array();
  for (const auto& c : d.components)
    comps.push_back({{"label", c.ring.label()},
                     {"size", c.ring.size()},
                     {"idempotent", to_json(c.idempotent)},
                     {"basis_in_parent", to_json(c.basis_in_parent)}});
  return {{"ring", R.label()}, {"size", R.size()}, {"components", comps}};
}

inline json local_json(const LocalStructure& L) {
  std::vector<std::uint64_t> sizes;
  for (const auto& I : L.ideal_powers) sizes.push_back(I.size());
  return {{"ring", L.R().label()},
          {"nu", L.nilpotency_index},
          {"theta", to_json(L.theta)},
          {"residue_size", L.residue_size},
          {"maximal_ideal_size", L.maximal_ideal.size()},
          {"ideal_power_sizes", sizes},
          {"min_gens", to_json(L.min_gens)}};
}

// ------------------------------------------------------------ matrices

inline json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.d; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.d; ++j) row.push_back(to_json(m.at(i, j)));
    rows.push_back(row);
  }
  return {{"d", m.d}, {"entries", rows}};
}

inline Matrix matrix_from_json(const FiniteRing& R, const json& j) {
  const auto d = field<std::size_t>(j, "d");
  const json rows = field<json>(j, "entries");
  if (!rows.is_array() || rows.size() != d) throw Error(Errc::ParseError, "entries must have d rows");
  Matrix m = zero_matrix(R, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (!rows[i].is_array() || rows[i].size() != d) throw Error(Errc::ParseError, "entries must have d columns");
    for (std::size_t k = 0; k < d; ++k) m.at(i, k) = element_from_json(R, rows[i][k]);
  }
  return m;
}

inline json to_json(const ElemWord& w) {
  json factors = json::array();
  for (const auto& f : w.factors)
    factors.push_back({{"side", f.side == Side::Left ? "L" : "R"}, {"i", f.i}, {"j", f.j}, {"r", to_json(f.r)}});
  return {{"bound", w.bound}, {"nonzero_length", w.nonzero_length()}, {"factors", factors}};
}

// --------------------------------------------------------- certificates

inline json to_json(const Symbol& s) { return {{"a", to_json(s.a)}, {"b", to_json(s.b)}, {"e", s.e}}; }

inline json to_json(const SymProduct& p) {
  json out = json::array();
  for (const auto& s : p) out.push_back(to_json(s));
  return out;
}

inline Symbol symbol_from_json(const FiniteRing& R, const json& j) {
  Symbol s{element_from_json(R, field<json>(j, "a")), element_from_json(R, field<json>(j, "b")), 1};
  if (j.contains("e")) s.e = field<int>(j, "e");
  return s;
}

inline SymProduct product_from_json(const FiniteRing& R, const json& j) {
  if (!j.is_array()) throw Error(Errc::ParseError, "symbol list must be an array");
  SymProduct out;
  for (const auto& s : j) out.push_back(symbol_from_json(R, s));
  return out;
}

inline json to_json(const TForm& t) {
  return {{"theta", to_json(t.theta)}, {"gens", to_json(t.gens)}, {"s0", to_json(t.s0)}, {"s", to_json(t.s)}};
}

inline json to_json(const ParamValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (const auto* e = std::get_if<RingElement>(&v)) return to_json(*e);
  return to_json(std::get<std::vector<RingElement>>(v));
}

// Integers stay integers, flat lists are elements, nested lists are element lists.
inline ParamValue param_from_json(const FiniteRing& R, const json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_array() && !j.empty() && j[0].is_array()) {
    std::vector<RingElement> xs;
    for (const auto& x : j) xs.push_back(element_from_json(R, x));
    return xs;
  }
  return element_from_json(R, j);
}

/// The ring spec is embedded so a certificate file can be checked on its own.
inline json certificate_json(const json& ring_spec, const Certificate& c) {
  json steps = json::array();
  for (const auto& s : c.steps) {
    json params = json::object();
    for (const auto& [k, v] : s.params) params[k] = to_json(v);
    steps.push_back({{"rule", std::string(rule_name(s.rule))},
                     {"params", params},
                     {"consumed", to_json(s.consumed)},
                     {"produced", to_json(s.produced)},
                     {"deferred", to_json(s.deferred)},
                     {"n", s.n}});
  }
  return {{"ring", ring_spec}, {"input", to_json(c.input)}, {"steps", steps}, {"tform", to_json(c.tform)},
          {"rounds", c.rounds}};
}

inline Certificate certificate_from_json(const FiniteRing& R, const json& j) {
  Certificate c;
  c.input = symbol_from_json(R, field<json>(j, "input"));
  for (const auto& s : field<json>(j, "steps")) {
    const auto name = field<std::string>(s, "rule");
    const auto rule = rule_from_name(name);
    if (!rule) throw Error(Errc::ParseError, "unknown rule " + name);
    CertStep step{*rule, {}, {}, {}, {}, field<int>(s, "n")};
    const json params = field<json>(s, "params");
    for (const auto& [k, v] : params.items()) step.params[k] = param_from_json(R, v);
    step.consumed = product_from_json(R, field<json>(s, "consumed"));
    step.produced = product_from_json(R, field<json>(s, "produced"));
    step.deferred = product_from_json(R, field<json>(s, "deferred"));
    c.steps.push_back(std::move(step));
  }
  const json t = field<json>(j, "tform");
  c.tform.theta = element_from_json(R, field<json>(t, "theta"));
  c.tform.s0 = element_from_json(R, field<json>(t, "s0"));
  for (const auto& g : field<json>(t, "gens")) c.tform.gens.push_back(element_from_json(R, g));
  for (const auto& x : field<json>(t, "s")) c.tform.s.push_back(element_from_json(R, x));
  if (j.contains("rounds")) c.rounds = field<int>(j, "rounds");
  return c;
}

// ----------------------------------------------------------- spectral

inline json to_json(const TauBoundReport& r) {
  json out = {{"d", r.d},
              {"k", r.k},
              {"M_bound", r.m_bound.str()},
              {"K_dk", rational_string(r.kazhdan)},
              {"weakened", rational_string(r.weakened)},
              {"N", r.word_length.str()},
              {"K_dk_ge_weakened", r.kazhdan >= r.weakened}};
  if (r.be) {
    out["BE"] = rational_string(*r.be);
    out["shalom_bound"] = rational_string(*r.shalom);
  }
  return out;
}

inline json to_json(const SpectralReport& r) {
  return {{"method", r.method}, {"vertices", r.vertices}, {"degree", r.degree}, {"lambda2", r.lambda2},
          {"gap", r.gap},       {"residual", r.residual}, {"tol", r.tol},       {"seconds", r.seconds}};
}

}  // namespace ulat::io
