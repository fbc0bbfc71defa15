#pragma once

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "dunkl.hpp"
#include "edge.hpp"
#include "errors.hpp"
#include "freeprob.hpp"
#include "rng.hpp"

namespace edgelab {

using Json = nlohmann::ordered_json;

namespace detail {

inline void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw SpecError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw SpecError("unknown field \"" + key + "\" in " + where);
}

inline Rational json_rational(const Json& j, const std::string& what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) return parse_rational(j.dump());  // shortest decimal form, so 0.1 is 1/10
  throw SpecError(what + " must be a rational string like \"3/2\" or a number");
}

}  // namespace detail

/// {"delta": "1/2", "components": [{"alpha": "1", "gamma": "2"} | {"alpha": "1", "L": 3}], "centering": "uncentered"}
inline EnsembleSpec spec_from_json(const Json& j) {
  detail::reject_unknown(j, {"delta", "components", "centering"}, "spec");
  EnsembleSpec s;
  if (j.contains("delta")) s.delta = detail::json_rational(j["delta"], "delta");
  if (j.contains("components")) {
    if (!j["components"].is_array()) throw SpecError("components must be an array");
    for (const auto& c : j["components"]) {
      detail::reject_unknown(c, {"alpha", "gamma", "L"}, "component");
      if (!c.contains("alpha")) throw SpecError("component without alpha");
      Component comp;
      comp.alpha = detail::json_rational(c["alpha"], "alpha");
      if (c.contains("gamma") == c.contains("L")) throw SpecError("component needs exactly one of gamma or L");
      if (c.contains("gamma")) comp.gamma = detail::json_rational(c["gamma"], "gamma");
      if (c.contains("L")) {
        if (!c["L"].is_number_integer()) throw SpecError("L must be an integer");
        comp.L = c["L"].get<long>();
      }
      s.components.push_back(comp);
    }
  }
  if (j.contains("centering")) {
    auto c = j["centering"].get<std::string>();
    if (c == "uncentered") s.centering = Centering::uncentered;
    else if (c == "centered") s.centering = Centering::centered;
    else throw SpecError("centering must be \"uncentered\" or \"centered\"");
  }
  s.validate();
  return s;
}

inline Json spec_to_json(const EnsembleSpec& s) {
  Json j;
  j["delta"] = to_string(s.delta);
  j["components"] = Json::array();
  for (const auto& c : s.components) {
    Json cj;
    cj["alpha"] = to_string(c.alpha);
    if (c.gamma) cj["gamma"] = to_string(*c.gamma);
    if (c.L) cj["L"] = *c.L;
    j["components"].push_back(cj);
  }
  j["centering"] = s.centering == Centering::centered ? "centered" : "uncentered";
  return j;
}

inline EnsembleSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SpecError("spec file " + path + " is not valid JSON: " + e.what());
  }
  return spec_from_json(j);
}

inline Json edge_to_json(const EdgeParameters& p) {
  return Json{{"z_c", p.z_c},        {"mu_plus", p.mu_plus}, {"sigma2", p.sigma2}, {"p_minus1", p.p_minus1},
              {"C0", p.c0},          {"V2", p.v2},           {"pure_gaussian", p.pure_gaussian}};
}

inline Json signature_to_json(const Signature& s) { return Json{{"k", s.k}, {"p", s.p}}; }

inline Json ledger_to_json(const DunklExpansion& e) {
  Json rows = Json::array();
  for (const auto& [sig, v] : e.ledger) rows.push_back(Json{{"signature", signature_to_json(sig)}, {"value", to_string(v)}});
  return rows;
}

inline Json estimate_to_json(const MCEstimate& e) {
  return Json{{"mean", e.mean}, {"std_error", e.std_error}, {"n", e.n_samples}, {"seed", e.seed}};
}

}  // namespace edgelab
