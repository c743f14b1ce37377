#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hsco/errors.hpp"
#include "hsco/parse.hpp"
#include "hsco/verify.hpp"

namespace hsco {

// Verbatim job description as it appears on the wire. Symbols stay as
// expression text here; build_job() turns the document into a validated HSJob.
struct JobDocument {
  std::string space_kind;
  int n = 1;
  std::optional<double> alpha;

  std::string operator_kind;
  std::optional<double> t;

  int m = 1;
  std::vector<std::string> phi;
  std::string psi;
  int truncation = 1;

  std::optional<int> quad_radial;
  std::optional<int> quad_angular;
  std::optional<double> tol_rel;
  std::optional<double> tol_divergence_cap;

  friend bool operator==(const JobDocument&, const JobDocument&) = default;
};

namespace detail {

inline SpaceKind space_kind_from_name(const std::string& name) {
  if (name == "bergman_ball") return SpaceKind::BergmanBall;
  if (name == "hardy_ball") return SpaceKind::HardyBall;
  if (name == "bergman_polydisk") return SpaceKind::BergmanPolydisk;
  if (name == "hardy_polydisk") return SpaceKind::HardyPolydisk;
  throw SchemaError("unknown space kind '" + name + "'");
}

inline OperatorFamily operator_family_from_name(const std::string& name) {
  if (name == "composition") return OperatorFamily::Composition;
  if (name == "radial_comp_diff") return OperatorFamily::RadialCompDiff;
  if (name == "one_var_derivative") return OperatorFamily::OneVarDerivative;
  throw SchemaError("unknown operator kind '" + name + "'");
}

inline void reject_unknown_keys(const nlohmann::json& obj, const char* where,
                                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok)
      throw SchemaError(std::string("unknown key '") + key + "' in " + where);
  }
}

template <class T>
T require(const nlohmann::json& obj, const char* where, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end())
    throw SchemaError(std::string(where) + " is missing required key '" + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaError(std::string("key '") + key + "' in " + where + " has the wrong type");
  }
}

template <class T>
std::optional<T> maybe(const nlohmann::json& obj, const char* where, const char* key) {
  if (obj.find(key) == obj.end()) return std::nullopt;
  return require<T>(obj, where, key);
}

}  // namespace detail

inline JobDocument job_document_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("job document must be a JSON object");
  detail::reject_unknown_keys(
      j, "job", {"space", "operator", "m", "phi", "psi", "truncation", "quad", "tolerances"});

  JobDocument doc;
  const auto space = detail::require<nlohmann::json>(j, "job", "space");
  if (!space.is_object()) throw SchemaError("space must be an object");
  detail::reject_unknown_keys(space, "space", {"kind", "n", "alpha"});
  doc.space_kind = detail::require<std::string>(space, "space", "kind");
  doc.n = detail::require<int>(space, "space", "n");
  doc.alpha = detail::maybe<double>(space, "space", "alpha");

  const auto op = detail::require<nlohmann::json>(j, "job", "operator");
  if (!op.is_object()) throw SchemaError("operator must be an object");
  detail::reject_unknown_keys(op, "operator", {"kind", "t"});
  doc.operator_kind = detail::require<std::string>(op, "operator", "kind");
  doc.t = detail::maybe<double>(op, "operator", "t");

  doc.m = detail::require<int>(j, "job", "m");
  doc.phi = detail::require<std::vector<std::string>>(j, "job", "phi");
  doc.psi = detail::require<std::string>(j, "job", "psi");
  doc.truncation = detail::require<int>(j, "job", "truncation");

  if (const auto quad = detail::maybe<nlohmann::json>(j, "job", "quad")) {
    if (!quad->is_object()) throw SchemaError("quad must be an object");
    detail::reject_unknown_keys(*quad, "quad", {"radial", "angular"});
    doc.quad_radial = detail::maybe<int>(*quad, "quad", "radial");
    doc.quad_angular = detail::maybe<int>(*quad, "quad", "angular");
  }
  if (const auto tol = detail::maybe<nlohmann::json>(j, "job", "tolerances")) {
    if (!tol->is_object()) throw SchemaError("tolerances must be an object");
    detail::reject_unknown_keys(*tol, "tolerances", {"rel", "divergence_cap"});
    doc.tol_rel = detail::maybe<double>(*tol, "tolerances", "rel");
    doc.tol_divergence_cap = detail::maybe<double>(*tol, "tolerances", "divergence_cap");
  }

  // Strictness: parameters that the chosen kinds ignore are rejected rather
  // than silently dropped.
  const SpaceKind kind = detail::space_kind_from_name(doc.space_kind);
  if (doc.alpha && !is_bergman(kind))
    throw SchemaError("alpha applies to Bergman kinds only");
  if (doc.t && detail::operator_family_from_name(doc.operator_kind) !=
                   OperatorFamily::RadialCompDiff)
    throw SchemaError("t applies to radial_comp_diff only");
  return doc;
}

inline nlohmann::json job_to_json(const JobDocument& doc) {
  nlohmann::json j;
  j["space"]["kind"] = doc.space_kind;
  j["space"]["n"] = doc.n;
  if (doc.alpha) j["space"]["alpha"] = *doc.alpha;
  j["operator"]["kind"] = doc.operator_kind;
  if (doc.t) j["operator"]["t"] = *doc.t;
  j["m"] = doc.m;
  j["phi"] = doc.phi;
  j["psi"] = doc.psi;
  j["truncation"] = doc.truncation;
  if (doc.quad_radial || doc.quad_angular) {
    if (doc.quad_radial) j["quad"]["radial"] = *doc.quad_radial;
    if (doc.quad_angular) j["quad"]["angular"] = *doc.quad_angular;
  }
  if (doc.tol_rel || doc.tol_divergence_cap) {
    if (doc.tol_rel) j["tolerances"]["rel"] = *doc.tol_rel;
    if (doc.tol_divergence_cap) j["tolerances"]["divergence_cap"] = *doc.tol_divergence_cap;
  }
  return j;
}

// Materializes the document: parses symbols, resolves defaults, validates the
// pairing, and builds the quadrature rule.
inline HSJob build_job(const JobDocument& doc) {
  const SpaceKind kind = detail::space_kind_from_name(doc.space_kind);
  const SourceSpace source(kind, doc.n, doc.alpha.value_or(0.0));
  OperatorKind op{detail::operator_family_from_name(doc.operator_kind),
                  doc.t.value_or(1.0)};

  if (doc.m < 1) throw ValidationError("domain dimension must be at least 1");
  if (static_cast<int>(doc.phi.size()) != doc.n)
    throw ValidationError("phi must list exactly one expression per source dimension");
  std::vector<PolynomialMap> comps;
  comps.reserve(doc.phi.size());
  for (const auto& text : doc.phi)
    comps.push_back(parse_poly(text, static_cast<std::size_t>(doc.m)));
  PolynomialMap psi = parse_poly(doc.psi, static_cast<std::size_t>(doc.m));

  Tolerances tol;
  if (doc.tol_rel) {
    if (!(*doc.tol_rel > 0.0)) throw ValidationError("tolerances.rel must be positive");
    tol.rel = *doc.tol_rel;
  }
  if (doc.tol_divergence_cap) {
    if (!(*doc.tol_divergence_cap > 0.0))
      throw ValidationError("tolerances.divergence_cap must be positive");
    tol.divergence_cap = *doc.tol_divergence_cap;
  }
  return make_job(source, op, VectorSymbol(std::move(comps)), std::move(psi),
                  doc.truncation, doc.quad_radial.value_or(0), doc.quad_angular.value_or(0),
                  tol);
}

// Echo form embedded in reports: defaults resolved so the document alone
// pins every knob the run used.
inline JobDocument normalized_document(const JobDocument& doc, const HSJob& job) {
  JobDocument out = doc;
  if (is_bergman(job.source.kind))
    out.alpha = job.source.alpha;
  else
    out.alpha.reset();
  if (job.op.family == OperatorFamily::RadialCompDiff)
    out.t = job.op.t;
  else
    out.t.reset();
  out.quad_radial = static_cast<int>(job.rule.axis.radial_x.size());
  out.quad_angular = job.rule.axis.angular;
  out.tol_rel = job.tol.rel;
  out.tol_divergence_cap = job.tol.divergence_cap;
  return out;
}

}  // namespace hsco
