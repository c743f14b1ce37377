#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hsco/errors.hpp"
#include "hsco/job.hpp"
#include "hsco/verify.hpp"

namespace hsco {

enum class ReportFormat { Structured, Table };

// Serializable run record: the normalized job echo plus every computed
// quantity. The structured JSON form round-trips losslessly (shortest
// round-trip float rendering, sorted keys); the table form is a plain
// partial-sum listing with footer lines.
struct ReportDocument {
  JobDocument job;
  double sup_phi = 0.0;
  double margin = 0.0;
  std::vector<double> partial_sums;
  std::optional<double> characterization;  // absent = infinite
  std::optional<double> tail;              // absent = unavailable
  std::optional<std::pair<double, double>> comparability;  // absent = exact family
  std::string verdict;
  int rule_m = 1;
  double rule_beta = 0.0;
  int rule_radial = 0;
  int rule_angular = 0;
  double wall_ms = 0.0;

  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

inline ReportDocument make_report_document(const JobDocument& echo, const HSReport& rep,
                                           double wall_ms) {
  ReportDocument doc;
  doc.job = echo;
  doc.sup_phi = rep.sup_phi;
  doc.margin = rep.characterization.margin;
  doc.partial_sums = rep.partial_sums;
  if (rep.characterization.finite) doc.characterization = rep.characterization.value;
  if (rep.tail.available) doc.tail = rep.tail.value;
  doc.comparability = rep.comparability;
  doc.verdict = verdict_name(rep.verdict);
  doc.rule_m = rep.rule_m;
  doc.rule_beta = rep.rule_beta;
  doc.rule_radial = rep.rule_radial;
  doc.rule_angular = rep.rule_angular;
  doc.wall_ms = wall_ms;
  return doc;
}

inline nlohmann::json report_to_json(const ReportDocument& doc) {
  nlohmann::json j;
  j["job"] = job_to_json(doc.job);
  j["sup_phi"] = doc.sup_phi;
  j["margin"] = doc.margin;
  j["partial_sums"] = doc.partial_sums;
  if (doc.characterization)
    j["characterization"] = *doc.characterization;
  else
    j["characterization"] = "infinite";
  if (doc.tail)
    j["tail_bound"] = *doc.tail;
  else
    j["tail_bound"] = "unavailable";
  if (doc.comparability) {
    j["comparability"]["c_lo"] = doc.comparability->first;
    j["comparability"]["c_hi"] = doc.comparability->second;
  } else {
    j["comparability"] = "exact";
  }
  j["verdict"] = doc.verdict;
  j["rule"]["m"] = doc.rule_m;
  j["rule"]["beta"] = doc.rule_beta;
  j["rule"]["radial"] = doc.rule_radial;
  j["rule"]["angular"] = doc.rule_angular;
  j["wall_ms"] = doc.wall_ms;
  return j;
}

inline ReportDocument report_document_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("report document must be a JSON object");
  ReportDocument doc;
  doc.job = job_document_from_json(detail::require<nlohmann::json>(j, "report", "job"));
  doc.sup_phi = detail::require<double>(j, "report", "sup_phi");
  doc.margin = detail::require<double>(j, "report", "margin");
  doc.partial_sums = detail::require<std::vector<double>>(j, "report", "partial_sums");

  const auto& ch = j.at("characterization");
  if (ch.is_string()) {
    if (ch.get<std::string>() != "infinite")
      throw SchemaError("characterization must be a number or \"infinite\"");
  } else {
    doc.characterization = ch.get<double>();
  }
  const auto& tb = j.at("tail_bound");
  if (tb.is_string()) {
    if (tb.get<std::string>() != "unavailable")
      throw SchemaError("tail_bound must be a number or \"unavailable\"");
  } else {
    doc.tail = tb.get<double>();
  }
  const auto& cmp = j.at("comparability");
  if (cmp.is_string()) {
    if (cmp.get<std::string>() != "exact")
      throw SchemaError("comparability must be an object or \"exact\"");
  } else {
    doc.comparability = std::make_pair(detail::require<double>(cmp, "comparability", "c_lo"),
                                       detail::require<double>(cmp, "comparability", "c_hi"));
  }
  doc.verdict = detail::require<std::string>(j, "report", "verdict");
  const auto rule = detail::require<nlohmann::json>(j, "report", "rule");
  doc.rule_m = detail::require<int>(rule, "rule", "m");
  doc.rule_beta = detail::require<double>(rule, "rule", "beta");
  doc.rule_radial = detail::require<int>(rule, "rule", "radial");
  doc.rule_angular = detail::require<int>(rule, "rule", "angular");
  doc.wall_ms = detail::require<double>(j, "report", "wall_ms");
  return doc;
}

namespace detail {

inline std::string table_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline std::string emit_report(const ReportDocument& doc, ReportFormat format) {
  if (format == ReportFormat::Structured) return report_to_json(doc).dump(2) + "\n";

  std::string out = "k,S_k\n";
  for (std::size_t k = 0; k < doc.partial_sums.size(); ++k)
    out += std::to_string(k) + "," + detail::table_number(doc.partial_sums[k]) + "\n";
  out += "characterization=" +
         (doc.characterization ? detail::table_number(*doc.characterization)
                               : std::string("infinite")) +
         "\n";
  out += "tail_bound=" +
         (doc.tail ? detail::table_number(*doc.tail) : std::string("unavailable")) + "\n";
  if (doc.comparability)
    out += "comparability=[" + detail::table_number(doc.comparability->first) + "," +
           detail::table_number(doc.comparability->second) + "]\n";
  else
    out += "comparability=exact\n";
  out += "sup_phi=" + detail::table_number(doc.sup_phi) + "\n";
  out += "verdict=" + doc.verdict + "\n";
  return out;
}

}  // namespace hsco
