#pragma once

// JSON forms of every report type plus the run manifest that accompanies
// each emitted document.

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounds.hpp"
#include "counting.hpp"
#include "exact_rank.hpp"
#include "perm_lemma.hpp"
#include "structure_props.hpp"
#include "suites.hpp"

namespace normality {

inline constexpr const char* kSchema = "normality-lab/1";
inline constexpr const char* kVersion = "1.0.0";

using nlohmann::json;

struct RunManifest {
  std::string subcommand;
  std::vector<std::string> argv;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::optional<double> wall_seconds;  // omitted for byte-stable output
};

inline json to_json(const RunManifest& m) {
  json j = {{"subcommand", m.subcommand}, {"argv", m.argv},     {"seed", m.seed},
            {"threads", m.threads},       {"version", kVersion}, {"modularPrime", kModularPrime}};
  if (m.wall_seconds) j["wallSeconds"] = *m.wall_seconds;
  return j;
}

inline std::string to_string(const mpz_class& v) { return v.get_str(); }

inline std::string to_string(const mpq_class& v) { return v.get_str(); }

// A double that JSON can carry; infinities become strings.
inline json number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

inline json to_json(const CountReport& r, bool timing) {
  json j = {{"n", r.n},
            {"event", r.event},
            {"mode", to_string(r.mode)},
            {"totalCount", to_string(r.total)},
            {"hitCount", to_string(r.hits)},
            {"probability", to_string(r.probability)},
            {"probabilityDecimal", r.probability.get_d()}};
  const double p = r.probability.get_d();
  j["log2Probability"] = p > 0 ? json(std::log2(p)) : json("-inf");
  if (r.mode == CountMode::MonteCarlo) {
    j["samples"] = r.samples;
    j["seed"] = r.seed;
  }
  if (r.ci) j["ci95"] = {{"method", "wilson"}, {"low", r.ci->low}, {"high", r.ci->high}};
  if (!r.note.empty()) j["note"] = r.note;
  if (timing) j["wallSeconds"] = r.wall_seconds;
  return j;
}

inline json to_json(const ProfileFit& f) {
  auto devs = [](const std::vector<ProfileDeviation>& v) {
    json a = json::array();
    for (const auto& d : v) a.push_back({{"index", d.index}, {"measured", d.measured}, {"formula", d.formula}});
    return a;
  };
  return {{"k", f.k}, {"t", f.t}, {"deviations", devs(f.deviations)}, {"rawDeviations", devs(f.raw_deviations)}};
}

inline json to_json(const GreedyTrace& tr) {
  json steps = json::array();
  for (const auto& s : tr.steps) steps.push_back({{"i", s.i}, {"s", s.s}, {"a", s.a}, {"b", s.b}});
  json ab = json::array();
  for (const auto& v : check_ab(tr))
    ab.push_back({{"i", v.i}, {"kind", v.kind}, {"previous", v.previous}, {"current", v.current}});
  const auto fit = fit_kt(tr.profile);
  json obs = json::array();
  for (const auto& v : check_obs1(static_cast<int>(tr.profile.n()), fit.k, fit.t))
    obs.push_back({{"constraint", v.constraint}, {"slack", v.slack}});
  return {{"sigma", tr.sigma.one_based()},
          {"steps", steps},
          {"profile", tr.profile.ranks},
          {"fit", to_json(fit)},
          {"abViolations", ab},
          {"observationViolations", obs},
          {"prefilterFallback", tr.prefilter_fallback}};
}

inline json to_json(const PropertyReport& r) {
  json j = {{"property", r.property}, {"holds", r.holds},           {"rank", r.rank},
            {"propertyP", r.property_p}, {"failingPairs", r.failing_pairs}};
  if (r.k) {
    j["k"] = *r.k;
    j["rankMatches"] = r.rank_matches;
    j["firstKIndependent"] = r.first_k_independent;
  }
  return j;
}

inline json to_json(const Census& c) {
  json rows = json::array();
  for (const auto& r : c.rows)
    rows.push_back({{"m", r.m}, {"q", r.q}, {"k", r.k}, {"countP", r.count_p}, {"countFk", r.count_fk},
                    {"boundExponent", r.bound_exponent}, {"boundExponentProofVariant", r.bound_exponent_proof}});
  json j = {{"m", c.m}, {"q", c.q}, {"mode", c.exhaustive ? "exhaustive" : "sampled"}, {"population", c.population},
            {"rows", rows}};
  if (!c.exhaustive) j["seed"] = c.seed;
  return j;
}

inline json to_json(const SwapScript& s) {
  json a = json::array();
  for (const auto& w : s) a.push_back(w.to_string());
  return a;
}

inline json to_json(const RecursionCase& c) {
  json steps = json::array();
  for (const auto& s : c.steps) {
    json j = {{"i", s.i},
              {"exponent", s.exponent},
              {"rawExponent", s.raw_exponent},
              {"conditionings", s.conditionings},
              {"lhsSup", to_string(s.lhs_sup)},
              {"supNext", to_string(s.sup_next)},
              {"rhs", to_string(s.rhs)},
              {"violations", s.violations},
              {"localFormViolations", s.local_violations},
              {"rawExponentViolations", s.raw_violations}};
    if (s.witness) j["witness"] = *s.witness;
    steps.push_back(std::move(j));
  }
  return {{"k", c.k}, {"t", c.t}, {"members", c.members}, {"violations", c.violations()}, {"steps", steps}};
}

inline json to_json(const RecursionReport& r, bool timing) {
  json cases = json::array();
  for (const auto& c : r.cases) cases.push_back(to_json(c));
  json j = {{"n", r.n}, {"violations", r.violations()}, {"cases", cases}};
  if (timing) j["wallSeconds"] = r.wall_seconds;
  return j;
}

inline json to_json(const CaseResult& c) {
  json j = {{"caseId", c.case_id},
            {"worstK", c.worst_k},
            {"worstT", c.worst_t},
            {"value", number(c.value)},
            {"target", c.target},
            {"deltaToTarget", number(c.value - c.target)},
            {"converged", c.converged},
            {"closedFormDiscrepancy", c.closed_form_discrepancy},
            {"excludedPoints", c.excluded_points}};
  if (c.printed_value) j["printedValue"] = number(*c.printed_value);
  if (c.printed_crossing) j["printedCrossing"] = *c.printed_crossing;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline json to_json(const FixedPointResult& f) {
  json cases = json::array();
  for (const auto& c : f.cases) cases.push_back(to_json(c));
  json trace = json::array();
  for (const auto& s : f.trace)
    trace.push_back({{"iteration", s.iteration}, {"alpha", s.alpha}, {"bindingCase", s.binding_case},
                     {"caseMin", s.case_min}});
  return {{"alpha", f.alpha}, {"bindingCase", f.binding_case}, {"converged", f.converged},
          {"cases", cases},   {"trace", trace}};
}

inline json to_json(const SuiteResult& s, bool timing) {
  json j = {{"suite", s.name},
            {"passed", s.passed},
            {"cases", s.cases},
            {"failures", s.failures},
            {"failuresByKind", s.counters},
            {"details", s.details}};
  if (s.witness) {
    j["witness"] = *s.witness;
    j["witnessNote"] = s.witness_note;
  }
  if (timing) j["wallSeconds"] = s.seconds;
  return j;
}

inline json document(const RunManifest& m, json body) {
  json j = {{"schema", kSchema}, {"manifest", to_json(m)}};
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  return j;
}

}  // namespace normality
