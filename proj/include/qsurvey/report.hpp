#pragma once

// Report envelope shared by the CLI suites, with deterministic JSON and CSV
// serialization. The stable region (everything except timing) is byte-stable
// for a fixed configuration and seed.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qsurvey/bell.hpp"
#include "qsurvey/hidden_variable.hpp"
#include "qsurvey/metric.hpp"

namespace qsurvey {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";

struct Case {
  std::string name;
  std::optional<double> expected;
  double observed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string provenance;
  std::string message;  // set when a module error surfaced
};

/// |observed - expected| <= tolerance
inline Case approx_case(std::string name, double expected, double observed, double tolerance,
                        std::string provenance) {
  bool ok = std::isfinite(observed) && std::abs(observed - expected) <= tolerance;
  return {std::move(name), expected, observed, tolerance, ok, std::move(provenance), {}};
}

/// Reported value with no expectation; passes when finite.
inline Case info_case(std::string name, double observed, std::string provenance) {
  return {std::move(name), std::nullopt, observed, 0.0, std::isfinite(observed),
          std::move(provenance), {}};
}

inline Case error_case(std::string name, const std::exception& e) {
  return {std::move(name), std::nullopt, std::nan(""), 0.0, false, "error", e.what()};
}

struct SuiteConfig {
  std::string suite = "all";
  std::string manifold = "su2";
  std::uint64_t seed = 0;
  std::int64_t n_trials = 1000000;
  int cutoff = 64;
  double r = 0.5;
  std::string grid;  // empty = command default
  std::string format = "json";
  std::string output_path;  // empty = stdout; not echoed
};

struct ReportEnvelope {
  std::string suite;
  SuiteConfig config;
  std::vector<Case> cases;
  ordered_json extra = ordered_json::object();  // command-specific stable payload
  std::string started_at;
  double duration_ms = 0.0;

  bool overall_pass() const {
    return std::all_of(cases.begin(), cases.end(), [](const Case& c) { return c.pass; });
  }

  void sort_cases() {
    std::stable_sort(cases.begin(), cases.end(),
                     [](const Case& a, const Case& b) { return a.name < b.name; });
  }
};

// --- number formatting ------------------------------------------------------

/// Shortest decimal that round-trips to the same double.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// JSON number, or null when not finite.
inline ordered_json json_number(double x) {
  return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr);
}

// --- JSON -------------------------------------------------------------------

inline ordered_json to_json(const SuiteConfig& c) {
  ordered_json j;
  j["suite"] = c.suite;
  j["manifold"] = c.manifold;
  j["seed"] = c.seed;
  j["n_trials"] = c.n_trials;
  j["cutoff"] = c.cutoff;
  j["r"] = c.r;
  j["grid"] = c.grid;
  j["format"] = c.format;
  return j;
}

inline ordered_json to_json(const Case& c) {
  ordered_json j;
  j["name"] = c.name;
  j["expected"] = c.expected ? json_number(*c.expected) : ordered_json(nullptr);
  j["observed"] = json_number(c.observed);
  j["tolerance"] = json_number(c.tolerance);
  j["pass"] = c.pass;
  j["provenance"] = c.provenance;
  if (!c.message.empty()) j["message"] = c.message;
  return j;
}

inline ordered_json to_json(const ManifoldPoint& p) {
  ordered_json j;
  if (const auto* s = std::get_if<SpherePoint>(&p)) {
    j["theta"] = s->theta();
    j["phi"] = s->phi();
  } else {
    const auto& w = std::get<WHPoint>(p);
    ordered_json re = ordered_json::array(), im = ordered_json::array();
    for (int m = 0; m < w.n_modes(); ++m) {
      re.push_back(w[m].real());
      im.push_back(w[m].imag());
    }
    j["lambda_re"] = re;
    j["lambda_im"] = im;
  }
  return j;
}

inline ordered_json to_json(const ExperimentReport& r) {
  ordered_json j;
  j["manifold"] = to_string(r.manifold);
  j["g1"] = to_json(r.g1);
  j["g2"] = to_json(r.g2);
  j["n_trials"] = r.n_trials;
  j["coincidences"] = r.coincidences;
  j["relation_diameter"] = r.relation_diameter;
  j["observed_rate"] = r.observed_rate;
  j["predicted_rate"] = r.predicted_rate;
  j["z_score"] = json_number(r.z_score);
  j["seed"] = r.seed;
  j["pass"] = r.pass;
  return j;
}

inline ordered_json to_json(const MetricAxiomReport& r) {
  ordered_json j;
  j["manifold"] = to_string(r.manifold);
  j["n_triples"] = r.n_triples;
  j["seed"] = r.seed;
  j["range_violations"] = r.range_violations;
  j["symmetry_violations"] = r.symmetry_violations;
  j["triangle_violations"] = r.triangle_violations;
  j["state_triangle_violations"] = r.state_triangle_violations;
  j["max_triangle_excess"] = r.max_triangle_excess;
  return j;
}

inline ordered_json to_json(const LocalDiameterReport& r) {
  ordered_json j;
  j["dispersion"] = r.dispersion;
  ordered_json samples = ordered_json::array();
  for (const auto& s : r.samples) {
    ordered_json e;
    e["dt"] = s.dt;
    e["diameter"] = s.diameter;
    e["predicted"] = s.predicted;
    e["ratio"] = json_number(s.ratio);
    e["deviation"] = json_number(s.deviation);
    e["second_order_constant"] = json_number(s.second_order_constant);
    samples.push_back(e);
  }
  j["samples"] = samples;
  ordered_json factors = ordered_json::array();
  for (double f : r.halving_factors) factors.push_back(json_number(f));
  j["halving_factors"] = factors;
  ordered_json orders = ordered_json::array();
  for (double o : r.observed_orders) orders.push_back(json_number(o));
  j["observed_orders"] = orders;
  return j;
}

inline ordered_json to_json(const StabilityReport& r) {
  ordered_json j;
  j["manifold"] = to_string(r.manifold);
  j["n_samples"] = r.n_samples;
  j["seed"] = r.seed;
  j["max_deviation"] = r.max_deviation;
  return j;
}

inline ordered_json to_json(const CdfReport& r) {
  ordered_json j;
  j["manifold"] = to_string(r.manifold);
  j["n_samples"] = r.n_samples;
  j["seed"] = r.seed;
  j["ks_statistic"] = r.ks_statistic;
  j["band"] = r.band;
  j["pass"] = r.pass;
  return j;
}

inline ordered_json to_json(const CovarianceReport& r) {
  ordered_json j;
  j["manifold"] = to_string(r.manifold);
  j["n_trials"] = r.n_trials;
  j["seed"] = r.seed;
  j["n_transforms"] = r.n_transforms;
  j["max_relation_deviation"] = r.max_relation_deviation;
  j["predicted_identical"] = r.predicted_identical;
  j["decisions_identical"] = r.decisions_identical;
  j["streams_identical"] = r.streams_identical;
  return j;
}

inline ordered_json to_json(const TwistedVacuumReport& r) {
  ordered_json j;
  j["r"] = r.r;
  j["n_max"] = r.n_max;
  j["norm"] = r.norm;
  j["annihilator1"] = r.annihilator1;
  j["annihilator2"] = r.annihilator2;
  j["commutator_deviation"] = r.commutator_deviation;
  j["tail_bound"] = r.tail_bound;
  return j;
}

inline ordered_json to_json(const NormalizationRecord& r) {
  ordered_json j;
  j["manifold"] = to_string(r.manifold);
  j["volume"] = json_number(r.volume);
  j["constant"] = r.constant;
  j["improper"] = r.improper;
  return j;
}

/// FNV-1a 64-bit, hex encoded.
inline std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// The deterministic part of the envelope.
inline ordered_json stable_region(const ReportEnvelope& env) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["suite"] = env.suite;
  j["config"] = to_json(env.config);
  ordered_json cases = ordered_json::array();
  for (const auto& c : env.cases) cases.push_back(to_json(c));
  j["cases"] = cases;
  for (auto it = env.extra.begin(); it != env.extra.end(); ++it) j[it.key()] = it.value();
  j["overall_pass"] = env.overall_pass();
  return j;
}

inline ordered_json to_json(const ReportEnvelope& env) {
  ordered_json j = stable_region(env);
  j["stable_hash"] = fnv1a64(j.dump());
  ordered_json timing;
  timing["started_at"] = env.started_at;
  timing["duration_ms"] = env.duration_ms;
  j["timing"] = timing;
  return j;
}

// --- CSV --------------------------------------------------------------------

inline void write_cases_csv(std::ostream& out, const ReportEnvelope& env) {
  out << "name,expected,observed,tolerance,pass,provenance\n";
  for (const auto& c : env.cases) {
    out << c.name << ',' << (c.expected ? format_number(*c.expected) : std::string()) << ','
        << format_number(c.observed) << ',' << format_number(c.tolerance) << ','
        << (c.pass ? "true" : "false") << ',' << c.provenance << '\n';
  }
}

inline void write_trial_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "trial_index,hidden_diameter,relation_diameter,coincidence\n";
  for (const auto& r : records) {
    out << r.trial_index << ',' << format_number(r.hidden_diameter) << ','
        << format_number(r.relation_diameter) << ',' << (r.coincidence ? 1 : 0) << '\n';
  }
}

struct SurveyRow {
  double relation_coordinate;
  double d;
  double p;
};

inline void write_survey_csv(std::ostream& out, const std::vector<SurveyRow>& rows) {
  out << "relation_coordinate,d,p\n";
  for (const auto& r : rows) {
    out << format_number(r.relation_coordinate) << ',' << format_number(r.d) << ','
        << format_number(r.p) << '\n';
  }
}

}  // namespace qsurvey
