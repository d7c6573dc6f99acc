#pragma once

// Verification suites, EPR experiments and diameter surveys behind the CLI.
// Every entry point validates its configuration up front and turns module
// errors into failed cases carrying the error message.

#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qsurvey/bell.hpp"
#include "qsurvey/hidden_variable.hpp"
#include "qsurvey/metric.hpp"
#include "qsurvey/report.hpp"
#include "qsurvey/su2.hpp"
#include "qsurvey/weyl_heisenberg.hpp"

namespace qsurvey {

inline constexpr std::array<std::string_view, 8> kSuiteNames = {
    "identity", "metric", "bell", "dispersion", "dynamics", "hv-epr", "hv-cdf", "all"};

inline constexpr int kMinCutoff = 8;
inline constexpr int kMaxCutoff = 256;

/// "a:b:n" (n evenly spaced values, endpoints included) or "x,y,z".
inline std::vector<double> parse_grid(const std::string& spec) {
  auto number = [&spec](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
      throw ParameterError("invalid grid '" + spec + "'");
    }
    return v;
  };
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw ParameterError("invalid grid '" + spec + "': expected a:b:n");
    double a = number(parts[0]);
    double b = number(parts[1]);
    double n = number(parts[2]);
    if (n < 1 || n != std::floor(n) || n > 100000) {
      throw ParameterError("invalid grid '" + spec + "': count must be in [1, 100000]");
    }
    int count = static_cast<int>(n);
    for (int i = 0; i < count; ++i) out.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
    return out;
  }
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(number(item));
  if (out.empty()) throw ParameterError("invalid grid '" + spec + "': no values");
  return out;
}

/// Separations: |δλ| for wh, the Bloch angle Θ for su2.
inline std::vector<double> default_grid(Manifold m) {
  if (m == Manifold::su2) {
    constexpr double pi = std::numbers::pi;
    return {0.0, pi / 4, pi / 2, 3 * pi / 4, pi};
  }
  return {0.0, 0.5, 1.0, 1.5, 2.0};
}

inline std::vector<double> resolve_grid(const SuiteConfig& cfg) {
  Manifold m = parse_manifold(cfg.manifold);
  std::vector<double> grid = cfg.grid.empty() ? default_grid(m) : parse_grid(cfg.grid);
  for (double x : grid) {
    if (x < 0.0 || (m == Manifold::su2 && x > std::numbers::pi + 1e-12)) {
      throw ParameterError("grid value " + format_number(x) + " outside " +
                           (m == Manifold::su2 ? "[0, pi]" : "[0, inf)"));
    }
  }
  return grid;
}

enum class Command { verify, epr, survey };

/// Rejects every out-of-domain parameter. Throws ParameterError.
inline void validate_config(const SuiteConfig& cfg, Command cmd) {
  if (cmd == Command::verify &&
      std::find(kSuiteNames.begin(), kSuiteNames.end(), cfg.suite) == kSuiteNames.end()) {
    throw ParameterError("unknown suite '" + cfg.suite + "'");
  }
  if (cfg.manifold != "su2" && cfg.manifold != "wh") {
    throw ParameterError("manifold must be su2 or wh");
  }
  if (cfg.n_trials < kMinTrials) {
    throw ParameterError("n_trials below minimum " + std::to_string(kMinTrials));
  }
  if (cfg.cutoff < kMinCutoff || cfg.cutoff > kMaxCutoff) {
    throw ParameterError("cutoff must be in [" + std::to_string(kMinCutoff) + "," +
                         std::to_string(kMaxCutoff) + "]");
  }
  if (!(cfg.r >= 0.0 && cfg.r < 1.0)) throw ParameterError("r must be in [0,1)");
  if (cfg.format != "json" && cfg.format != "csv") {
    throw ParameterError("format must be json or csv");
  }
  if (cmd != Command::verify) (void)resolve_grid(cfg);
}

namespace detail {

template <class F>
void guarded(std::vector<Case>& out, const std::string& name, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    out.push_back(error_case(name, e));
  }
}

inline double wrap_angle(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

inline std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// --- identity ---

inline void suite_identity(const SuiteConfig& cfg, Manifold m, std::vector<Case>& out) {
  if (m == Manifold::su2) {
    guarded(out, "identity_resolution", [&] {
      Operator id = identity_resolution(SphereQuadrature(4, 6));
      out.push_back(approx_case("identity_resolution", 0.0,
                                max_abs(id.matrix() - CMatrix::Identity(2, 2)), 1e-12, "exact"));
      out.push_back(approx_case("manifold_volume", 2.0, id.matrix().trace().real(), 1e-12, "exact"));
    });
    return;
  }
  guarded(out, "identity_resolution", [&] {
    const double radius = 6.0;
    FockCutoff c(std::min(cfg.cutoff, 36));
    Operator id = identity_resolution(c, radius, 96, 2 * c.n_max + 1);
    double diag = 0.0, off = 0.0;
    for (int i = 0; i < c.dim(); ++i) {
      for (int j = 0; j < c.dim(); ++j) {
        if (i == j) {
          if (i <= 10) {
            diag = std::max(diag, std::abs(id.matrix()(i, i) -
                                           regularized_lower_gamma(i + 1, radius * radius)));
          }
        } else {
          off = std::max(off, std::abs(id.matrix()(i, j)));
        }
      }
    }
    out.push_back(approx_case("identity_resolution", 0.0, diag, 1e-10, "closed_form"));
    out.push_back(approx_case("identity_resolution_offdiagonal", 0.0, off, 1e-10, "exact"));
  });
}

// --- metric ---

inline void suite_metric(const SuiteConfig& cfg, Manifold m, std::vector<Case>& out) {
  guarded(out, "metric_axioms", [&] {
    MetricAxiomReport rep = verify_metric_axioms(m, 10000, cfg.seed);
    out.push_back(approx_case("metric_axioms", 0.0, static_cast<double>(rep.total_violations()),
                              0.0, "property"));
  });
  guarded(out, "stability_invariance", [&] {
    StabilityReport rep = stability_invariance_check(m, 50, cfg.seed);
    out.push_back(approx_case("stability_invariance", 0.0, rep.max_deviation, 1e-10, "property"));
  });
  const CounterRng rng = CounterRng(cfg.seed).derive(7);
  if (m == Manifold::su2) {
    guarded(out, "overlap_law", [&] {
      double worst = 0.0;
      for (int k = 0; k < 200; ++k) {
        SpherePoint a = random_sphere_point(rng.derive(0), k);
        SpherePoint b = random_sphere_point(rng.derive(1), k);
        double expected = std::pow(std::cos(0.5 * bloch_angle(a, b)), 2);
        worst = std::max(worst, std::abs(overlap_probability(a, b) - expected));
      }
      out.push_back(approx_case("overlap_law", 0.0, worst, 1e-12, "closed_form"));
    });
    guarded(out, "diameter_quarter_turn", [&] {
      double d = distance(coherent_point(SpherePoint::north_pole()),
                          coherent_point(SpherePoint(std::numbers::pi / 2, 0.0)));
      out.push_back(approx_case("diameter_quarter_turn", std::sqrt(0.5), d, 1e-12, "closed_form"));
    });
    return;
  }
  guarded(out, "overlap_law", [&] {
    FockCutoff c(cfg.cutoff);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      WHPoint a(random_disk_point(rng.derive(0), k, 2.0));
      WHPoint b(random_disk_point(rng.derive(1), k, 2.0));
      worst = std::max(worst,
                       std::abs(overlap_probability_numeric(a, b, c) - overlap_probability(a, b)));
    }
    out.push_back(approx_case("overlap_law", 0.0, worst, 1e-10, "closed_form"));
  });
  guarded(out, "displacement_composition", [&] {
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      Complex a = random_disk_point(rng.derive(2), k, 1.5);
      Complex b = random_disk_point(rng.derive(3), k, 1.5);
      DisplacementPhaseCheck num = displacement_phase_numeric(a, b, cfg.cutoff);
      double phase = displacement_compose(WHPoint(a), WHPoint(b)).phase;
      worst = std::max({worst, std::abs(wrap_angle(num.phase - phase)), num.block_residual});
    }
    out.push_back(approx_case("displacement_composition", 0.0, worst, 1e-8, "numeric"));
  });
  guarded(out, "diameter_unit_separation", [&] {
    FockCutoff c(cfg.cutoff);
    double d = distance(coherent_vector(WHPoint(Complex(0.0)), c),
                        coherent_vector(WHPoint(Complex(1.0)), c));
    out.push_back(approx_case("diameter_unit_separation", 0.7950673, d, 1e-5, "closed_form"));
  });
}

// --- bell ---

inline void suite_bell(const SuiteConfig& cfg, Manifold m, std::vector<Case>& out) {
  const CounterRng rng = CounterRng(cfg.seed).derive(11);
  if (m == Manifold::su2) {
    guarded(out, "bell_state", [&] {
      PairState b = bell_state(SphereQuadrature(4, 6));
      out.push_back(approx_case("bell_state", 0.0,
                                max_abs(b.matrix() - std::sqrt(0.5) * CMatrix::Identity(2, 2)),
                                1e-12, "exact"));
      PairState s = singlet_via_tau(b, TauMap::time_reversal_spin_half());
      CVector singlet(4);
      singlet << 0.0, std::sqrt(0.5), -std::sqrt(0.5), 0.0;
      // ket_ket coefficients K(i, j) flattened as |i>|j>
      CVector flat(4);
      flat << s.matrix()(0, 0), s.matrix()(0, 1), s.matrix()(1, 0), s.matrix()(1, 1);
      out.push_back(approx_case("singlet_fidelity", 1.0, std::norm(singlet.dot(flat)), 1e-12,
                                "exact"));
      double certainty = 0.0;
      for (int k = 0; k < 20; ++k) {
        SpherePoint g = random_sphere_point(rng, k);
        certainty = std::max(certainty, std::abs(conditional_probability(b, g, g) - 1.0));
      }
      out.push_back(approx_case("epr_certainty", 0.0, certainty, 1e-12, "exact"));
    });
    guarded(out, "normalization_volume", [&] {
      NormalizationRecord rec = normalization_volume(m);
      out.push_back(approx_case("normalization_volume", 2.0, rec.volume, 1e-12, "exact"));
    });
    return;
  }
  guarded(out, "twisted_vacuum", [&] {
    TwistedVacuumReport rep = twisted_vacuum_residuals(cfg.r, FockCutoff(cfg.cutoff));
    out.push_back(approx_case("twisted_vacuum_norm", 1.0, rep.norm, 1e-10, "exact"));
    out.push_back(approx_case("twisted_vacuum_annihilators", 0.0,
                              std::max(rep.annihilator1, rep.annihilator2), 1e-12, "exact"));
    out.push_back(approx_case("twisted_vacuum_commutator", 0.0, rep.commutator_deviation, 1e-12,
                              "exact"));
  });
  guarded(out, "pair_amplitude", [&] {
    BellStateWH b = build_bell_wh(cfg.r, FockCutoff(cfg.cutoff));
    double worst = 0.0, conditional = 0.0;
    for (int k = 0; k < 20; ++k) {
      Complex l = random_disk_point(rng.derive(0), k, 1.5);
      Complex u = random_disk_point(rng.derive(1), k, 1.5);
      worst = std::max(worst, std::abs(pair_amplitude(b, l, u) -
                                       pair_amplitude_closed_form(cfg.r, l, u)));
      conditional = std::max(conditional, std::abs(conditional_probability(b, l, u) -
                                                    std::exp(-std::norm(l - cfg.r * u))));
    }
    out.push_back(approx_case("pair_amplitude", 0.0, worst, 1e-10, "closed_form"));
    out.push_back(approx_case("conditional_probability", 0.0, conditional, 1e-10, "closed_form"));
  });
  guarded(out, "limit_ratio", [&] {
    const double r = 1.0 - 1e-6;
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      Complex l = random_disk_point(rng.derive(2), k, 1.0);
      Complex u = random_disk_point(rng.derive(3), k, 1.0);
      worst = std::max(worst, std::abs(limit_ratio(r, l, u) - std::exp(-std::norm(l - u))));
    }
    out.push_back(approx_case("limit_ratio", 0.0, worst, 1e-5, "closed_form"));
  });
  guarded(out, "normalization_improper", [&] {
    NormalizationRecord rec = normalization_volume(m);
    out.push_back(approx_case("normalization_improper", 1.0, rec.improper ? 1.0 : 0.0, 0.0,
                              "exact"));
  });
}

// --- dispersion ---

inline constexpr std::array<double, 4> kHalvingSteps = {0.1, 0.05, 0.025, 0.0125};

inline void add_local_diameter(const LocalDiameterReport& rep, std::vector<Case>& out) {
  out.push_back(approx_case("local_diameter_ratio", 1.0, rep.samples.back().ratio, 1e-3,
                            "convergence"));
  out.push_back(info_case("local_diameter_halving_factor", rep.halving_factors.back(),
                          "convergence"));
}

inline void suite_dispersion(const SuiteConfig& cfg, Manifold m, std::vector<Case>& out) {
  if (m == Manifold::su2) {
    guarded(out, "dispersion_law", [&] {
      Operator h = spin_z_generator(1.0);
      double worst = 0.0;
      for (double theta : {0.0, 0.3, 1.0, std::numbers::pi / 2, 2.5, std::numbers::pi}) {
        worst = std::max(worst, std::abs(state_dispersion(coherent_point(SpherePoint(theta, 0.7)), h) -
                                         0.5 * std::sin(theta)));
      }
      out.push_back(approx_case("dispersion_law", 0.0, worst, 1e-12, "closed_form"));
    });
    guarded(out, "local_diameter_ratio", [&] {
      add_local_diameter(local_diameter_check(SpherePoint(std::numbers::pi / 3, 0.0), 1.0,
                                              kHalvingSteps),
                         out);
    });
    return;
  }
  guarded(out, "dispersion_law", [&] {
    FockCutoff c(cfg.cutoff);
    double worst = 0.0;
    for (double omega : {0.5, 1.0, 2.0}) {
      auto h = QuadraticHamiltonian::single_mode(omega);
      for (Complex l : {Complex(0.25, 0.0), Complex(1.0, 0.0), Complex(0.6, -1.2), Complex(0.0, 2.0)}) {
        worst = std::max(worst, std::abs(dispersion(l, h, c) - omega * std::abs(l)));
      }
    }
    out.push_back(approx_case("dispersion_law", 0.0, worst, 1e-8, "closed_form"));
  });
  guarded(out, "local_diameter_ratio", [&] {
    add_local_diameter(local_diameter_check(WHPoint(Complex(1.0)), 1.0, FockCutoff(cfg.cutoff),
                                            kHalvingSteps),
                       out);
  });
}

// --- dynamics ---

inline void suite_dynamics(const SuiteConfig& cfg, Manifold m, std::vector<Case>& out) {
  constexpr std::array<double, 3> times = {0.5, 1.0, 2.0 * std::numbers::pi};
  if (m == Manifold::su2) {
    guarded(out, "evolution_fidelity", [&] {
      Operator h = spin_z_generator(1.0);
      SpherePoint p(1.1, 0.4);
      double worst = 1.0;
      for (double t : times) {
        StateVector moved = matrix_exponential(h, t).apply(coherent_point(p));
        StateVector target = coherent_point(SpherePoint(p.theta(), p.phi() + t));
        worst = std::min(worst, std::norm(inner(target, moved)));
      }
      out.push_back(approx_case("evolution_fidelity", 1.0, worst, 1e-12, "exact"));
    });
    return;
  }
  guarded(out, "evolution_fidelity", [&] {
    FockCutoff c(std::min(cfg.cutoff, 48));
    auto h = QuadraticHamiltonian::single_mode(1.0);
    double worst = 1.0;
    for (double t : times) worst = std::min(worst, evolve_state_fidelity(Complex(1.0), h, t, c));
    out.push_back(approx_case("evolution_fidelity", 1.0, worst, 1e-10, "exact"));
  });
  guarded(out, "heisenberg_order", [&] {
    FockCutoff c(cfg.cutoff);
    double coarse = heisenberg_residual(Complex(1.0), 1.0, 0.3, 0.02, c);
    double fine = heisenberg_residual(Complex(1.0), 1.0, 0.3, 0.01, c);
    out.push_back(approx_case("heisenberg_order", 4.0, coarse / fine, 0.5, "convergence"));
  });
}

// --- hidden variables ---

inline ManifoldPoint origin_setting(Manifold m) {
  if (m == Manifold::su2) return SpherePoint::north_pole();
  return WHPoint(Complex(0.0));
}

inline ManifoldPoint separated_setting(Manifold m, double x) {
  if (m == Manifold::su2) return SpherePoint(std::min(x, std::numbers::pi), 0.0);
  return WHPoint(Complex(x));
}

inline void suite_hv_epr(const SuiteConfig& cfg, Manifold m, const std::vector<double>& grid,
                         int threads, std::vector<Case>& out, ordered_json& extra) {
  const HiddenVariableLaw law = HiddenVariableLaw::for_manifold(m);
  ordered_json experiments = ordered_json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::string name = "epr_z_sep=" + format_number(grid[i]);
    guarded(out, name, [&] {
      ExperimentReport rep = run_epr_experiment(law, origin_setting(m), separated_setting(m, grid[i]),
                                                cfg.n_trials, cfg.seed, nullptr, threads);
      experiments.push_back(to_json(rep));
      out.push_back(approx_case(name, 0.0, rep.z_score, kZThreshold, "monte_carlo"));
      if (grid[i] == 0.0) {
        out.push_back(approx_case("epr_rate_sep=0", 1.0, rep.observed_rate, 0.0, "exact"));
      }
    });
  }
  extra["experiments"] = experiments;
}

inline void suite_covariance(const SuiteConfig& cfg, Manifold m, int threads,
                             std::vector<Case>& out, ordered_json& extra) {
  guarded(out, "covariance_replay", [&] {
    const HiddenVariableLaw law = HiddenVariableLaw::for_manifold(m);
    std::vector<StabilityTransform> transforms{GlobalPhase{1.234}};
    const bool su2 = m == Manifold::su2;
    ManifoldPoint g1 = su2 ? ManifoldPoint(SpherePoint(0.4, 0.3)) : ManifoldPoint(WHPoint(Complex(0.3, -0.2)));
    ManifoldPoint g2 = su2 ? ManifoldPoint(SpherePoint(1.3, 2.0)) : ManifoldPoint(WHPoint(Complex(1.1, 0.5)));
    if (su2) {
      transforms.push_back(CommonRotation{su2_rotation({0.0, 0.0, 1.0}, 0.9)});
      transforms.push_back(CommonRotation{su2_rotation({1.0, 2.0, -0.5}, 2.1)});
    } else {
      transforms.push_back(NumberEvolution{1.0, 0.7});
      transforms.push_back(NumberEvolution{2.0, 3.3});
    }
    std::int64_t n = std::min<std::int64_t>(cfg.n_trials, 100000);
    CovarianceReport rep = covariance_check(law, g1, g2, transforms, n, cfg.seed, threads);
    extra["covariance"] = to_json(rep);
    out.push_back(approx_case("covariance_replay", 1.0, rep.pass() ? 1.0 : 0.0, 0.0, "property"));
  });
}

inline void suite_hv_cdf(const SuiteConfig& cfg, Manifold m, std::vector<Case>& out,
                         ordered_json& extra) {
  guarded(out, "cdf_ks", [&] {
    CdfReport rep = cdf_diagnostics(HiddenVariableLaw::for_manifold(m),
                                    std::max<std::int64_t>(cfg.n_trials, 10000), cfg.seed);
    extra["cdf"] = to_json(rep);
    out.push_back(approx_case("cdf_ks", 0.0, rep.ks_statistic, rep.band, "monte_carlo"));
  });
}

inline ReportEnvelope start_envelope(const std::string& suite, const SuiteConfig& cfg) {
  ReportEnvelope env;
  env.suite = suite;
  env.config = cfg;
  env.started_at = utc_now();
  return env;
}

inline void finish_envelope(ReportEnvelope& env, std::chrono::steady_clock::time_point t0) {
  env.sort_cases();
  env.duration_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Runs the configured suite (or all of them) on the configured manifold.
inline ReportEnvelope cmd_verify(const SuiteConfig& cfg, int threads = 0) {
  validate_config(cfg, Command::verify);
  auto t0 = std::chrono::steady_clock::now();
  ReportEnvelope env = detail::start_envelope(cfg.suite, cfg);
  const Manifold m = parse_manifold(cfg.manifold);
  auto want = [&cfg](std::string_view s) { return cfg.suite == "all" || cfg.suite == s; };
  if (want("identity")) detail::suite_identity(cfg, m, env.cases);
  if (want("metric")) detail::suite_metric(cfg, m, env.cases);
  if (want("bell")) detail::suite_bell(cfg, m, env.cases);
  if (want("dispersion")) detail::suite_dispersion(cfg, m, env.cases);
  if (want("dynamics")) detail::suite_dynamics(cfg, m, env.cases);
  if (want("hv-epr")) {
    detail::suite_hv_epr(cfg, m, default_grid(m), threads, env.cases, env.extra);
    detail::suite_covariance(cfg, m, threads, env.cases, env.extra);
  }
  if (want("hv-cdf")) detail::suite_hv_cdf(cfg, m, env.cases, env.extra);
  detail::finish_envelope(env, t0);
  return env;
}

/// One coincidence experiment per grid separation. When `trial_log` is
/// non-null it receives the trial stream of the first grid point.
inline ReportEnvelope cmd_epr(const SuiteConfig& cfg, int threads = 0,
                              std::vector<TrialRecord>* trial_log = nullptr) {
  validate_config(cfg, Command::epr);
  auto t0 = std::chrono::steady_clock::now();
  SuiteConfig echo = cfg;
  echo.suite = "hv-epr";
  ReportEnvelope env = detail::start_envelope("epr", echo);
  const Manifold m = parse_manifold(cfg.manifold);
  const std::vector<double> grid = resolve_grid(cfg);
  detail::suite_hv_epr(cfg, m, grid, threads, env.cases, env.extra);
  if (trial_log) {
    detail::guarded(env.cases, "trial_log", [&] {
      run_epr_experiment(HiddenVariableLaw::for_manifold(m), detail::origin_setting(m),
                         detail::separated_setting(m, grid.front()), cfg.n_trials, cfg.seed,
                         trial_log, threads);
    });
  }
  detail::finish_envelope(env, t0);
  return env;
}

/// Diameter table over the grid: closed-form d and p = 1 - d^2, with a
/// consistency case against the numeric state distance.
inline ReportEnvelope cmd_survey(const SuiteConfig& cfg, std::vector<SurveyRow>& rows) {
  validate_config(cfg, Command::survey);
  auto t0 = std::chrono::steady_clock::now();
  SuiteConfig echo = cfg;
  echo.suite = "survey";
  ReportEnvelope env = detail::start_envelope("survey", echo);
  const Manifold m = parse_manifold(cfg.manifold);
  const std::vector<double> grid = resolve_grid(cfg);
  rows.clear();
  double worst = 0.0;
  detail::guarded(env.cases, "survey_consistency", [&] {
    for (double x : grid) {
      double d = 0.0, numeric = 0.0;
      if (m == Manifold::su2) {
        d = relation_diameter(Su2Relation{x});
        numeric = distance(coherent_point(SpherePoint::north_pole()),
                           coherent_point(SpherePoint(std::min(x, std::numbers::pi), 0.0)));
      } else {
        d = relation_diameter(WhRelation{CVector::Constant(1, Complex(x))});
        FockCutoff c(cfg.cutoff);
        // Beyond the cutoff's reach the numeric distance is not meaningful.
        if (truncation_weight(WHPoint(Complex(x)), c) <= c.truncation_tol) {
          numeric = distance(coherent_vector(WHPoint(Complex(0.0)), c),
                             coherent_vector(WHPoint(Complex(x)), c));
        } else {
          numeric = d;
        }
      }
      rows.push_back({x, d, 1.0 - d * d});
      worst = std::max(worst, std::abs(d - numeric));
    }
    env.cases.push_back(approx_case("survey_consistency", 0.0, worst, 1e-9, "closed_form"));
  });
  ordered_json table = ordered_json::array();
  for (const auto& r : rows) {
    table.push_back({{"relation_coordinate", r.relation_coordinate}, {"d", r.d}, {"p", r.p}});
  }
  env.extra["rows"] = table;
  detail::finish_envelope(env, t0);
  return env;
}

}  // namespace qsurvey
