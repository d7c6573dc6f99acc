#pragma once

// Non-local hidden-variable model. Each trial draws a random relation h with
// P(d(h) < r) = r^2 and records a coincidence iff d(g) < d(h), where g is
// the relation between the two detector settings. The coincidence rate then
// tends to 1 - d(g)^2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <thread>
#include <variant>
#include <vector>

#include "qsurvey/metric.hpp"
#include "qsurvey/rng.hpp"

namespace qsurvey {

enum class HiddenDensity { uniform_sphere, maxwellian };

struct HiddenVariableLaw {
  Manifold manifold;
  HiddenDensity density;

  /// Solid-angle uniform for su2, Maxwellian π^{-1}e^{-|λ|^2} for WH.
  static HiddenVariableLaw for_manifold(Manifold m) {
    return {m, m == Manifold::su2 ? HiddenDensity::uniform_sphere : HiddenDensity::maxwellian};
  }
};

using ManifoldPoint = std::variant<SpherePoint, WHPoint>;

inline Manifold manifold_of(const ManifoldPoint& p) {
  return std::holds_alternative<SpherePoint>(p) ? Manifold::su2 : Manifold::weyl_heisenberg;
}

/// Draw number `index` of the stream. Sphere: cos θ uniform on [-1, 1], φ
/// uniform. Maxwellian: |λ|^2 ~ Exp(1), arg λ uniform, which is the density
/// π^{-1}e^{-|λ|^2} (real and imaginary parts N(0, 1/2)).
inline ManifoldPoint sample_hidden(const HiddenVariableLaw& law, const CounterRng& rng,
                                   std::uint64_t index) {
  const double u = rng.uniform(index, 0);
  const double phi = 2.0 * std::numbers::pi * rng.uniform(index, 1);
  if (law.manifold == Manifold::su2) {
    return SpherePoint(std::acos(std::clamp(1.0 - 2.0 * u, -1.0, 1.0)), phi);
  }
  return WHPoint(std::polar(std::sqrt(-std::log1p(-u)), phi));
}

/// d(h) of a hidden relation h measured from the reference state.
inline double hidden_diameter(const ManifoldPoint& h) {
  if (const auto* s = std::get_if<SpherePoint>(&h)) {
    return relation_diameter(Su2Relation{s->theta()});
  }
  return relation_diameter(WhRelation{std::get<WHPoint>(h).lambda()});
}

/// d(g) for g = g1^{-1} g2.
inline double settings_diameter(const ManifoldPoint& g1, const ManifoldPoint& g2) {
  if (manifold_of(g1) != manifold_of(g2)) {
    throw DimensionError("settings lie on different manifolds");
  }
  if (const auto* a = std::get_if<SpherePoint>(&g1)) {
    return relation_diameter(relation_of(*a, std::get<SpherePoint>(g2)));
  }
  return relation_diameter(relation_of(std::get<WHPoint>(g1), std::get<WHPoint>(g2)));
}

struct TrialRecord {
  std::uint64_t trial_index;
  double hidden_diameter;
  double relation_diameter;
  bool coincidence;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

inline constexpr double kZThreshold = 3.89;
inline constexpr int kMinTrials = 1000;

struct ExperimentReport {
  Manifold manifold;
  ManifoldPoint g1;
  ManifoldPoint g2;
  std::int64_t n_trials = 0;
  std::int64_t coincidences = 0;
  double relation_diameter = 0.0;
  double observed_rate = 0.0;
  double predicted_rate = 0.0;
  double z_score = 0.0;
  std::uint64_t seed = 0;
  bool pass = false;
};

namespace detail {

inline int resolve_threads(int requested, std::int64_t work) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(1, n);
  return static_cast<int>(std::min<std::int64_t>(n, std::max<std::int64_t>(1, work / 10000)));
}

// Runs body(begin, end, worker) over [0, n) split into contiguous chunks.
template <class Body>
void parallel_ranges(std::int64_t n, int threads, Body&& body) {
  int workers = resolve_threads(threads, n);
  if (workers == 1) {
    body(std::int64_t{0}, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    std::int64_t begin = n * w / workers;
    std::int64_t end = n * (w + 1) / workers;
    pool.emplace_back([&body, begin, end, w] { body(begin, end, w); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Monte-Carlo coincidence experiment. Deterministic in `seed` regardless of
/// thread count. A tie d(g) = d(h) counts as no coincidence. If `records` is
/// non-null it receives the full trial stream.
inline ExperimentReport run_epr_experiment(const HiddenVariableLaw& law, const ManifoldPoint& g1,
                                           const ManifoldPoint& g2, std::int64_t n_trials,
                                           std::uint64_t seed,
                                           std::vector<TrialRecord>* records = nullptr,
                                           int threads = 0) {
  if (n_trials < kMinTrials) {
    throw ParameterError("n_trials below minimum " + std::to_string(kMinTrials));
  }
  if (manifold_of(g1) != law.manifold || manifold_of(g2) != law.manifold) {
    throw DimensionError("run_epr_experiment: settings are not on the law's manifold");
  }
  const double dg = settings_diameter(g1, g2);
  const CounterRng rng(seed);
  if (records) records->assign(static_cast<std::size_t>(n_trials), TrialRecord{});

  std::vector<std::int64_t> partial(static_cast<std::size_t>(
      detail::resolve_threads(threads, n_trials)), 0);
  detail::parallel_ranges(n_trials, threads, [&](std::int64_t begin, std::int64_t end, int w) {
    std::int64_t count = 0;
    for (std::int64_t i = begin; i < end; ++i) {
      double dh = hidden_diameter(sample_hidden(law, rng, static_cast<std::uint64_t>(i)));
      bool hit = dg < dh;
      count += hit;
      if (records) (*records)[i] = {static_cast<std::uint64_t>(i), dh, dg, hit};
    }
    partial[w] = count;
  });

  ExperimentReport rep{law.manifold, g1, g2, n_trials};
  for (auto c : partial) rep.coincidences += c;
  rep.relation_diameter = dg;
  rep.observed_rate = static_cast<double>(rep.coincidences) / static_cast<double>(n_trials);
  rep.predicted_rate = 1.0 - dg * dg;
  double variance = rep.predicted_rate * (1.0 - rep.predicted_rate) / static_cast<double>(n_trials);
  double diff = rep.observed_rate - rep.predicted_rate;
  if (variance > 0.0) {
    rep.z_score = diff / std::sqrt(variance);
  } else {
    // Degenerate prediction: any discrepancy is infinitely significant.
    rep.z_score = diff == 0.0 ? 0.0 : std::copysign(HUGE_VAL, diff);
  }
  rep.seed = seed;
  rep.pass = std::abs(rep.z_score) <= kZThreshold;
  return rep;
}

// --- Covariance -------------------------------------------------------------

struct GlobalPhase {
  double theta;
};
/// V(t) = exp(-iωt a†a) on both WH settings: λ -> e^{-iωt} λ.
struct NumberEvolution {
  double omega;
  double t;
};
struct CommonRotation {
  Su2Matrix g;
};
/// A displacement is a group element outside the stability subgroup.
struct CommonDisplacement {
  Complex shift;
};

using StabilityTransform = std::variant<GlobalPhase, NumberEvolution, CommonRotation, CommonDisplacement>;

/// Image of a setting under a stability transformation. Throws
/// ParameterError for transformations that are not stability elements of
/// the setting's manifold.
inline ManifoldPoint apply_transform(const StabilityTransform& t, const ManifoldPoint& p) {
  if (std::holds_alternative<GlobalPhase>(t)) return p;  // labels are phase-free
  if (const auto* e = std::get_if<NumberEvolution>(&t)) {
    const auto* w = std::get_if<WHPoint>(&p);
    if (!w) throw ParameterError("number evolution is not a stability element of su2");
    return WHPoint(CVector(w->lambda() * std::polar(1.0, -e->omega * e->t)));
  }
  if (const auto* r = std::get_if<CommonRotation>(&t)) {
    const auto* s = std::get_if<SpherePoint>(&p);
    if (!s) throw ParameterError("SU(2) rotation does not act on WH settings");
    if (Operator::unitarity_defect(r->g) > tol::unitary) {
      throw ParameterError("common rotation is not unitary");
    }
    return rotate(r->g, *s);
  }
  throw ParameterError("displacement is not a stability-group element");
}

struct CovarianceReport {
  Manifold manifold;
  std::int64_t n_trials = 0;
  std::uint64_t seed = 0;
  int n_transforms = 0;
  double max_relation_deviation = 0.0;  // |d(g') - d(g)|
  bool predicted_identical = true;      // predicted rate within 1e-12
  bool decisions_identical = true;      // hidden draws and coincidences bit-identical
  bool streams_identical = true;        // full records bit-identical
  bool pass() const { return predicted_identical && decisions_identical; }
};

/// Replays the experiment with both settings transformed by each stability
/// element using the same seed and compares the trial streams.
inline CovarianceReport covariance_check(const HiddenVariableLaw& law, const ManifoldPoint& g1,
                                         const ManifoldPoint& g2,
                                         const std::vector<StabilityTransform>& transforms,
                                         std::int64_t n_trials, std::uint64_t seed,
                                         int threads = 0) {
  CovarianceReport rep{law.manifold, n_trials, seed, static_cast<int>(transforms.size())};
  std::vector<TrialRecord> reference;
  ExperimentReport base = run_epr_experiment(law, g1, g2, n_trials, seed, &reference, threads);
  for (const auto& t : transforms) {
    ManifoldPoint h1 = apply_transform(t, g1);
    ManifoldPoint h2 = apply_transform(t, g2);
    std::vector<TrialRecord> replay;
    ExperimentReport moved = run_epr_experiment(law, h1, h2, n_trials, seed, &replay, threads);
    rep.max_relation_deviation =
        std::max(rep.max_relation_deviation, std::abs(moved.relation_diameter - base.relation_diameter));
    if (std::abs(moved.predicted_rate - base.predicted_rate) > 1e-12) rep.predicted_identical = false;
    for (std::size_t i = 0; i < reference.size(); ++i) {
      const auto& a = reference[i];
      const auto& b = replay[i];
      if (a.trial_index != b.trial_index || a.hidden_diameter != b.hidden_diameter ||
          a.coincidence != b.coincidence) {
        rep.decisions_identical = false;
      }
      if (!(a == b)) rep.streams_identical = false;
    }
  }
  return rep;
}

// --- CDF diagnostics --------------------------------------------------------

struct CdfReport {
  Manifold manifold;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
  double ks_statistic = 0.0;
  double band = 0.0;  // 1.95 / sqrt(N)
  bool pass = false;
};

/// Kolmogorov-Smirnov distance between the empirical CDF of d(h) and r^2.
inline CdfReport cdf_diagnostics(const HiddenVariableLaw& law, std::int64_t n_samples,
                                 std::uint64_t seed) {
  if (n_samples < 10000) throw ParameterError("cdf_diagnostics: n_samples must be >= 10000");
  const CounterRng rng(seed);
  std::vector<double> d(static_cast<std::size_t>(n_samples));
  for (std::int64_t i = 0; i < n_samples; ++i) {
    d[i] = hidden_diameter(sample_hidden(law, rng, static_cast<std::uint64_t>(i)));
  }
  std::sort(d.begin(), d.end());
  const double n = static_cast<double>(n_samples);
  double ks = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    double f = d[i] * d[i];
    ks = std::max({ks, (i + 1) / n - f, f - i / n});
  }
  CdfReport rep{law.manifold, n_samples, seed, ks, 1.95 / std::sqrt(n)};
  rep.pass = ks <= rep.band;
  return rep;
}

/// Empirical P(d(h) < r).
inline double empirical_cdf(const HiddenVariableLaw& law, double r, std::int64_t n_samples,
                            std::uint64_t seed) {
  const CounterRng rng(seed);
  std::int64_t below = 0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    below += hidden_diameter(sample_hidden(law, rng, static_cast<std::uint64_t>(i))) < r;
  }
  return static_cast<double>(below) / static_cast<double>(n_samples);
}

}  // namespace qsurvey
