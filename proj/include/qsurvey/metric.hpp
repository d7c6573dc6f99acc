#pragma once

// Coherence-relation metric d = sqrt(1 - |<g1|g2>|^2) on both manifolds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qsurvey/hilbert.hpp"
#include "qsurvey/rng.hpp"
#include "qsurvey/su2.hpp"
#include "qsurvey/weyl_heisenberg.hpp"

namespace qsurvey {

enum class Manifold { su2, weyl_heisenberg };

inline const char* to_string(Manifold m) {
  return m == Manifold::su2 ? "su2" : "wh";
}

inline Manifold parse_manifold(std::string_view s) {
  if (s == "su2") return Manifold::su2;
  if (s == "wh" || s == "weyl_heisenberg") return Manifold::weyl_heisenberg;
  throw ParameterError("unknown manifold '" + std::string(s) + "' (expected su2 or wh)");
}

/// sqrt(1 - |<u|v>|^2 / (<u|u><v|v>)). Inputs must have unit norm within
/// 1e-10, which admits truncated coherent vectors.
inline double distance(const StateVector& u, const StateVector& v) {
  detail::require_dim(u.dim(), v.dim(), "distance");
  double nu = u.amplitudes().squaredNorm();
  double nv = v.amplitudes().squaredNorm();
  if (std::abs(nu - 1.0) > 1e-10 || std::abs(nv - 1.0) > 1e-10) {
    throw ParameterError("distance: inputs must be normalized");
  }
  double p = std::norm(inner(u, v)) / (nu * nv);
  return std::sqrt(std::clamp(1.0 - p, 0.0, 1.0));
}

struct Su2Relation {
  double bloch_angle;  // Θ in [0, π]
};

struct WhRelation {
  CVector delta;  // δλ = μ - λ
};

using CoherenceRelation = std::variant<Su2Relation, WhRelation>;

inline CoherenceRelation relation_of(const SpherePoint& a, const SpherePoint& b) {
  return Su2Relation{bloch_angle(a, b)};
}

inline CoherenceRelation relation_of(const WHPoint& lam, const WHPoint& mu) {
  detail::require_dim(lam.n_modes(), mu.n_modes(), "relation_of");
  return WhRelation{mu.lambda() - lam.lambda()};
}

/// su2: sin(Θ/2); weyl_heisenberg: sqrt(1 - e^{-|δλ|^2}).
inline double relation_diameter(const CoherenceRelation& r) {
  struct Visitor {
    double operator()(const Su2Relation& s) const { return std::abs(std::sin(0.5 * s.bloch_angle)); }
    double operator()(const WhRelation& w) const {
      return std::sqrt(-std::expm1(-w.delta.squaredNorm()));
    }
  };
  return std::visit(Visitor{}, r);
}

// --- Metric axioms ----------------------------------------------------------

struct MetricAxiomReport {
  Manifold manifold;
  int n_triples = 0;
  std::uint64_t seed = 0;
  int range_violations = 0;       // 0 <= d <= 1, d(identity) = 0
  int symmetry_violations = 0;    // d(g) = d(g^-1)
  int triangle_violations = 0;    // d(g) + d(h) >= d(gh)
  int state_triangle_violations = 0;  // triangle inequality on explicit states
  double max_triangle_excess = 0.0;   // max of d(gh) - d(g) - d(h)

  int total_violations() const {
    return range_violations + symmetry_violations + triangle_violations +
           state_triangle_violations;
  }
};

namespace detail {

inline constexpr double kAxiomSlack = 1e-12;

inline Su2Matrix random_su2(const CounterRng& rng, std::uint64_t index) {
  return su2_from_quaternion(rng.normal(index, 0), rng.normal(index, 1), rng.normal(index, 2),
                             rng.normal(index, 3));
}

inline SpherePoint random_sphere_point(const CounterRng& rng, std::uint64_t index) {
  double z = 1.0 - 2.0 * rng.uniform(index, 0);
  return {std::acos(std::clamp(z, -1.0, 1.0)), 2.0 * std::numbers::pi * rng.uniform(index, 1)};
}

/// Uniform in the disk |λ| <= radius.
inline Complex random_disk_point(const CounterRng& rng, std::uint64_t index, double radius) {
  return std::polar(radius * std::sqrt(rng.uniform(index, 0)),
                    2.0 * std::numbers::pi * rng.uniform(index, 1));
}

inline void tally_triangle(double dg, double dh, double dgh, MetricAxiomReport& rep) {
  double excess = dgh - dg - dh;
  rep.max_triangle_excess = std::max(rep.max_triangle_excess, excess);
  if (excess > kAxiomSlack) ++rep.triangle_violations;
}

inline bool out_of_range(double d) { return !(d >= 0.0 && d <= 1.0 + kAxiomSlack); }

}  // namespace detail

/// Brute-force check of 0 <= d <= 1, d(g) = d(g^-1) and d(g) + d(h) >= d(gh)
/// over random relation pairs, plus the triangle inequality for distance()
/// on random explicit state triples. su2 relations compose as SU(2)
/// products; WH relations compose by adding δλ, the central phase being
/// irrelevant to d.
inline MetricAxiomReport verify_metric_axioms(Manifold manifold, int n_triples,
                                              std::uint64_t seed) {
  if (n_triples < 1) throw ParameterError("verify_metric_axioms: n_triples must be >= 1");
  MetricAxiomReport rep{manifold, n_triples, seed};
  const CounterRng rng(seed);
  const CounterRng g_stream = rng.derive(1), h_stream = rng.derive(2);
  const CounterRng s_stream = rng.derive(3);

  if (manifold == Manifold::su2) {
    const Su2Matrix id = Su2Matrix::Identity();
    if (su2_relation_diameter(id) != 0.0) ++rep.range_violations;
    for (int k = 0; k < n_triples; ++k) {
      Su2Matrix g = detail::random_su2(g_stream, k);
      Su2Matrix h = detail::random_su2(h_stream, k);
      double dg = su2_relation_diameter(g), dh = su2_relation_diameter(h);
      double dgh = su2_relation_diameter(g * h);
      if (detail::out_of_range(dg) || detail::out_of_range(dgh)) ++rep.range_violations;
      if (std::abs(dg - su2_relation_diameter(g.adjoint())) > detail::kAxiomSlack) {
        ++rep.symmetry_violations;
      }
      detail::tally_triangle(dg, dh, dgh, rep);

      StateVector a = coherent_point(detail::random_sphere_point(s_stream.derive(0), k));
      StateVector b = coherent_point(detail::random_sphere_point(s_stream.derive(1), k));
      StateVector c = coherent_point(detail::random_sphere_point(s_stream.derive(2), k));
      if (distance(a, c) > distance(a, b) + distance(b, c) + detail::kAxiomSlack) {
        ++rep.state_triangle_violations;
      }
    }
    return rep;
  }

  const FockCutoff cutoff(64);
  if (relation_diameter(WhRelation{CVector::Zero(1)}) != 0.0) ++rep.range_violations;
  for (int k = 0; k < n_triples; ++k) {
    CVector g(1), h(1);
    g(0) = detail::random_disk_point(g_stream, k, 3.0);
    h(0) = detail::random_disk_point(h_stream, k, 3.0);
    double dg = relation_diameter(WhRelation{g});
    double dh = relation_diameter(WhRelation{h});
    double dgh = relation_diameter(WhRelation{g + h});
    if (detail::out_of_range(dg) || detail::out_of_range(dgh)) ++rep.range_violations;
    if (std::abs(dg - relation_diameter(WhRelation{-g})) > detail::kAxiomSlack) {
      ++rep.symmetry_violations;
    }
    detail::tally_triangle(dg, dh, dgh, rep);

    StateVector a = coherent_vector(detail::random_disk_point(s_stream.derive(0), k, 2.0), cutoff);
    StateVector b = coherent_vector(detail::random_disk_point(s_stream.derive(1), k, 2.0), cutoff);
    StateVector c = coherent_vector(detail::random_disk_point(s_stream.derive(2), k, 2.0), cutoff);
    if (distance(a, c) > distance(a, b) + distance(b, c) + detail::kAxiomSlack) {
      ++rep.state_triangle_violations;
    }
  }
  return rep;
}

// --- Local diameter --------------------------------------------------------

struct LocalDiameterSample {
  double dt;
  double diameter;   // d(g(-dt/2), g(dt/2))
  double predicted;  // dt · Δ
  double ratio;
  double deviation;  // ratio - 1
  double second_order_constant;  // |diameter - predicted| / dt^2
};

struct LocalDiameterReport {
  double dispersion = 0.0;
  std::vector<LocalDiameterSample> samples;
  std::vector<double> halving_factors;  // deviation[i] / deviation[i+1]
  std::vector<double> observed_orders;  // log(factor) / log(dt[i]/dt[i+1])
};

/// sqrt(<H^2> - <H>^2) in the (normalized) state.
inline double state_dispersion(const StateVector& state, const Operator& h) {
  detail::require_dim(state.dim(), h.dim(), "state_dispersion");
  CVector h_psi = h.matrix() * state.amplitudes();
  double n2 = state.amplitudes().squaredNorm();
  double mean = state.amplitudes().dot(h_psi).real() / n2;
  return std::sqrt(std::max(0.0, h_psi.squaredNorm() / n2 - mean * mean));
}

/// Compares d(g(-δt/2), g(δt/2)) from explicitly evolved states with
/// δt·Δ_g(H) for each step in dt_list (positive, strictly decreasing).
inline LocalDiameterReport local_diameter_check(const StateVector& state, const Operator& h,
                                                std::span<const double> dt_list) {
  if (dt_list.empty()) throw ParameterError("local_diameter_check: empty dt list");
  for (std::size_t i = 0; i < dt_list.size(); ++i) {
    if (!(dt_list[i] > 0.0) || (i > 0 && !(dt_list[i] < dt_list[i - 1]))) {
      throw ParameterError("local_diameter_check: dt values must be positive and decreasing");
    }
  }
  LocalDiameterReport rep;
  rep.dispersion = state_dispersion(state, h);
  for (double dt : dt_list) {
    StateVector before = matrix_exponential(h, -0.5 * dt).apply(state);
    StateVector after = matrix_exponential(h, 0.5 * dt).apply(state);
    double d = distance(before, after);
    double predicted = dt * rep.dispersion;
    double ratio = predicted > 0.0 ? d / predicted : (d == 0.0 ? 1.0 : HUGE_VAL);
    rep.samples.push_back(
        {dt, d, predicted, ratio, ratio - 1.0, std::abs(d - predicted) / (dt * dt)});
  }
  for (std::size_t i = 0; i + 1 < rep.samples.size(); ++i) {
    const auto& coarse = rep.samples[i];
    const auto& fine = rep.samples[i + 1];
    double factor = fine.deviation != 0.0 ? coarse.deviation / fine.deviation : 0.0;
    rep.halving_factors.push_back(factor);
    rep.observed_orders.push_back(factor > 0.0 ? std::log(factor) / std::log(coarse.dt / fine.dt)
                                               : 0.0);
  }
  return rep;
}

inline LocalDiameterReport local_diameter_check(const WHPoint& p, double omega,
                                                const FockCutoff& c,
                                                std::span<const double> dt_list) {
  return local_diameter_check(coherent_vector(p, c), number_operator(c.n_max, omega), dt_list);
}

inline LocalDiameterReport local_diameter_check(const SpherePoint& p, double omega,
                                                std::span<const double> dt_list) {
  return local_diameter_check(coherent_point(p), spin_z_generator(omega), dt_list);
}

// --- Stability-group invariance ---------------------------------------------

struct StabilityReport {
  Manifold manifold;
  int n_samples = 0;
  std::uint64_t seed = 0;
  double max_deviation = 0.0;
};

/// Distance before vs after applying stability elements: independent global
/// phases to each state, plus a common V(t) = exp(-iωt a†a) (WH) or a common
/// SU(2) rotation (su2) to both.
inline StabilityReport stability_invariance_check(Manifold manifold, int n_samples,
                                                  std::uint64_t seed) {
  if (n_samples < 1) throw ParameterError("stability_invariance_check: n_samples must be >= 1");
  StabilityReport rep{manifold, n_samples, seed};
  const CounterRng rng(seed);
  const CounterRng pts = rng.derive(1), phases = rng.derive(2), group = rng.derive(3);
  const FockCutoff cutoff(64);
  auto track = [&rep](double a, double b) {
    rep.max_deviation = std::max(rep.max_deviation, std::abs(a - b));
  };
  for (int k = 0; k < n_samples; ++k) {
    StateVector u = manifold == Manifold::su2
                        ? coherent_point(detail::random_sphere_point(pts.derive(0), k))
                        : coherent_vector(detail::random_disk_point(pts.derive(0), k, 2.0), cutoff);
    StateVector v = manifold == Manifold::su2
                        ? coherent_point(detail::random_sphere_point(pts.derive(1), k))
                        : coherent_vector(detail::random_disk_point(pts.derive(1), k, 2.0), cutoff);
    const double d0 = distance(u, v);
    // Sample 0 uses the trivial phase.
    double theta1 = k == 0 ? 0.0 : 2.0 * std::numbers::pi * phases.uniform(k, 0);
    double theta2 = k == 0 ? 0.0 : 2.0 * std::numbers::pi * phases.uniform(k, 1);
    track(d0, distance(u.scaled(std::polar(1.0, theta1)), v.scaled(std::polar(1.0, theta2))));

    if (manifold == Manifold::su2) {
      Operator g(CMatrix(detail::random_su2(group, k)), OperatorKind::unitary);
      track(d0, distance(g.apply(u), g.apply(v)));
    } else {
      double t = 10.0 * group.uniform(k, 0);
      double omega = 0.5 + 2.0 * group.uniform(k, 1);
      Operator vt = matrix_exponential(number_operator(cutoff.n_max, omega), t);
      track(d0, distance(vt.apply(u), vt.apply(v)));
    }
  }
  return rep;
}

}  // namespace qsurvey
