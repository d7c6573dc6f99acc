#pragma once

// Spin-1/2 coherent states on the Poincaré sphere.
//
// Convention: |θ,φ> = (cos(θ/2), e^{iφ} sin(θ/2)), with the north pole as the
// reference state. The measure dμ = dΩ/2π resolves the identity, so the
// manifold volume Tr(I) is 2.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "qsurvey/hilbert.hpp"
#include "qsurvey/quadrature.hpp"

namespace qsurvey {

class SpherePoint {
 public:
  SpherePoint(double theta, double phi) : theta_(theta), phi_(reduce_angle(phi)) {
    if (!std::isfinite(theta) || !std::isfinite(phi)) {
      throw ParameterError("SpherePoint: non-finite angle");
    }
    // Clamp roundoff from callers that compute θ via acos/atan2.
    if (theta_ < 0.0 && theta_ > -1e-12) theta_ = 0.0;
    if (theta_ > std::numbers::pi && theta_ < std::numbers::pi + 1e-12) theta_ = std::numbers::pi;
    if (theta_ < 0.0 || theta_ > std::numbers::pi) {
      throw ParameterError("SpherePoint: theta must lie in [0, pi]");
    }
  }

  static SpherePoint north_pole() { return {0.0, 0.0}; }

  /// Point with the given unit Bloch vector (normalized internally).
  static SpherePoint from_bloch(const std::array<double, 3>& n) {
    double len = std::hypot(n[0], n[1], n[2]);
    if (!(len > 0.0)) throw ParameterError("SpherePoint::from_bloch: zero vector");
    double z = std::clamp(n[2] / len, -1.0, 1.0);
    return {std::acos(z), std::atan2(n[1], n[0])};
  }

  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }

  std::array<double, 3> bloch() const {
    return {std::sin(theta_) * std::cos(phi_), std::sin(theta_) * std::sin(phi_),
            std::cos(theta_)};
  }

 private:
  static double reduce_angle(double phi) {
    double r = std::fmod(phi, 2.0 * std::numbers::pi);
    if (r < 0.0) r += 2.0 * std::numbers::pi;
    if (r >= 2.0 * std::numbers::pi) r = 0.0;
    return r;
  }

  double theta_;
  double phi_;
};

inline StateVector coherent_point(const SpherePoint& p) {
  CVector v(2);
  v(0) = std::cos(0.5 * p.theta());
  v(1) = std::polar(std::sin(0.5 * p.theta()), p.phi());
  return StateVector(std::move(v), true);
}

/// Angle between the Bloch vectors of a and b, in [0, π].
inline double bloch_angle(const SpherePoint& a, const SpherePoint& b) {
  auto na = a.bloch();
  auto nb = b.bloch();
  std::array<double, 3> cross{na[1] * nb[2] - na[2] * nb[1], na[2] * nb[0] - na[0] * nb[2],
                              na[0] * nb[1] - na[1] * nb[0]};
  double dot = na[0] * nb[0] + na[1] * nb[1] + na[2] * nb[2];
  return std::atan2(std::hypot(cross[0], cross[1], cross[2]), dot);
}

/// |<a|b>|^2 = (1 + n_a·n_b)/2.
inline double overlap_probability(const SpherePoint& a, const SpherePoint& b) {
  return std::norm(inner(coherent_point(a), coherent_point(b)));
}

/// Product rule: Gauss-Legendre in cos θ times the periodic trapezoid in φ.
/// Weights are scaled to the measure dΩ/2π so they sum to 2.
class SphereQuadrature {
 public:
  struct Node {
    SpherePoint point;
    double weight;
  };

  SphereQuadrature(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi) {
    if (n_theta < 2 || n_phi < 3) {
      throw QuadratureError("SphereQuadrature: need n_theta >= 2 and n_phi >= 3");
    }
    QuadratureRule polar = gauss_legendre(n_theta, -1.0, 1.0);
    QuadratureRule azimuth = periodic_trapezoid(n_phi);
    nodes_.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    for (std::size_t i = 0; i < polar.size(); ++i) {
      double theta = std::acos(std::clamp(polar.nodes[i], -1.0, 1.0));
      for (std::size_t j = 0; j < azimuth.size(); ++j) {
        double w = polar.weights[i] * azimuth.weights[j] / (2.0 * std::numbers::pi);
        nodes_.push_back({SpherePoint(theta, azimuth.nodes[j]), w});
      }
    }
  }

  int n_theta() const noexcept { return n_theta_; }
  int n_phi() const noexcept { return n_phi_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }

  double total_weight() const {
    double s = 0.0;
    for (const auto& n : nodes_) s += n.weight;
    return s;
  }

 private:
  int n_theta_;
  int n_phi_;
  std::vector<Node> nodes_;
};

/// Σ_k w_k |g_k><g_k|; equals the 2x2 identity for every valid quadrature.
inline Operator identity_resolution(const SphereQuadrature& q) {
  CMatrix sum = CMatrix::Zero(2, 2);
  for (const auto& node : q.nodes()) {
    const CVector g = coherent_point(node.point).amplitudes();
    sum += node.weight * (g * g.adjoint());
  }
  return Operator(std::move(sum));
}

/// C Σ_k w_k |g_k>⊗<g_k| with C = V^{-1/2}, V the total quadrature weight.
inline PairState bell_state(const SphereQuadrature& q) {
  const double c = 1.0 / std::sqrt(q.total_weight());
  CMatrix sum = CMatrix::Zero(2, 2);
  for (const auto& node : q.nodes()) {
    const CVector g = coherent_point(node.point).amplitudes();
    sum += node.weight * (g * g.adjoint());
  }
  return PairState(c * sum, PairRepresentation::ket_bra);
}

/// Transports the ket_bra Bell state to the two-spin ket_ket form with the
/// given anti-unitary; with time reversal the result is the singlet.
inline PairState singlet_via_tau(const PairState& b, const TauMap& t) {
  if (b.representation() != PairRepresentation::ket_bra) {
    throw RepresentationError("singlet_via_tau: expected a ket_bra pair state");
  }
  if (b.dim_left() != 2 || b.dim_right() != 2) {
    throw DimensionError("singlet_via_tau: expected a spin-1/2 pair state");
  }
  return to_ket_ket(b, t);
}

// --- SU(2) group elements --------------------------------------------------

using Su2Matrix = Eigen::Matrix2cd;

/// exp(-i angle n·σ/2) for a unit axis n.
inline Su2Matrix su2_rotation(const std::array<double, 3>& axis, double angle) {
  double len = std::hypot(axis[0], axis[1], axis[2]);
  if (!(len > 0.0)) throw ParameterError("su2_rotation: zero axis");
  double nx = axis[0] / len, ny = axis[1] / len, nz = axis[2] / len;
  double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  Su2Matrix g;
  g << Complex(c, -s * nz), Complex(-s * ny, -s * nx), Complex(s * ny, -s * nx),
      Complex(c, s * nz);
  return g;
}

/// Unit quaternion (a, b, c, d) -> [[a+ib, c+id], [-c+id, a-ib]].
inline Su2Matrix su2_from_quaternion(double a, double b, double c, double d) {
  double len = std::sqrt(a * a + b * b + c * c + d * d);
  if (!(len > 0.0)) throw ParameterError("su2_from_quaternion: zero quaternion");
  a /= len;
  b /= len;
  c /= len;
  d /= len;
  Su2Matrix g;
  g << Complex(a, b), Complex(c, d), Complex(-c, d), Complex(a, -b);
  return g;
}

/// Diameter of the relation represented by g: sqrt(1 - |<0|g|0>|^2).
inline double su2_relation_diameter(const Su2Matrix& g) {
  return std::sqrt(std::max(0.0, 1.0 - std::norm(g(0, 0))));
}

/// Coherent label of g|ψ> for a spin-1/2 state ψ (global phase discarded).
inline SpherePoint sphere_point_of(const StateVector& psi) {
  if (psi.dim() != 2) throw DimensionError("sphere_point_of: expected a spin-1/2 state");
  Complex up = psi[0], down = psi[1];
  double n2 = std::norm(up) + std::norm(down);
  Complex cross = std::conj(up) * down;
  return SpherePoint::from_bloch(
      {2.0 * cross.real() / n2, 2.0 * cross.imag() / n2, (std::norm(up) - std::norm(down)) / n2});
}

inline SpherePoint rotate(const Su2Matrix& g, const SpherePoint& p) {
  CVector v = g * coherent_point(p).amplitudes();
  return sphere_point_of(StateVector(std::move(v)));
}

/// σ_z/2 scaled by omega: generator of the stability group of the north pole.
inline Operator spin_z_generator(double omega = 1.0) {
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = 0.5 * omega;
  h(1, 1) = -0.5 * omega;
  return Operator(std::move(h), OperatorKind::hermitian);
}

}  // namespace qsurvey
