#pragma once

// Glauber coherent states of the Weyl-Heisenberg group in a truncated Fock
// space, u(λ) = exp(λ a† - λ* a), |λ> = u(λ)|0>.

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qsurvey/hilbert.hpp"
#include "qsurvey/quadrature.hpp"

namespace qsurvey {

/// Coherent label λ, one complex amplitude per mode.
class WHPoint {
 public:
  WHPoint(Complex lambda) : lambda_(CVector::Constant(1, lambda)) { validate(); }  // NOLINT
  explicit WHPoint(CVector lambda) : lambda_(std::move(lambda)) { validate(); }

  int n_modes() const noexcept { return static_cast<int>(lambda_.size()); }
  const CVector& lambda() const noexcept { return lambda_; }
  Complex operator[](int mode) const { return lambda_(mode); }

  /// |λ|^2, the mean photon number.
  double norm_sq() const { return lambda_.squaredNorm(); }

 private:
  void validate() const {
    if (lambda_.size() < 1) throw DimensionError("WHPoint: need at least one mode");
    if (!lambda_.allFinite()) throw ParameterError("WHPoint: non-finite amplitude");
  }
  CVector lambda_;
};

struct FockCutoff {
  int n_max = 64;
  double truncation_tol = 1e-12;

  FockCutoff() = default;
  explicit FockCutoff(int n, double tol = 1e-12) : n_max(n), truncation_tol(tol) {
    if (n < 1) throw ParameterError("FockCutoff: n_max must be >= 1");
    if (!(tol > 0.0)) throw ParameterError("FockCutoff: truncation_tol must be positive");
  }
  int dim() const noexcept { return n_max + 1; }
};

/// Σ_{n > n_max} e^{-mean} mean^n / n!, summed directly so tiny tails keep
/// their relative accuracy.
inline double poisson_tail(double mean, int n_max) {
  if (mean <= 0.0) return 0.0;
  int n = n_max + 1;
  double term = std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
  double sum = 0.0;
  for (int k = 0; k < 100000 && term > 0.0; ++k, ++n) {
    sum += term;
    if (n > mean && term < sum * 1e-18) break;
    term *= mean / (n + 1);
  }
  return sum;
}

/// Smallest n_max whose Poisson tail at the given mean is <= tol.
inline int minimal_cutoff(double mean, double tol) {
  int n = 0;
  while (poisson_tail(mean, n) > tol) ++n;
  return n;
}

inline double truncation_weight(const WHPoint& p, const FockCutoff& c) {
  return poisson_tail(p.norm_sq(), c.n_max);
}

/// e^{-|λ|^2/2} λ^n / sqrt(n!) for n = 0..n_max, without any gating.
inline CVector coherent_amplitudes(Complex lambda, int n_max) {
  CVector v(n_max + 1);
  v(0) = std::exp(-0.5 * std::norm(lambda));
  for (int n = 1; n <= n_max; ++n) v(n) = v(n - 1) * lambda / std::sqrt(static_cast<double>(n));
  return v;
}

/// Truncated single-mode coherent vector. Not renormalized: <v|v> is
/// 1 - truncation_weight. Throws CutoffError if that weight exceeds the
/// cutoff's tolerance.
inline StateVector coherent_vector(const WHPoint& p, const FockCutoff& c) {
  if (p.n_modes() != 1) {
    throw DimensionError("coherent_vector: vector form is single-mode; got " +
                         std::to_string(p.n_modes()) + " modes");
  }
  double weight = truncation_weight(p, c);
  if (weight > c.truncation_tol) {
    int needed = minimal_cutoff(p.norm_sq(), c.truncation_tol);
    throw CutoffError("coherent_vector: truncation weight " + std::to_string(weight) +
                          " exceeds tolerance; minimal adequate n_max = " + std::to_string(needed),
                      needed);
  }
  return StateVector(coherent_amplitudes(p[0], c.n_max));
}

struct Composition {
  WHPoint sum;
  double phase;
};

/// u(λ) u(μ) = e^{iθ} u(λ+μ) with θ = Im(λ·μ*) = -Im(λ*·μ), which is what
/// BCH gives for u(λ) = exp(λa† - λ*a).
inline Composition displacement_compose(const WHPoint& lam, const WHPoint& mu) {
  detail::require_dim(lam.n_modes(), mu.n_modes(), "displacement_compose");
  Complex cross = mu.lambda().dot(lam.lambda());  // Σ conj(μ_j) λ_j
  return {WHPoint(CVector(lam.lambda() + mu.lambda())), cross.imag()};
}

/// e^{-|λ-μ|^2}
inline double overlap_probability(const WHPoint& lam, const WHPoint& mu) {
  detail::require_dim(lam.n_modes(), mu.n_modes(), "overlap_probability");
  return std::exp(-(lam.lambda() - mu.lambda()).squaredNorm());
}

/// Same quantity from truncated vectors, mode by mode.
inline double overlap_probability_numeric(const WHPoint& lam, const WHPoint& mu,
                                          const FockCutoff& c) {
  detail::require_dim(lam.n_modes(), mu.n_modes(), "overlap_probability_numeric");
  double p = 1.0;
  for (int m = 0; m < lam.n_modes(); ++m) {
    p *= std::norm(inner(coherent_vector(WHPoint(lam[m]), c), coherent_vector(WHPoint(mu[m]), c)));
  }
  return p;
}

// --- Fock-space operators --------------------------------------------------

inline Operator annihilation(int n_max) {
  CMatrix a = CMatrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator(std::move(a));
}

inline Operator creation(int n_max) { return Operator(annihilation(n_max).matrix().adjoint()); }

/// omega a†a
inline Operator number_operator(int n_max, double omega = 1.0) {
  CMatrix h = CMatrix::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) h(n, n) = omega * n;
  return Operator(std::move(h), OperatorKind::hermitian);
}

/// Truncated u(λ) = exp(-i G) with the Hermitian generator G = i(λa† - λ*a).
/// Accurate on levels well below n_max.
inline Operator displacement_operator(Complex lambda, int n_max) {
  const CMatrix a = annihilation(n_max).matrix();
  CMatrix g = kI * (lambda * a.adjoint() - std::conj(lambda) * a);
  return matrix_exponential(hermitian_operator(0.5 * (g + g.adjoint())), 1.0);
}

struct DisplacementPhaseCheck {
  double phase;           // arg tr(N† M) over the block
  double block_residual;  // max |M - e^{i phase} N| over the block
};

/// Extracts the phase in u(λ)u(μ) = e^{iθ}u(λ+μ) from truncated matrices,
/// comparing levels 0..block.
inline DisplacementPhaseCheck displacement_phase_numeric(Complex lambda, Complex mu, int n_max,
                                                         int block = 16) {
  if (block < 0 || block > n_max) throw ParameterError("displacement_phase_numeric: bad block");
  CMatrix product = displacement_operator(lambda, n_max).matrix() *
                    displacement_operator(mu, n_max).matrix();
  CMatrix sum = displacement_operator(lambda + mu, n_max).matrix();
  const int k = block + 1;
  CMatrix m = product.topLeftCorner(k, k);
  CMatrix n = sum.topLeftCorner(k, k);
  double phase = std::arg((n.adjoint() * m).trace());
  double residual = (m - std::polar(1.0, phase) * n).cwiseAbs().maxCoeff();
  return {phase, residual};
}

/// Regularized lower incomplete gamma P(a, x) for integer a >= 1:
/// 1 - e^{-x} Σ_{k<a} x^k/k!. For x beyond a the complement is summed
/// directly; below it the convergent series x^a e^{-x}/a! Σ x^k/(a+1)_k is used.
inline double regularized_lower_gamma(int a, double x) {
  if (a < 1) throw ParameterError("regularized_lower_gamma: a must be >= 1");
  if (x <= 0.0) return 0.0;
  if (x > a) {
    double term = std::exp(-x);
    double q = term;
    for (int k = 1; k < a; ++k) {
      term *= x / k;
      q += term;
    }
    return 1.0 - q;
  }
  double term = std::exp(-x + a * std::log(x) - std::lgamma(a + 1.0));
  double sum = 0.0;
  for (int k = 1; k < 100000; ++k) {
    sum += term;
    term *= x / (a + k);
    if (term < sum * 1e-17) break;
  }
  return sum;
}

/// π^{-1} Σ w |λ_k><λ_k| over the disk |λ| <= radius. Radial nodes are
/// Gauss-Legendre in s = |λ|^2 on [0, radius^2]; angular nodes are the
/// periodic trapezoid, which is exact for the off-diagonal harmonics when
/// n_angular > n_max.
inline Operator identity_resolution(const FockCutoff& c, double disk_radius, int n_radial,
                                    int n_angular) {
  if (!(disk_radius > 0.0) || disk_radius * disk_radius < c.n_max) {
    throw CoverageError("identity_resolution: disk_radius^2 must be >= n_max (" +
                        std::to_string(c.n_max) + ")");
  }
  if (n_radial < 1) throw QuadratureError("identity_resolution: n_radial must be >= 1");
  if (n_angular <= c.n_max) {
    throw QuadratureError("identity_resolution: n_angular must exceed n_max");
  }
  QuadratureRule radial = gauss_legendre(n_radial, 0.0, disk_radius * disk_radius);
  QuadratureRule angular = periodic_trapezoid(n_angular);
  CMatrix sum = CMatrix::Zero(c.dim(), c.dim());
  for (std::size_t i = 0; i < radial.size(); ++i) {
    double r = std::sqrt(radial.nodes[i]);
    for (std::size_t j = 0; j < angular.size(); ++j) {
      // d^2λ = (1/2) ds dφ
      double w = 0.5 * radial.weights[i] * angular.weights[j] / std::numbers::pi;
      CVector v = coherent_amplitudes(std::polar(r, angular.nodes[j]), c.n_max);
      sum.noalias() += w * (v * v.adjoint());
    }
  }
  return Operator(std::move(sum));
}

/// Mode-space Hermitian matrix H of the quadratic Hamiltonian a†·H·a.
class QuadraticHamiltonian {
 public:
  explicit QuadraticHamiltonian(CMatrix omega_matrix) : omega_(std::move(omega_matrix)) {
    if (omega_.rows() != omega_.cols() || omega_.rows() < 1) {
      throw DimensionError("QuadraticHamiltonian: matrix must be square");
    }
    if (!omega_.allFinite() || Operator::hermiticity_defect(omega_) > tol::algebraic) {
      throw KindError("QuadraticHamiltonian: matrix must be Hermitian");
    }
  }
  static QuadraticHamiltonian single_mode(double omega) {
    return QuadraticHamiltonian(CMatrix::Constant(1, 1, omega));
  }

  int n_modes() const noexcept { return static_cast<int>(omega_.rows()); }
  const CMatrix& matrix() const noexcept { return omega_; }

 private:
  CMatrix omega_;
};

/// λ(t) = exp(-iHt) λ
inline WHPoint evolve_point(const WHPoint& p, const QuadraticHamiltonian& h, double t) {
  detail::require_dim(p.n_modes(), h.n_modes(), "evolve_point");
  Operator u = matrix_exponential(hermitian_operator(h.matrix()), t);
  return WHPoint(CVector(u.matrix() * p.lambda()));
}

namespace detail {
inline double single_mode_frequency(const QuadraticHamiltonian& h, const char* where) {
  if (h.n_modes() != 1) throw DimensionError(std::string(where) + ": single mode only");
  return h.matrix()(0, 0).real();
}
}  // namespace detail

/// |<λ(t)| V(t) |λ>|^2 with V(t) = exp(-iωt a†a) built at the cutoff.
inline double evolve_state_fidelity(const WHPoint& p, const QuadraticHamiltonian& h, double t,
                                    const FockCutoff& c) {
  double omega = detail::single_mode_frequency(h, "evolve_state_fidelity");
  StateVector start = coherent_vector(p, c);
  StateVector target = coherent_vector(evolve_point(p, h, t), c);
  Operator v = matrix_exponential(number_operator(c.n_max, omega), t);
  return std::norm(inner(target, v.apply(start)));
}

/// sqrt(<H^2> - <H>^2) for H = ω a†a in the truncated state.
inline double dispersion(const WHPoint& p, const QuadraticHamiltonian& h, const FockCutoff& c) {
  double omega = detail::single_mode_frequency(h, "dispersion");
  StateVector psi = coherent_vector(p, c);
  Operator number = number_operator(c.n_max, omega);
  CVector h_psi = number.matrix() * psi.amplitudes();
  double n2 = psi.amplitudes().squaredNorm();
  double mean = psi.amplitudes().dot(h_psi).real() / n2;
  double second = h_psi.squaredNorm() / n2;
  return std::sqrt(std::max(0.0, second - mean * mean));
}

/// Dispersion of a†·H·a in a multi-mode coherent state: |Hλ|.
inline double dispersion_closed_form(const WHPoint& p, const QuadraticHamiltonian& h) {
  detail::require_dim(p.n_modes(), h.n_modes(), "dispersion_closed_form");
  return (h.matrix() * p.lambda()).norm();
}

/// Frobenius norm of the central-difference residual of dg/dt = -i[H, g]
/// for g(t) = V(t) u(λ) V(-t), all as truncated matrices.
inline double heisenberg_residual(const WHPoint& p, double omega, double t, double dt,
                                  const FockCutoff& c) {
  if (!(dt > 0.0)) throw ParameterError("heisenberg_residual: dt must be positive");
  if (p.n_modes() != 1) throw DimensionError("heisenberg_residual: single mode only");
  (void)coherent_vector(p, c);  // cutoff gate
  Operator h = number_operator(c.n_max, omega);
  CMatrix u = displacement_operator(p[0], c.n_max).matrix();
  auto g = [&](double s) {
    CMatrix v = matrix_exponential(h, s).matrix();
    return CMatrix(v * u * v.adjoint());
  };
  CMatrix g_now = g(t);
  CMatrix derivative = (g(t + dt) - g(t - dt)) / (2.0 * dt);
  CMatrix rhs = h.matrix() * g_now - g_now * h.matrix();
  return (derivative + kI * rhs).norm();
}

}  // namespace qsurvey
