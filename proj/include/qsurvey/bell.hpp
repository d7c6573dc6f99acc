#pragma once

// Generalized Bell states: the exact spin-1/2 state and the normalizable
// Weyl-Heisenberg family |B,r> = sqrt(1-r^2) Σ r^n |n>⊗<n|, 0 <= r < 1.

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qsurvey/hilbert.hpp"
#include "qsurvey/metric.hpp"
#include "qsurvey/su2.hpp"
#include "qsurvey/weyl_heisenberg.hpp"

namespace qsurvey {

struct NormalizationRecord {
  Manifold manifold;
  double volume;    // V_F = Tr(I); +inf when the group is not compact
  double constant;  // C = V_F^{-1/2}, 0 when improper
  bool improper;
};

inline NormalizationRecord normalization_volume(Manifold m) {
  if (m == Manifold::su2) {
    double volume = identity_resolution(SphereQuadrature(4, 6)).matrix().trace().real();
    return {m, volume, 1.0 / std::sqrt(volume), false};
  }
  return {m, std::numeric_limits<double>::infinity(), 0.0, true};
}

class BellStateWH {
 public:
  BellStateWH(double r, FockCutoff cutoff) : r_(r), cutoff_(cutoff) {
    if (!(r >= 0.0 && r < 1.0)) throw ParameterError("r must be in [0,1)");
    if (std::pow(r, cutoff.n_max + 1) > 1e-8) {
      // smallest n with r^(n+1) <= 1e-8
      int needed = static_cast<int>(std::ceil(std::log(1e-8) / std::log(r))) - 1;
      throw CutoffError("build_bell_wh: r^(n_max+1) = " +
                            std::to_string(std::pow(r, cutoff.n_max + 1)) +
                            " exceeds 1e-8; minimal adequate n_max = " + std::to_string(needed),
                        needed);
    }
    const double scale = std::sqrt(1.0 - r * r);
    schmidt_.resize(cutoff.dim());
    double rn = 1.0;
    for (int n = 0; n <= cutoff.n_max; ++n, rn *= r) schmidt_[n] = scale * rn;
  }

  double r() const noexcept { return r_; }
  const FockCutoff& cutoff() const noexcept { return cutoff_; }
  const std::vector<double>& schmidt_coefficients() const noexcept { return schmidt_; }

  PairState ket_bra() const {
    CMatrix m = CMatrix::Zero(cutoff_.dim(), cutoff_.dim());
    for (int n = 0; n <= cutoff_.n_max; ++n) m(n, n) = schmidt_[n];
    return PairState(std::move(m), PairRepresentation::ket_bra);
  }

  /// sqrt(1-r^2) Σ r^n |n>|n>, via conjugation in the Fock basis.
  PairState ket_ket() const { return to_ket_ket(ket_bra(), TauMap::fock_conjugation(cutoff_.dim())); }

 private:
  double r_;
  FockCutoff cutoff_;
  std::vector<double> schmidt_;
};

inline BellStateWH build_bell_wh(double r, const FockCutoff& c) { return BellStateWH(r, c); }

// --- Amplitudes and conditional probabilities -------------------------------

/// <<g1, g2 | B>> = <g1| B |g2> for a spin-1/2 ket_bra pair state.
inline Complex pair_amplitude(const PairState& b, const SpherePoint& g1, const SpherePoint& g2) {
  if (b.representation() != PairRepresentation::ket_bra) {
    throw RepresentationError("pair_amplitude: expected ket_bra form");
  }
  if (b.dim_left() != 2 || b.dim_right() != 2) {
    throw DimensionError("pair_amplitude: pair state is not on the spin-1/2 manifold");
  }
  return pair_inner(PairState::ket_bra(coherent_point(g1), coherent_point(g2)), b);
}

/// Truncated numeric <<λ, μ | B,r>>.
inline Complex pair_amplitude(const BellStateWH& b, const WHPoint& lam, const WHPoint& mu) {
  if (lam.n_modes() != 1 || mu.n_modes() != 1) {
    throw DimensionError("pair_amplitude: WH Bell state is single-mode");
  }
  StateVector l = coherent_vector(lam, b.cutoff());
  StateVector m = coherent_vector(mu, b.cutoff());
  return pair_inner(PairState::ket_bra(l, m), b.ket_bra());
}

/// sqrt(1-r^2) e^{-(|λ|^2+|μ|^2)/2} e^{r λ* μ}
inline Complex pair_amplitude_closed_form(double r, Complex lam, Complex mu) {
  if (!(r >= 0.0 && r < 1.0)) throw ParameterError("r must be in [0,1)");
  return std::sqrt(1.0 - r * r) *
         std::exp(-0.5 * (std::norm(lam) + std::norm(mu)) + r * std::conj(lam) * mu);
}

/// Marginal π^{-1}∫d^2λ |<<λ,μ|B,r>>|^2 = (1-r^2) e^{-(1-r^2)|μ|^2}.
inline double wh_marginal_closed_form(double r, Complex mu) {
  double s = 1.0 - r * r;
  return s * std::exp(-s * std::norm(mu));
}

/// |amplitude|^2 / Σ_k w_k |amplitude(g_k, g2)|^2, marginal by quadrature.
inline double conditional_probability(const PairState& b, const SpherePoint& g1,
                                      const SpherePoint& g2,
                                      const SphereQuadrature& q = SphereQuadrature(4, 6)) {
  double marginal = 0.0;
  for (const auto& node : q.nodes()) marginal += node.weight * std::norm(pair_amplitude(b, node.point, g2));
  return std::norm(pair_amplitude(b, g1, g2)) / marginal;
}

/// |amplitude|^2 / marginal for |B,r>; equals e^{-|λ - rμ|^2}.
inline double conditional_probability(const BellStateWH& b, const WHPoint& lam, const WHPoint& mu) {
  return std::norm(pair_amplitude(b, lam, mu)) / wh_marginal_closed_form(b.r(), mu[0]);
}

/// |amplitude|^2 / (1 - r^2) from the closed form; tends to e^{-|λ-μ|^2} as
/// r -> 1 with error O(1 - r).
inline double limit_ratio(double r, Complex lam, Complex mu) {
  return std::norm(pair_amplitude_closed_form(r, lam, mu)) / (1.0 - r * r);
}

// --- Two-mode operators -----------------------------------------------------

/// Operator on the two-mode space as a sum of tensor products Σ c X⊗Y,
/// acting on ket_ket coefficient matrices as K -> Σ c X K Y^T.
class TwoModeOperator {
 public:
  struct Term {
    Complex coeff;
    CMatrix left;
    CMatrix right;
  };

  TwoModeOperator() = default;
  explicit TwoModeOperator(std::vector<Term> terms) : terms_(std::move(terms)) {}

  static TwoModeOperator product(Complex c, const CMatrix& left, const CMatrix& right) {
    return TwoModeOperator({{c, left, right}});
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }

  CMatrix apply(const CMatrix& k) const {
    CMatrix out = CMatrix::Zero(k.rows(), k.cols());
    for (const auto& t : terms_) out += t.coeff * (t.left * k * t.right.transpose());
    return out;
  }

  TwoModeOperator adjoint() const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({std::conj(t.coeff), t.left.adjoint(), t.right.adjoint()});
    return TwoModeOperator(std::move(out));
  }

  /// <i,j| op |k,l>
  Complex element(int i, int j, int k, int l) const {
    Complex s = 0.0;
    for (const auto& t : terms_) s += t.coeff * t.left(i, k) * t.right(j, l);
    return s;
  }

  friend TwoModeOperator operator+(TwoModeOperator a, const TwoModeOperator& b) {
    a.terms_.insert(a.terms_.end(), b.terms_.begin(), b.terms_.end());
    return a;
  }
  friend TwoModeOperator operator-(TwoModeOperator a, const TwoModeOperator& b) {
    for (const auto& t : b.terms_) a.terms_.push_back({-t.coeff, t.left, t.right});
    return a;
  }
  friend TwoModeOperator operator*(const TwoModeOperator& a, const TwoModeOperator& b) {
    std::vector<Term> out;
    for (const auto& x : a.terms_) {
      for (const auto& y : b.terms_) {
        out.push_back({x.coeff * y.coeff, x.left * y.left, x.right * y.right});
      }
    }
    return TwoModeOperator(std::move(out));
  }

 private:
  std::vector<Term> terms_;
};

struct TwistedVacuumReport {
  double r = 0.0;
  int n_max = 0;
  double norm = 0.0;
  double annihilator1 = 0.0;  // |(a⊗I - r I⊗a†)|B,r>| / sqrt(1-r^2)
  double annihilator2 = 0.0;  // |(I⊗a - r a†⊗I)|B,r>| / sqrt(1-r^2)
  double commutator_deviation = 0.0;  // max |[A1, A1†] - I| on levels <= n_max-2
  double tail_bound = 0.0;            // 10 r^{n_max} (1-r^2)^{-1/2}
};

/// Checks the twisted-vacuum annihilator identities in the two-mode (ket_ket)
/// representation, where (a1 - r a2†)|B,r> = 0 holds term by term.
inline TwistedVacuumReport twisted_vacuum_residuals(double r, const FockCutoff& c) {
  BellStateWH bell = build_bell_wh(r, c);
  const CMatrix psi = bell.ket_ket().matrix();
  const int dim = c.dim();
  const CMatrix a = annihilation(c.n_max).matrix();
  const CMatrix ad = a.adjoint();
  const CMatrix id = CMatrix::Identity(dim, dim);
  const double scale = 1.0 / std::sqrt(1.0 - r * r);

  TwoModeOperator a1 = TwoModeOperator::product(scale, a, id) -
                       TwoModeOperator::product(scale * r, id, ad);
  TwoModeOperator a2 = TwoModeOperator::product(scale, id, a) -
                       TwoModeOperator::product(scale * r, ad, id);

  TwistedVacuumReport rep;
  rep.r = r;
  rep.n_max = c.n_max;
  rep.norm = psi.norm();
  rep.annihilator1 = a1.apply(psi).norm();
  rep.annihilator2 = a2.apply(psi).norm();
  rep.tail_bound = 10.0 * std::pow(r, c.n_max) * scale;

  TwoModeOperator comm = a1 * a1.adjoint() - a1.adjoint() * a1;
  const int interior = std::max(0, c.n_max - 1);  // levels 0..n_max-2
  double worst = 0.0;
  for (int i = 0; i < interior; ++i) {
    for (int j = 0; j < interior; ++j) {
      for (int k = 0; k < interior; ++k) {
        for (int l = 0; l < interior; ++l) {
          Complex expected = (i == k && j == l) ? 1.0 : 0.0;
          worst = std::max(worst, std::abs(comm.element(i, j, k, l) - expected));
        }
      }
    }
  }
  rep.commutator_deviation = worst;
  return rep;
}

}  // namespace qsurvey
