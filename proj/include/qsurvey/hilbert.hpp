#pragma once

// Finite-dimensional Hilbert-space primitives shared by both manifolds.

#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "qsurvey/errors.hpp"

namespace qsurvey {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

namespace tol {
inline constexpr double algebraic = 1e-12;
inline constexpr double unitary = 1e-10;
inline constexpr double composed = 1e-9;
}  // namespace tol

namespace detail {

inline void require_dim(long a, long b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace detail

class StateVector {
 public:
  explicit StateVector(CVector amplitudes, bool normalized = false)
      : amplitudes_(std::move(amplitudes)), normalized_(normalized) {
    if (amplitudes_.size() < 1) throw DimensionError("StateVector: dim must be >= 1");
    if (!amplitudes_.allFinite()) throw ParameterError("StateVector: non-finite amplitude");
    if (normalized_ && std::abs(amplitudes_.squaredNorm() - 1.0) > tol::algebraic) {
      throw ParameterError("StateVector: flagged normalized but <v|v> = " +
                           std::to_string(amplitudes_.squaredNorm()));
    }
  }

  static StateVector basis(int dim, int index) {
    if (index < 0 || index >= dim) throw DimensionError("StateVector::basis: index out of range");
    CVector v = CVector::Zero(dim);
    v(index) = 1.0;
    return StateVector(std::move(v), true);
  }

  int dim() const noexcept { return static_cast<int>(amplitudes_.size()); }
  const CVector& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](int i) const { return amplitudes_(i); }
  bool normalized() const noexcept { return normalized_; }
  double norm() const { return amplitudes_.norm(); }

  StateVector scaled(Complex factor) const {
    return StateVector(amplitudes_ * factor,
                       normalized_ && std::abs(std::abs(factor) - 1.0) <= tol::algebraic);
  }

 private:
  CVector amplitudes_;
  bool normalized_;
};

enum class OperatorKind { general, hermitian, unitary };

/// Dense square operator. Construction with kind hermitian or unitary certifies
/// the claim against the library tolerances and throws KindError if it fails.
class Operator {
 public:
  explicit Operator(CMatrix entries, OperatorKind kind = OperatorKind::general)
      : entries_(std::move(entries)), kind_(kind) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
      throw DimensionError("Operator: matrix must be square with dim >= 1");
    }
    if (!entries_.allFinite()) throw ParameterError("Operator: non-finite entry");
    if (kind_ == OperatorKind::hermitian && hermiticity_defect(entries_) > tol::algebraic) {
      throw KindError("Operator: not Hermitian within 1e-12");
    }
    if (kind_ == OperatorKind::unitary && unitarity_defect(entries_) > tol::unitary) {
      throw KindError("Operator: not unitary within 1e-10");
    }
  }

  static Operator identity(int dim) {
    return Operator(CMatrix::Identity(dim, dim), OperatorKind::unitary);
  }

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const CMatrix& matrix() const noexcept { return entries_; }
  OperatorKind kind() const noexcept { return kind_; }
  Complex operator()(int r, int c) const { return entries_(r, c); }

  StateVector apply(const StateVector& v) const {
    detail::require_dim(dim(), v.dim(), "Operator::apply");
    CVector out = entries_ * v.amplitudes();
    bool keeps_norm = kind_ == OperatorKind::unitary && v.normalized() &&
                      std::abs(out.squaredNorm() - 1.0) <= tol::algebraic;
    return StateVector(std::move(out), keeps_norm);
  }

  Operator adjoint() const {
    return Operator(entries_.adjoint(), kind_);
  }

  static double hermiticity_defect(const CMatrix& m) {
    return detail::max_abs(m - m.adjoint());
  }
  static double unitarity_defect(const CMatrix& m) {
    return detail::max_abs(m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols()));
  }

 private:
  CMatrix entries_;
  OperatorKind kind_;
};

inline Operator operator*(const Operator& a, const Operator& b) {
  detail::require_dim(a.dim(), b.dim(), "Operator product");
  return Operator(a.matrix() * b.matrix());
}

/// <u|v>, conjugate-linear in the first slot.
inline Complex inner(const StateVector& u, const StateVector& v) {
  detail::require_dim(u.dim(), v.dim(), "inner");
  return u.amplitudes().dot(v.amplitudes());
}

/// <v|A|v>
inline Complex expectation(const StateVector& v, const Operator& a) {
  detail::require_dim(v.dim(), a.dim(), "expectation");
  return v.amplitudes().dot(a.matrix() * v.amplitudes());
}

/// exp(-i t H) for Hermitian H via its eigendecomposition. The result is
/// certified unitary.
inline Operator matrix_exponential(const Operator& h, double t) {
  if (h.kind() != OperatorKind::hermitian) {
    throw KindError("matrix_exponential: generator must be certified Hermitian");
  }
  // Symmetrize so roundoff in the certified input cannot leak into the solver.
  CMatrix sym = 0.5 * (h.matrix() + h.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw Error("matrix_exponential: eigensolver failed");
  const Eigen::VectorXd& evals = solver.eigenvalues();
  CVector phases(evals.size());
  for (Eigen::Index k = 0; k < evals.size(); ++k) phases(k) = std::exp(-kI * (t * evals(k)));
  const CMatrix& v = solver.eigenvectors();
  CMatrix u = v * phases.asDiagonal() * v.adjoint();
  return Operator(std::move(u), OperatorKind::unitary);
}

inline Operator hermitian_operator(CMatrix m) {
  return Operator(std::move(m), OperatorKind::hermitian);
}

// Commutator [a, b] as a general operator.
inline Operator commutator(const Operator& a, const Operator& b) {
  detail::require_dim(a.dim(), b.dim(), "commutator");
  return Operator(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

enum class PairRepresentation { ket_bra, ket_ket };

inline const char* to_string(PairRepresentation r) {
  return r == PairRepresentation::ket_bra ? "ket_bra" : "ket_ket";
}

/// Two-party state stored as its coefficient matrix. In ket_bra form entry
/// (i, j) multiplies |i>⊗<j|; in ket_ket form it multiplies |i>|j>.
class PairState {
 public:
  PairState(CMatrix coefficients, PairRepresentation representation)
      : coefficients_(std::move(coefficients)), representation_(representation) {
    if (coefficients_.rows() < 1 || coefficients_.cols() < 1) {
      throw DimensionError("PairState: dims must be >= 1");
    }
    if (!coefficients_.allFinite()) throw ParameterError("PairState: non-finite coefficient");
  }

  /// |u> ⊗ <v|
  static PairState ket_bra(const StateVector& ket, const StateVector& bra) {
    return PairState(ket.amplitudes() * bra.amplitudes().adjoint(), PairRepresentation::ket_bra);
  }

  int dim_left() const noexcept { return static_cast<int>(coefficients_.rows()); }
  int dim_right() const noexcept { return static_cast<int>(coefficients_.cols()); }
  const CMatrix& matrix() const noexcept { return coefficients_; }
  PairRepresentation representation() const noexcept { return representation_; }
  double norm() const { return coefficients_.norm(); }

 private:
  CMatrix coefficients_;
  PairRepresentation representation_;
};

/// Frobenius pairing sum conj(p_ij) q_ij.
inline Complex pair_inner(const PairState& p, const PairState& q) {
  if (p.representation() != q.representation()) {
    throw RepresentationError("pair_inner: representation mismatch");
  }
  detail::require_dim(p.dim_left(), q.dim_left(), "pair_inner (left)");
  detail::require_dim(p.dim_right(), q.dim_right(), "pair_inner (right)");
  return (p.matrix().conjugate().cwiseProduct(q.matrix())).sum();
}

/// Anti-unitary map in canonical form: conjugate the amplitudes, then apply a
/// unitary. square_sign() is +1 or -1 when tau^2 = ±I, 0 otherwise.
class TauMap {
 public:
  explicit TauMap(Operator unitary_part) : unitary_(std::move(unitary_part)) {
    if (unitary_.kind() != OperatorKind::unitary) {
      throw KindError("TauMap: unitary part must be certified unitary");
    }
    const CMatrix& u = unitary_.matrix();
    CMatrix square = u * u.conjugate();
    CMatrix id = CMatrix::Identity(dim(), dim());
    if (detail::max_abs(square - id) <= tol::algebraic) {
      square_sign_ = 1;
    } else if (detail::max_abs(square + id) <= tol::algebraic) {
      square_sign_ = -1;
    }
  }

  /// Spin-1/2 time reversal: |up> -> |down>, |down> -> -|up>.
  static TauMap time_reversal_spin_half() {
    CMatrix u(2, 2);
    u << 0.0, -1.0, 1.0, 0.0;
    return TauMap(Operator(u, OperatorKind::unitary));
  }

  /// Complex conjugation in the Fock (number) basis.
  static TauMap fock_conjugation(int dim) { return TauMap(Operator::identity(dim)); }

  int dim() const noexcept { return unitary_.dim(); }
  const Operator& unitary_part() const noexcept { return unitary_; }
  int square_sign() const noexcept { return square_sign_; }

 private:
  Operator unitary_;
  int square_sign_ = 0;
};

inline StateVector tau_apply(const TauMap& map, const StateVector& v) {
  detail::require_dim(map.dim(), v.dim(), "tau_apply");
  CVector out = map.unitary_part().matrix() * v.amplitudes().conjugate();
  return StateVector(std::move(out), v.normalized());
}

/// Sends the bra factor <x| to the ket tau|x>: K = M U^T.
inline PairState to_ket_ket(const PairState& p, const TauMap& map) {
  if (p.representation() != PairRepresentation::ket_bra) {
    throw RepresentationError("to_ket_ket: input must be in ket_bra form");
  }
  detail::require_dim(p.dim_right(), map.dim(), "to_ket_ket");
  return PairState(p.matrix() * map.unitary_part().matrix().transpose(),
                   PairRepresentation::ket_ket);
}

/// Inverse of to_ket_ket: M = K conj(U).
inline PairState to_ket_bra(const PairState& p, const TauMap& map) {
  if (p.representation() != PairRepresentation::ket_ket) {
    throw RepresentationError("to_ket_bra: input must be in ket_ket form");
  }
  detail::require_dim(p.dim_right(), map.dim(), "to_ket_bra");
  return PairState(p.matrix() * map.unitary_part().matrix().conjugate(),
                   PairRepresentation::ket_bra);
}

}  // namespace qsurvey
