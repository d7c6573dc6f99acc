#include <gtest/gtest.h>

#include <numbers>

#include "qsurvey/metric.hpp"
#include "qsurvey/su2.hpp"

using namespace qsurvey;

namespace {
constexpr double pi = std::numbers::pi;

double dot(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
}  // namespace

TEST(SpherePoint, DomainAndReduction) {
  EXPECT_THROW(SpherePoint(-0.1, 0.0), ParameterError);
  EXPECT_THROW(SpherePoint(pi + 0.1, 0.0), ParameterError);
  EXPECT_THROW(SpherePoint(0.5, std::nan("")), ParameterError);
  EXPECT_NEAR(SpherePoint(1.0, -0.5).phi(), 2.0 * pi - 0.5, 1e-15);
  EXPECT_NEAR(SpherePoint(1.0, 7.0).phi(), 7.0 - 2.0 * pi, 1e-15);
  EXPECT_EQ(SpherePoint(-1e-14, 0.0).theta(), 0.0);
}

TEST(SpherePoint, BlochRoundTrip) {
  SpherePoint p(1.2, 2.3);
  SpherePoint q = SpherePoint::from_bloch(p.bloch());
  EXPECT_NEAR(q.theta(), 1.2, 1e-14);
  EXPECT_NEAR(q.phi(), 2.3, 1e-14);
}

TEST(CoherentPoint, HalfAngleConvention) {
  StateVector v = coherent_point(SpherePoint(pi, 0.0));
  EXPECT_NEAR(std::abs(v[0]), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(v[1]), 1.0, 1e-16);
  EXPECT_TRUE(v.normalized());
}

TEST(CoherentPoint, OverlapIsHalfOnePlusCosine) {
  SpherePoint a(0.4, 1.0), b(2.2, -0.7);
  double expected = 0.5 * (1.0 + dot(a.bloch(), b.bloch()));
  EXPECT_NEAR(overlap_probability(a, b), expected, 1e-15);
  EXPECT_NEAR(std::cos(bloch_angle(a, b)), dot(a.bloch(), b.bloch()), 1e-15);
}

TEST(SphereQuadrature, RejectsTooFewNodes) {
  EXPECT_THROW(SphereQuadrature(1, 6), QuadratureError);
  EXPECT_THROW(SphereQuadrature(4, 2), QuadratureError);
}

TEST(SphereQuadrature, ResolvesIdentityForEveryValidRule) {
  for (auto [nt, np] : {std::pair{2, 3}, {4, 6}, {7, 11}, {12, 5}}) {
    SphereQuadrature q(nt, np);
    EXPECT_NEAR(q.total_weight(), 2.0, 1e-14);
    Operator id = identity_resolution(q);
    EXPECT_LT(detail::max_abs(id.matrix() - CMatrix::Identity(2, 2)), 1e-14)
        << nt << "x" << np;
    EXPECT_NEAR(id.matrix().trace().real(), 2.0, 1e-14);
  }
}

TEST(BellState, EqualsScaledIdentity) {
  PairState b = bell_state(SphereQuadrature(4, 6));
  EXPECT_EQ(b.representation(), PairRepresentation::ket_bra);
  EXPECT_LT(detail::max_abs(b.matrix() - std::sqrt(0.5) * CMatrix::Identity(2, 2)), 1e-15);
  EXPECT_NEAR(b.norm(), 1.0, 1e-15);
}

TEST(BellState, TimeReversalGivesSinglet) {
  PairState s = singlet_via_tau(bell_state(SphereQuadrature(3, 4)),
                                TauMap::time_reversal_spin_half());
  EXPECT_EQ(s.representation(), PairRepresentation::ket_ket);
  const double h = std::sqrt(0.5);
  EXPECT_NEAR(std::abs(s.matrix()(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(s.matrix()(0, 1).real(), h, 1e-15);
  EXPECT_NEAR(s.matrix()(1, 0).real(), -h, 1e-15);
  EXPECT_NEAR(std::abs(s.matrix()(1, 1)), 0.0, 1e-15);
  // antisymmetric
  EXPECT_LT(detail::max_abs(s.matrix() + s.matrix().transpose()), 1e-15);
}

TEST(BellState, SingletRejectsWrongInputs) {
  PairState k(CMatrix::Identity(2, 2), PairRepresentation::ket_ket);
  EXPECT_THROW(singlet_via_tau(k, TauMap::time_reversal_spin_half()), RepresentationError);
  PairState big(CMatrix::Identity(3, 3), PairRepresentation::ket_bra);
  EXPECT_THROW(singlet_via_tau(big, TauMap::time_reversal_spin_half()), DimensionError);
}

TEST(Su2Group, RotationIsUnitaryWithUnitDeterminant) {
  Su2Matrix g = su2_rotation({1.0, -2.0, 0.5}, 1.7);
  EXPECT_LT(Operator::unitarity_defect(g), 1e-15);
  EXPECT_NEAR(std::abs(g.determinant() - 1.0), 0.0, 1e-15);
  EXPECT_THROW(su2_rotation({0.0, 0.0, 0.0}, 1.0), ParameterError);
  EXPECT_THROW(su2_from_quaternion(0.0, 0.0, 0.0, 0.0), ParameterError);
}

TEST(Su2Group, RotationActsOnBlochVectorByRodrigues) {
  const std::array<double, 3> axis{0.0, 1.0, 0.0};
  SpherePoint p(0.3, 0.0);
  SpherePoint q = rotate(su2_rotation(axis, 0.9), p);
  // rotation about y by 0.9 moves θ from 0.3 to 1.2 at φ = 0
  EXPECT_NEAR(q.theta(), 1.2, 1e-14);
  EXPECT_NEAR(q.phi(), 0.0, 1e-14);
}

TEST(Su2Group, RelationDiameterMatchesStateDistance) {
  Su2Matrix g = su2_from_quaternion(0.3, -0.8, 0.5, 0.1);
  StateVector north = coherent_point(SpherePoint::north_pole());
  StateVector moved(CVector(g * north.amplitudes()), true);
  EXPECT_NEAR(su2_relation_diameter(g), distance(north, moved), 1e-15);
  // and with the Bloch-angle closed form
  double theta = bloch_angle(SpherePoint::north_pole(), rotate(g, SpherePoint::north_pole()));
  EXPECT_NEAR(su2_relation_diameter(g), std::sin(0.5 * theta), 1e-14);
}

TEST(Su2Group, StabilityElementOnlyChangesPhase) {
  StateVector north = coherent_point(SpherePoint::north_pole());
  StateVector out = matrix_exponential(spin_z_generator(1.3), 2.0).apply(north);
  EXPECT_NEAR(std::norm(inner(north, out)), 1.0, 1e-15);
}

TEST(Su2Group, SpinZEvolutionAdvancesAzimuth) {
  SpherePoint p(1.0, 0.2);
  StateVector out = matrix_exponential(spin_z_generator(1.0), 0.5).apply(coherent_point(p));
  SpherePoint q = sphere_point_of(out);
  EXPECT_NEAR(q.theta(), 1.0, 1e-14);
  EXPECT_NEAR(q.phi(), 0.7, 1e-14);
}
