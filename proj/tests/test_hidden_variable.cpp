#include <gtest/gtest.h>

#include <numbers>

#include "qsurvey/hidden_variable.hpp"

using namespace qsurvey;

namespace {
constexpr double pi = std::numbers::pi;

ManifoldPoint wh(double x) { return WHPoint(Complex(x)); }
ManifoldPoint sphere(double theta) { return SpherePoint(theta, 0.0); }
}  // namespace

TEST(CounterRng, MatchesSplitMix64Sequence) {
  // reference values from an independent SplitMix64 stepping of the lane state
  const CounterRng rng(12345);
  EXPECT_EQ(rng.bits(0, 3), 0x6de89a902fea6421ULL);
  EXPECT_EQ(rng.bits(1, 3), 0x70a832d544951aa2ULL);
  EXPECT_EQ(rng.bits(2, 3), 0x33af1b8a88c6a646ULL);
  EXPECT_EQ(CounterRng(0).bits(0), 0xac2f4942fb573f0aULL);
  EXPECT_EQ(CounterRng(0).bits(1), 0x07e1519ee7d54b08ULL);
}

TEST(CounterRng, UniformRanges) {
  const CounterRng rng(1);
  double mean = 0.0;
  for (int i = 0; i < 100000; ++i) {
    double u = rng.uniform(i), v = rng.uniform_open(i);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
    mean += u;
  }
  EXPECT_NEAR(mean / 100000, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / 100000));
  EXPECT_NE(rng.derive(1).bits(0), rng.derive(2).bits(0));
  EXPECT_NE(rng.bits(0, 0), rng.bits(0, 1));
}

TEST(HiddenLaw, DensitiesPerManifold) {
  EXPECT_EQ(HiddenVariableLaw::for_manifold(Manifold::su2).density, HiddenDensity::uniform_sphere);
  EXPECT_EQ(HiddenVariableLaw::for_manifold(Manifold::weyl_heisenberg).density,
            HiddenDensity::maxwellian);
}

TEST(HiddenLaw, MaxwellianMoments) {
  // E|λ|² = 1, E λ = 0
  const auto law = HiddenVariableLaw::for_manifold(Manifold::weyl_heisenberg);
  const CounterRng rng(2);
  const int n = 200000;
  double m2 = 0.0;
  Complex m1 = 0.0;
  for (int i = 0; i < n; ++i) {
    Complex l = std::get<WHPoint>(sample_hidden(law, rng, i))[0];
    m2 += std::norm(l);
    m1 += l;
  }
  EXPECT_NEAR(m2 / n, 1.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(std::abs(m1 / static_cast<double>(n)), 0.0, 5.0 / std::sqrt(n));
}

class HiddenCdf : public ::testing::TestWithParam<Manifold> {};

TEST_P(HiddenCdf, FollowsRSquaredLaw) {
  const auto law = HiddenVariableLaw::for_manifold(GetParam());
  CdfReport rep = cdf_diagnostics(law, 200000, 4);
  EXPECT_TRUE(rep.pass) << rep.ks_statistic << " > " << rep.band;
  EXPECT_NEAR(rep.band, 1.95 / std::sqrt(200000.0), 1e-18);
  for (double r : {0.2, 0.5, 0.9}) {
    EXPECT_NEAR(empirical_cdf(law, r, 200000, 5), r * r, 4.0 * 0.5 / std::sqrt(200000.0));
  }
}

TEST_P(HiddenCdf, RejectsSmallSamples) {
  EXPECT_THROW(cdf_diagnostics(HiddenVariableLaw::for_manifold(GetParam()), 9999, 1),
               ParameterError);
}

INSTANTIATE_TEST_SUITE_P(BothManifolds, HiddenCdf,
                         ::testing::Values(Manifold::su2, Manifold::weyl_heisenberg),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Experiment, Preconditions) {
  const auto law = HiddenVariableLaw::for_manifold(Manifold::weyl_heisenberg);
  try {
    run_epr_experiment(law, wh(0.0), wh(1.0), 10, 1);
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_STREQ(e.what(), "n_trials below minimum 1000");
  }
  EXPECT_THROW(run_epr_experiment(law, wh(0.0), sphere(1.0), 1000, 1), DimensionError);
  EXPECT_THROW(settings_diameter(wh(0.0), sphere(1.0)), DimensionError);
}

TEST(Experiment, DegenerateSeparations) {
  const auto wh_law = HiddenVariableLaw::for_manifold(Manifold::weyl_heisenberg);
  ExperimentReport zero = run_epr_experiment(wh_law, wh(0.3), wh(0.3), 10000, 7);
  EXPECT_EQ(zero.observed_rate, 1.0);
  EXPECT_EQ(zero.z_score, 0.0);
  EXPECT_TRUE(zero.pass);
  const auto su2_law = HiddenVariableLaw::for_manifold(Manifold::su2);
  ExperimentReport opposite = run_epr_experiment(su2_law, sphere(0.0), sphere(pi), 10000, 7);
  EXPECT_EQ(opposite.relation_diameter, 1.0);
  EXPECT_EQ(opposite.coincidences, 0);
  EXPECT_TRUE(opposite.pass);
}

TEST(Experiment, RatesMatchOneMinusDSquared) {
  for (Manifold m : {Manifold::su2, Manifold::weyl_heisenberg}) {
    const auto law = HiddenVariableLaw::for_manifold(m);
    for (double x : {0.25, 0.5, 1.0, 1.5}) {
      ManifoldPoint g2 = m == Manifold::su2 ? sphere(x * 2.0) : wh(x);
      ManifoldPoint g1 = m == Manifold::su2 ? sphere(0.0) : wh(0.0);
      ExperimentReport rep = run_epr_experiment(law, g1, g2, 200000, 11);
      EXPECT_LE(std::abs(rep.z_score), kZThreshold) << to_string(m) << " " << x;
      EXPECT_NEAR(rep.predicted_rate, 1.0 - rep.relation_diameter * rep.relation_diameter, 0.0);
    }
  }
}

TEST(Experiment, IndependentOfThreadCount) {
  const auto law = HiddenVariableLaw::for_manifold(Manifold::weyl_heisenberg);
  std::vector<TrialRecord> one, many;
  ExperimentReport a = run_epr_experiment(law, wh(0.0), wh(0.8), 50000, 3, &one, 1);
  ExperimentReport b = run_epr_experiment(law, wh(0.0), wh(0.8), 50000, 3, &many, 7);
  EXPECT_EQ(a.coincidences, b.coincidences);
  EXPECT_EQ(one, many);
  for (std::size_t i = 0; i < one.size(); ++i) ASSERT_EQ(one[i].trial_index, i);
}

TEST(Experiment, SeedChangesStream) {
  const auto law = HiddenVariableLaw::for_manifold(Manifold::su2);
  ExperimentReport a = run_epr_experiment(law, sphere(0.0), sphere(1.0), 20000, 1);
  ExperimentReport b = run_epr_experiment(law, sphere(0.0), sphere(1.0), 20000, 2);
  EXPECT_NE(a.coincidences, b.coincidences);
}

TEST(Covariance, WHNumberEvolutionReplay) {
  const auto law = HiddenVariableLaw::for_manifold(Manifold::weyl_heisenberg);
  std::vector<StabilityTransform> ts{GlobalPhase{0.4}, NumberEvolution{1.0, 0.7},
                                     NumberEvolution{3.0, 5.1}};
  CovarianceReport rep = covariance_check(law, WHPoint(Complex(0.3, -0.2)),
                                          WHPoint(Complex(1.1, 0.5)), ts, 20000, 9);
  EXPECT_TRUE(rep.pass());
  EXPECT_TRUE(rep.decisions_identical);
  EXPECT_LE(rep.max_relation_deviation, 1e-12);
}

TEST(Covariance, Su2RotationReplay) {
  const auto law = HiddenVariableLaw::for_manifold(Manifold::su2);
  std::vector<StabilityTransform> ts{CommonRotation{su2_rotation({1.0, 1.0, 0.0}, 2.0)},
                                     CommonRotation{su2_from_quaternion(0.1, 0.2, 0.3, 0.4)}};
  CovarianceReport rep =
      covariance_check(law, SpherePoint(0.4, 0.3), SpherePoint(1.3, 2.0), ts, 20000, 9);
  EXPECT_TRUE(rep.pass());
}

TEST(Covariance, GlobalPhaseGivesIdenticalRecords) {
  const auto law = HiddenVariableLaw::for_manifold(Manifold::su2);
  CovarianceReport rep = covariance_check(law, SpherePoint(0.4, 0.3), SpherePoint(1.3, 2.0),
                                          {GlobalPhase{2.0}}, 5000, 1);
  EXPECT_TRUE(rep.streams_identical);
}

TEST(Covariance, RejectsNonStabilityTransforms) {
  const auto wh_law = HiddenVariableLaw::for_manifold(Manifold::weyl_heisenberg);
  EXPECT_THROW(covariance_check(wh_law, wh(0.0), wh(1.0), {CommonDisplacement{Complex(0.5)}}, 1000, 1),
               ParameterError);
  EXPECT_THROW(apply_transform(CommonRotation{su2_rotation({0, 0, 1}, 1.0)}, wh(0.0)),
               ParameterError);
  EXPECT_THROW(apply_transform(NumberEvolution{1.0, 1.0}, sphere(1.0)), ParameterError);
}
