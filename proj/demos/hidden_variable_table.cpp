// Coincidence rates of the hidden-variable model against 1 - d(g)^2.

#include <cstdio>
#include <numbers>

#include "qsurvey/qsurvey.hpp"

int main() {
  using namespace qsurvey;
  const std::int64_t n = 200000;

  std::printf("su2: Bloch angle   d(g)      observed   predicted      z\n");
  auto su2 = HiddenVariableLaw::for_manifold(Manifold::su2);
  for (double theta = 0.0; theta <= std::numbers::pi + 1e-9; theta += std::numbers::pi / 6) {
    auto rep = run_epr_experiment(su2, SpherePoint::north_pole(), SpherePoint(std::min(theta, std::numbers::pi), 0.0), n, 1);
    std::printf("     %8.4f    %.6f  %.6f   %.6f   % .2f\n", theta, rep.relation_diameter,
                rep.observed_rate, rep.predicted_rate, rep.z_score);
  }

  std::printf("\nwh:  |dλ|        d(g)      observed   predicted      z\n");
  auto wh = HiddenVariableLaw::for_manifold(Manifold::weyl_heisenberg);
  for (double x = 0.0; x <= 2.5; x += 0.25) {
    auto rep = run_epr_experiment(wh, WHPoint(Complex(0.0)), WHPoint(Complex(x)), n, 1);
    std::printf("     %8.4f    %.6f  %.6f   %.6f   % .2f\n", x, rep.relation_diameter,
                rep.observed_rate, rep.predicted_rate, rep.z_score);
  }
  return 0;
}
