// Builds the spin-1/2 Bell state from the sphere quadrature, transports it to
// the singlet, and shows the twisted vacuum approaching perfect correlation.

#include <cstdio>

#include "qsurvey/qsurvey.hpp"

int main() {
  using namespace qsurvey;

  PairState b = bell_state(SphereQuadrature(4, 6));
  std::printf("spin-1/2 Bell state (ket-bra form):\n");
  for (int i = 0; i < 2; ++i) {
    std::printf("  % .12f % .12f\n", b.matrix()(i, 0).real(), b.matrix()(i, 1).real());
  }
  PairState s = singlet_via_tau(b, TauMap::time_reversal_spin_half());
  std::printf("singlet coefficients |00>,|01>,|10>,|11>: % .6f % .6f % .6f % .6f\n",
              s.matrix()(0, 0).real(), s.matrix()(0, 1).real(), s.matrix()(1, 0).real(),
              s.matrix()(1, 1).real());

  // Conditional probability density of mode 1 at λ given mode 2 at μ = 1.
  const Complex mu = 1.0;
  std::printf("\n   r     n_max   p(λ=μ|μ)   p(λ=0|μ)\n");
  for (double r : {0.0, 0.5, 0.8, 0.9}) {
    int n_max = 64;
    try {
      (void)BellStateWH(r, FockCutoff(n_max));
    } catch (const CutoffError& e) {
      n_max = e.minimal_n_max();
    }
    BellStateWH bell(r, FockCutoff(n_max));
    std::printf("%6.3f  %5d  %9.6f  %9.6f\n", r, n_max, conditional_probability(bell, mu, mu),
                conditional_probability(bell, Complex(0.0), mu));
  }
  return 0;
}
