// Builds the one-mode model L1 = sqrt3 a, L2 = a^+, H = 2 a^+a + (a^+^2 + a^2)/2
// and prints its invariant state and both spectral gaps.

#include <iostream>

#include "gaussgap/gaussgap.hpp"

int main() {
  using namespace gaussgap;

  const GklsModel model = one_dim_model(3.0, 1.0, 2.0, 1.0);
  const DriftDiffusion dd = build_drift_diffusion(model);
  const StationaryData st = solve_stationary(dd, model.zeta);

  std::cout << "R(Z) =\n" << dd.z2d << "\n\nS =\n" << st.s2d << "\n\n";
  std::cout << "symplectic eigenvalue sigma = " << st.sigma(0) << "\n";
  std::cout << "GNS gap g = " << gns_gap(dd, st).g << "\n";
  std::cout << "KMS gap   = " << kms_gap(dd, st).g_breve << "\n";

  const auto cf = one_dim_closed_forms(3.0, 1.0, 2.0, 1.0);
  std::cout << "closed forms: g = " << cf.g << ", KMS = " << cf.g_breve << "\n";

  // Decay of W(1) - <W(1)> in the GNS embedding against the e^{-2gt} bound.
  CVec z(1);
  z << 1.0;
  const WeylCombo combo{{cplx(1.0, 0.0), z}};
  const double g = gns_gap(dd, st).g;
  for (double t : {0.0, 0.5, 1.0, 2.0}) {
    const double n = norm_decay(st, dd, combo, t, Embedding::GNS);
    const double bound = std::exp(-2.0 * g * t) * norm_decay(st, dd, combo, 0.0, Embedding::GNS);
    std::cout << "t = " << t << "  ||T_t x||^2 = " << n << "  bound = " << bound << "\n";
  }
  return 0;
}
