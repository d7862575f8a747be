#ifndef TRAPREACT_AQW_HPP
#define TRAPREACT_AQW_HPP

#include <complex>
#include <vector>

namespace trapreact {

using Complex = std::complex<double>;

namespace aqw {

// Square well of depth U (> 0) and range L (> 0), with the short-range
// boundary condition A + eta B = 0, |eta| <= 1. eta = 1 is a nonabsorbing
// wall, eta = 0 absorbs the full incoming flux.
struct WellSpec {
  double depth = 0.0;
  double range = 0.0;
  Complex eta{1.0, 0.0};

  // alpha = sqrt(2 U) L, always derived, never stored.
  double alpha() const;
  static WellSpec make(double depth, double range, Complex eta);
};

// A, B, C divided by D, for scattering at real energy E > 0:
//   psi_in  = A e^{ikr} + B e^{-ikr},  k     = sqrt(2(E+U))
//   psi_out = C e^{i kappa r} + D e^{-i kappa r},  kappa = sqrt(2E)
struct AqwCoefficients {
  Complex a_tilde{0, 0};
  Complex b_tilde{0, 0};
  Complex c_tilde{0, 0};
  double k = 0.0;
  double kappa = 0.0;
};

// Matching coefficients at real E > 0 (E + U > 0). Throws DegenerateWellError
// if the matching denominator vanishes (resonance pole at real energy).
AqwCoefficients coefficients(double E, const WellSpec& well);

// Diagnostics for the complex-kappa continuation used by the in-trap solver.
struct BranchStatus {
  bool warning = false;  // kappa far from the validated region
};

// Energy-dependent scattering length a(kappa), complex-capable:
//   a(kappa) = (i/kappa) [1 + 2 N / D]
//   N = kappa p - k q,  D = kappa p (e^{-2 i kappa L} - 1) + k q (e^{-2 i kappa L} + 1)
//   p = eta e^{ikL} - e^{-ikL},  q = eta e^{ikL} + e^{-ikL},  k = sqrt(kappa^2 + 2U)
// with principal square roots. Throws ZeroKappaError at kappa = 0 (use
// zero_energy_a); sets status->warning when Im kappa < 0 and
// |Im kappa| > |Re kappa|.
Complex energy_dependent_a(Complex kappa, const WellSpec& well,
                           BranchStatus* status = nullptr);

// Zero-energy limit:
//   a~ = L [1 + i (eta e^{i alpha} - e^{-i alpha}) / (alpha (eta e^{i alpha} + e^{-i alpha}))]
// Throws ResonancePoleError when eta e^{i alpha} + e^{-i alpha} = 0 (only
// reachable at |eta| = 1).
Complex zero_energy_a(const WellSpec& well);

// 1/a(kappa) and 1/a~ computed as single fractions, regular through the
// resonance poles of the scattering lengths themselves (they pass through
// zero there). The in-trap solvers use these to keep their residuals finite
// across well resonances.
Complex inverse_energy_dependent_a(Complex kappa, const WellSpec& well,
                                   BranchStatus* status = nullptr);
Complex inverse_zero_energy_a(const WellSpec& well);

struct ResonancePole {
  double alpha = 0.0;        // pole location in alpha = sqrt(2U) L
  double bracket_lo = 0.0;   // bracketing interval from the scan
  double bracket_hi = 0.0;
};

// Poles of the zero-energy scattering length in alpha over [alpha_lo,
// alpha_hi] at fixed eta; nonempty only for |eta| = 1, where the pole
// condition eta e^{i alpha} = -e^{-i alpha} has real solutions.
std::vector<ResonancePole> resonance_poles(Complex eta, double alpha_lo,
                                           double alpha_hi);

}  // namespace aqw
}  // namespace trapreact

#endif
