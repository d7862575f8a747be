#ifndef TRAPREACT_CONTACT_HPP
#define TRAPREACT_CONTACT_HPP

#include <complex>
#include <span>
#include <vector>

#include "trapreact/croots.hpp"

namespace trapreact {

using Complex = std::complex<double>;

namespace contact {

// a = alpha - i*beta in oscillator units; beta >= 0 encodes two-body loss.
struct ComplexScatteringLength {
  double alpha = 0.0;
  double beta = 0.0;

  Complex value() const { return {alpha, -beta}; }
  bool is_zero() const { return alpha == 0.0 && beta == 0.0; }
  // Validates Im a <= 0.
  static ComplexScatteringLength from_value(Complex a);
};

enum class Method { contact, aqw_exact, aqw_edep, aqw_eindep };

// Level condition flags.
inline constexpr unsigned kFlagShallowWell = 1u << 0;
inline constexpr unsigned kFlagBranchWarning = 1u << 1;
inline constexpr unsigned kFlagDivedOut = 1u << 2;

struct TrapLevel {
  int branch = 0;
  Complex energy{0.0, 0.0};  // units of hbar*omega
  double residual = 0.0;
  Method method = Method::contact;
  unsigned flags = 0;
};

// Left-hand side of the eigenvalue condition:
//   2 Gamma(-E/2 + 3/4) / Gamma(-E/2 + 1/4)
// evaluated through log-Gamma differences. Denominator Gamma poles
// (E = 2n + 1/2) are exact zeros of the ratio and are returned as such;
// numerator poles (E = 2n + 3/2) throw PoleError.
Complex busch_lhs(Complex E);

// Analytic dE-derivative of busch_lhs (digamma difference), with the correct
// finite limit at the denominator poles.
Complex busch_lhs_derivative(Complex E);

// Real-axis evaluation (exactly real, used by the interval bracketing).
double busch_lhs_real(double E);

// 1/busch_lhs: Gamma(-E/2+1/4) / (2 Gamma(-E/2+3/4)). Zero at the
// noninteracting levels E = 2n + 3/2, PoleError at the unitarity points
// E = 2n + 1/2. The eigenvalue condition in this form, busch_inverse(E) = a,
// stays regular through a = 0, which the Re-a sweeps need.
Complex busch_inverse(Complex E);
Complex busch_inverse_derivative(Complex E);

// Lowest n_levels real roots of busch_lhs(E) = c, c real, ordered by energy.
// For c > 0 the first root lies below 1/2 and dives like -c^2/2 for large c.
std::vector<double> real_spectrum(double c, int n_levels);

// Complex spectrum, branch n labeled by continuation in beta upward from the
// real spectrum at (alpha, 0), ordered by energy there. a = 0 returns the
// noninteracting levels 3/2 + 2n directly. Each level satisfies
// |busch_lhs(E) - 1/a| <= tol.
std::vector<TrapLevel> spectrum(const ComplexScatteringLength& a, int n_levels,
                                double tol = 1e-10);

// Same solver parameterized by the inverse scattering length c = 1/a
// (Im c >= 0); c = 0 is the unitarity limit with levels 1/2 + 2n. Branch n is
// labeled by continuation in Im c from the real spectrum at Re c.
std::vector<TrapLevel> spectrum_from_inverse(Complex inv_a, int n_levels,
                                             double tol = 1e-10);

// Re-a sweep at fixed beta: one track per branch, seeded from spectrum() at
// the first grid point.
std::vector<croots::BranchTrack> sweep_re_a(double beta,
                                            const std::vector<double>& re_a_grid,
                                            int n_levels);

struct CrossingResult {
  double beta_star = 0.0;   // Im-a value of closest approach
  double gap = 0.0;         // min over Re a of |E_hi - E_lo| there
  double re_a_at_min = 0.0;
  Complex e_lo{0, 0};
  Complex e_hi{0, 0};
};

struct CrossingOptions {
  double re_a_min = -5.0;
  double re_a_max = 5.0;
  double coarse_step = 0.05;
  double beta_tol = 2e-4;
};

// Minimizes the gap metric G(beta) = min over Re a of |E_hi - E_lo| (full
// complex distance) over beta in [beta_min, beta_max] by golden section.
// Throws NoCrossingError when G is monotone over the range (minimum pinned
// to an endpoint).
CrossingResult find_avoided_crossing(int branch_lo, int branch_hi,
                                     double beta_min, double beta_max,
                                     const CrossingOptions& opts = {});

// Radial eigenfunction psi(r) = A e^{-r^2/2} Gamma(-E/2+3/4)
// U(-E/2+3/4, 3/2, r^2), normalized by the c-product
// integral psi(r)^2 4 pi r^2 dr = 1 (no conjugation) with the sign fixed so
// that r*psi(r) points into the positive real direction at r -> 0+.
// Throws NonEigenvalueError unless |busch_lhs(E) - inv_a| <= 1e-8.
std::vector<Complex> wavefunction(Complex E, Complex inv_a,
                                  std::span<const double> r_grid);

struct RateConstants {
  double k_elastic = 0.0;  // volume/time
  double k_loss = 0.0;     // volume/time
  int g = 1;
  double wavenumber = 0.0;
};

// Threshold rate constants
//   f(k)    = 1 / (1 + k^2 |a|^2 + 2 k beta)
//   K_el    = 2 g (h k / mu) |a|^2 f(k)
//   K_loss  = 2 g (h / mu) beta f(k)
// with h = 2 pi hbar. Defaults are oscillator units (hbar = mu = 1); pass SI
// values of hbar and mu (with a, k in SI) for SI rates.
RateConstants rate_constants(const ComplexScatteringLength& a, double k, int g,
                             double mu = 1.0, double hbar = 1.0);

}  // namespace contact
}  // namespace trapreact

#endif
