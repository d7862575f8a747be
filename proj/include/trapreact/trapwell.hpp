#ifndef TRAPREACT_TRAPWELL_HPP
#define TRAPREACT_TRAPWELL_HPP

#include <complex>
#include <vector>

#include "trapreact/aqw.hpp"
#include "trapreact/contact.hpp"

namespace trapreact {

namespace trapwell {

// A well of fixed range and absorption swept over the depths in u_grid.
struct FiniteRangeProblem {
  aqw::WellSpec well;          // range and eta; depth is taken from u_grid
  int n_levels = 1;
  std::vector<double> u_grid;  // well depths (oscillator units)
};

// Logarithmic derivative of the deep-well inner solution
// psi_in = B (-eta e^{ikr} + e^{-ikr}), k = sqrt(2(E+U)), at r = L:
//   -ik (eta e^{ikL} + e^{-ikL}) / (e^{-ikL} - eta e^{ikL})
// Throws NodeAtBoundaryError when psi_in(L) = 0 (the matching machinery
// itself uses a node-free cross-product residual instead).
Complex inner_log_derivative(Complex E, const aqw::WellSpec& well);

// Logarithmic derivative of the outer trap solution
// u(r) = r e^{-r^2/2} U((3-2E)/4, 3/2, r^2) at r = L, evaluated through
// log-Gamma-ratio forms of the connection formula so it stays finite for
// arbitrarily deep levels. Throws NodeAtBoundaryError at outer nodes.
Complex outer_log_derivative(Complex E, double L);

// Matching residual whose zeros are the finite-range eigenvalues: the
// cross-product  psi_in(L) W(E) + i k q(E) Y(E)  built from node-free
// factors (it vanishes iff the log-derivatives match).
Complex matching_residual(Complex E, const aqw::WellSpec& well);

// One branch of a depth sweep; levels[i] belongs to u[i].
struct LevelTrack {
  int branch = 0;
  std::vector<double> u;
  std::vector<contact::TrapLevel> levels;
  long lost_at = -1;  // grid index where tracking failed; -1 = complete
  bool complete() const { return lost_at < 0; }
};

// The three solution methods, branch-tracked over the depth grid from seeds
// attached to the trap levels (noninteracting + zero-energy-a shift) at the
// first grid point. Tracks that hit a divergence (a level diving through a
// well resonance at |eta| = 1) are truncated and reported, never dropped.
std::vector<LevelTrack> exact_spectrum(const FiniteRangeProblem& problem);
std::vector<LevelTrack> pseudo_spectrum_eindep(const FiniteRangeProblem& problem);
std::vector<LevelTrack> pseudo_spectrum_edep(const FiniteRangeProblem& problem);

// One grid point of the three-method comparison. The exact level is solved
// per point (seeded from the previous point and from a windowed
// energy-independent root); edep/eindep are the nearest roots of their
// defining equations seeded from the exact level, which pairs the curves the
// way the overlay figures do.
struct MethodComparison {
  double u = 0.0;
  double alpha = 0.0;
  int branch = 0;
  bool valid = false;
  Complex exact{0, 0};
  Complex edep{0, 0};
  Complex eindep{0, 0};
  double exact_residual = 0.0;  // log-derivative mismatch, relative
  double edep_residual = 0.0;
  double eindep_residual = 0.0;
  unsigned flags = 0;  // contact::kFlagShallowWell / kFlagDivedOut / kFlagBranchWarning
};

std::vector<MethodComparison> compare_methods(const FiniteRangeProblem& problem);

}  // namespace trapwell
}  // namespace trapreact

#endif
