#ifndef TRAPREACT_CROOTS_HPP
#define TRAPREACT_CROOTS_HPP

#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace trapreact {

using Complex = std::complex<double>;

namespace croots {

using ComplexFn = std::function<Complex(Complex)>;

struct RootResult {
  Complex root{0.0, 0.0};
  double residual = 0.0;  // |f(root)|
  int iterations = 0;
  bool converged = false;
};

struct RootOptions {
  double tol = 1e-10;          // on |f|
  int max_iterations = 200;
  ComplexFn derivative;        // analytic df/dz when available; numeric otherwise
  std::optional<Complex> deflate;  // divide f by (z - deflate): sibling-root guard
  double step_cap = 0.5;       // max step, scaled by (1 + |z|)
};

// Newton iteration (analytic or central-difference derivative) with a Muller
// fallback after three consecutive non-improving steps; Muller handles the
// pole-riddled residuals well. Convergence requires |f| <= tol and the last
// step <= 10*tol*(1+|z|); the scale factor keeps the step criterion usable
// for roots of large magnitude (deep molecular levels). Exceptions thrown by
// f are rethrown as DomainError.
RootResult find_root(const ComplexFn& f, Complex seed, const RootOptions& opts = {});

struct BranchTrack {
  int branch_index = 0;
  std::vector<double> parameters;
  std::vector<Complex> roots;
  std::vector<double> residuals;
  std::vector<double> gaps;            // |roots[i+1] - roots[i]|
  std::vector<std::size_t> collisions; // grid indices where another track coincides
  // First grid index that could not be reached (the track is truncated
  // there); -1 when the whole grid was covered. Lost branches are reported,
  // never silently dropped.
  long lost_at = -1;

  bool complete() const { return lost_at < 0; }
};

struct TrackOptions {
  double tol = 1e-10;
  double continuity_bound = 0.2;   // max |dE| per grid step before substepping
  int max_halvings = 6;            // substep down to base_step / 2^6
  double collision_tol = 1e-8;
  // family derivative d f / dE at fixed parameter, when analytic
  std::function<Complex(double, Complex)> derivative;
};

// Continue each seed root along a strictly monotone parameter grid with a
// linear predictor and find_root corrector. Sibling branches at the same
// parameter are deflated away so close tracks cannot silently merge; if two
// still land within collision_tol the index is recorded on both tracks.
std::vector<BranchTrack> track_branch(
    const std::function<Complex(double, Complex)>& family,
    const std::vector<Complex>& seeds, const std::vector<double>& grid,
    const TrackOptions& opts = {});

}  // namespace croots
}  // namespace trapreact

#endif
