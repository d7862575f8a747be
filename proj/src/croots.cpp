#include "trapreact/croots.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "trapreact/errors.hpp"

namespace trapreact::croots {

namespace {

Complex eval_guarded(const ComplexFn& f, Complex z) {
  try {
    return f(z);
  } catch (const std::exception& e) {
    std::ostringstream os;
    os << "find_root: target threw at z = (" << z.real() << ", " << z.imag()
       << "): " << e.what();
    throw DomainError(os.str());
  }
}

}  // namespace

RootResult find_root(const ComplexFn& f, Complex seed, const RootOptions& opts) {
  auto fd = [&](Complex z) -> Complex {
    Complex v = eval_guarded(f, z);
    if (opts.deflate) v /= (z - *opts.deflate);
    return v;
  };

  RootResult res;
  Complex z = seed;
  Complex fz = fd(z);
  double best = std::abs(fz);
  int bad_newton = 0;
  bool muller = false;

  // history for Muller: (z, f) triples
  Complex h_z[3] = {z, z, z};
  Complex h_f[3] = {fz, fz, fz};
  int hist = 1;

  double last_step = std::numeric_limits<double>::max();
  for (int it = 0; it < opts.max_iterations; ++it) {
    res.iterations = it;
    const double afz = std::abs(fz);
    if (afz <= opts.tol && last_step <= 10.0 * opts.tol * (1.0 + std::abs(z))) {
      res.root = z;
      res.residual = afz;
      res.converged = true;
      return res;
    }

    Complex step;
    bool step_ok = false;
    if (!muller) {
      Complex dfz;
      if (opts.derivative && !opts.deflate) {
        dfz = opts.derivative(z);
      } else if (opts.derivative && opts.deflate) {
        // (f/(z-a))' = f'/(z-a) - f/(z-a)^2 ; fz already holds f/(z-a)
        const Complex d = z - *opts.deflate;
        dfz = opts.derivative(z) / d - fz / d;
      } else {
        const double h = 1e-7 * (1.0 + std::abs(z));
        dfz = (fd(z + h) - fd(z - h)) / (2.0 * h);
      }
      if (std::abs(dfz) > 0.0 && std::isfinite(std::abs(dfz))) {
        step = fz / dfz;
        step_ok = true;
        // Steep residuals (|f'| ~ 1/|a|^2 near the eigenvalue-condition
        // poles) quantize |f| in units of |f'| ulp(z), which can exceed tol;
        // a Newton step below the representable resolution of z means the
        // root is converged to machine precision.
        if (std::abs(step) <= 1e-14 * (1.0 + std::abs(z))) {
          z -= step;
          fz = fd(z);
          res.root = z;
          res.residual = std::abs(fz);
          res.converged = true;
          res.iterations = it + 1;
          return res;
        }
      }
    }
    if (muller || !step_ok) {
      // Muller: quadratic through the last three iterates
      if (hist >= 3) {
        const Complex q = (h_z[2] - h_z[1]) / (h_z[1] - h_z[0]);
        const Complex A = q * h_f[2] - q * (1.0 + q) * h_f[1] + q * q * h_f[0];
        const Complex B = (2.0 * q + 1.0) * h_f[2] - (1.0 + q) * (1.0 + q) * h_f[1] +
                          q * q * h_f[0];
        const Complex C = (1.0 + q) * h_f[2];
        Complex disc = std::sqrt(B * B - 4.0 * A * C);
        Complex den1 = B + disc, den2 = B - disc;
        const Complex den = std::abs(den1) > std::abs(den2) ? den1 : den2;
        if (std::abs(den) > 0.0) {
          step = (h_z[2] - h_z[1]) * (2.0 * C / den);
          step_ok = true;
        }
      }
      if (!step_ok) {
        // no usable model yet: probe sideways
        step = Complex(-1e-4 * (1.0 + std::abs(z)), 1e-4 * (1.0 + std::abs(z)));
        step_ok = true;
      }
    }

    const double cap = opts.step_cap * (1.0 + std::abs(z));
    if (std::abs(step) > cap) step *= cap / std::abs(step);
    z -= step;
    last_step = std::abs(step);
    fz = fd(z);

    // maintain rolling history for the Muller model
    if (hist < 3) {
      h_z[hist] = z;
      h_f[hist] = fz;
      ++hist;
    } else {
      h_z[0] = h_z[1];
      h_f[0] = h_f[1];
      h_z[1] = h_z[2];
      h_f[1] = h_f[2];
      h_z[2] = z;
      h_f[2] = fz;
    }

    if (std::abs(fz) < best) {
      best = std::abs(fz);
      bad_newton = 0;
    } else if (!muller) {
      if (++bad_newton >= 3) muller = true;  // poles nearby: switch over
    }
  }

  res.root = z;
  res.residual = std::abs(fz);
  res.converged = res.residual <= opts.tol &&
                  last_step <= 10.0 * opts.tol * (1.0 + std::abs(z));
  return res;
}

namespace {

// One corrector call at (param, seed) with deflation against established
// sibling roots at the same parameter. Falls back to an undeflated solve if
// the deflated one fails (the collision scan then flags any coincidence).
RootResult correct(const std::function<Complex(double, Complex)>& family,
                   double param, Complex seed,
                   const std::vector<Complex>& siblings, const TrackOptions& opts) {
  // a seed sitting on a sibling makes the deflated function singular there
  for (const Complex& s : siblings) {
    if (std::abs(seed - s) < 10.0 * opts.collision_tol) {
      seed += Complex(1e-3, 1e-3) * (1.0 + std::abs(seed));
      break;
    }
  }
  ComplexFn f = [&](Complex E) {
    Complex v = family(param, E);
    for (const Complex& s : siblings) v /= (E - s);
    return v;
  };
  RootOptions ro;
  ro.tol = opts.tol;
  RootResult r;
  try {
    r = find_root(f, seed, ro);
  } catch (const DomainError&) {
    r.converged = false;
  }
  if (r.converged) {
    r.residual = std::abs(family(param, r.root));
    if (r.residual > opts.tol) {
      // deflated residual met the tolerance but the raw one did not
      // (siblings very close); polish without deflation
      try {
        RootResult p = find_root([&](Complex E) { return family(param, E); },
                                 r.root, ro);
        if (p.converged) return p;
      } catch (const DomainError&) {
      }
      r.converged = false;
    }
    return r;
  }
  // undeflated fallback
  try {
    return find_root([&](Complex E) { return family(param, E); }, seed, ro);
  } catch (const DomainError&) {
    RootResult bad;
    bad.converged = false;
    return bad;
  }
}

}  // namespace

std::vector<BranchTrack> track_branch(
    const std::function<Complex(double, Complex)>& family,
    const std::vector<Complex>& seeds, const std::vector<double>& grid,
    const TrackOptions& opts) {
  if (grid.size() < 2) {
    throw DomainError("track_branch: grid needs at least two points");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if ((grid[i] - grid[i - 1]) * (grid[1] - grid[0]) <= 0.0) {
      throw DomainError("track_branch: grid must be strictly monotone");
    }
  }

  const std::size_t nb = seeds.size();
  std::vector<BranchTrack> tracks(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    tracks[b].branch_index = static_cast<int>(b);
  }

  std::vector<Complex> cur(seeds);
  std::vector<Complex> prev(seeds);
  std::vector<bool> alive(nb, true);

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double param = grid[i];
    const double base_step = i == 0 ? 0.0 : grid[i] - grid[i - 1];
    std::vector<Complex> established;

    for (std::size_t b = 0; b < nb; ++b) {
      if (!alive[b]) continue;
      Complex seed = cur[b];
      if (i >= 2 && tracks[b].roots.size() >= 2) {
        seed = 2.0 * cur[b] - prev[b];  // linear predictor
      }

      RootResult r = correct(family, param, seed, established, opts);
      bool accepted = r.converged && (i == 0 || std::abs(r.root - cur[b]) <=
                                                    opts.continuity_bound *
                                                        (1.0 + std::abs(cur[b])));
      if (!accepted && i > 0) {
        // substep: walk from grid[i-1] to grid[i] with halved steps
        double from = grid[i - 1];
        Complex e0 = cur[b], e1 = prev[b];
        int halvings = 0;
        double step = base_step / 2.0;
        ++halvings;
        double at = from;
        bool failed = false;
        const double min_step =
            std::abs(base_step) / std::pow(2.0, opts.max_halvings);
        while (std::abs(param - at) > 1e-14 * std::abs(base_step) + 0.0) {
          if (std::abs(step) > std::abs(param - at)) step = param - at;
          const double target = at + step;
          Complex s = e0;
          if (std::abs(at - from) > 0.0) s = 2.0 * e0 - e1;
          RootResult rr = correct(family, target, s, established, opts);
          const bool ok = rr.converged &&
                          std::abs(rr.root - e0) <=
                              opts.continuity_bound * (1.0 + std::abs(e0));
          if (ok) {
            e1 = e0;
            e0 = rr.root;
            at = target;
            r = rr;
            step = std::min(std::abs(step) * 2.0, std::abs(base_step)) *
                   (base_step < 0 ? -1.0 : 1.0);
          } else {
            step /= 2.0;
            if (std::abs(step) < min_step) {
              failed = true;
              break;
            }
          }
        }
        accepted = !failed;
      }

      if (!accepted) {
        alive[b] = false;
        tracks[b].lost_at = static_cast<long>(i);
        continue;
      }

      prev[b] = (i == 0) ? r.root : cur[b];
      cur[b] = r.root;
      tracks[b].parameters.push_back(param);
      tracks[b].roots.push_back(r.root);
      tracks[b].residuals.push_back(r.residual);
      if (tracks[b].roots.size() >= 2) {
        const auto& rs = tracks[b].roots;
        tracks[b].gaps.push_back(std::abs(rs[rs.size() - 1] - rs[rs.size() - 2]));
      }
      established.push_back(r.root);
    }

    // collision scan at this grid point
    for (std::size_t b = 0; b < nb; ++b) {
      if (!alive[b] || tracks[b].parameters.empty()) continue;
      if (tracks[b].parameters.back() != param) continue;
      for (std::size_t c = b + 1; c < nb; ++c) {
        if (!alive[c] || tracks[c].parameters.empty()) continue;
        if (tracks[c].parameters.back() != param) continue;
        if (std::abs(tracks[b].roots.back() - tracks[c].roots.back()) <
            opts.collision_tol) {
          tracks[b].collisions.push_back(tracks[b].roots.size() - 1);
          tracks[c].collisions.push_back(tracks[c].roots.size() - 1);
        }
      }
    }
  }
  return tracks;
}

}  // namespace trapreact::croots
