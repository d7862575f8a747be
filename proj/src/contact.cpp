// Contact-pseudopotential spectra in an isotropic harmonic trap with a
// complex scattering length. The eigenvalue condition is
//   2 Gamma(-E/2 + 3/4) / Gamma(-E/2 + 1/4) = 1/a
// whose left-hand side is strictly decreasing in real E between consecutive
// numerator poles (E = 2n + 3/2), so real spectra come from interval
// bisection; complex spectra are continued in the imaginary part of a.

#include "trapreact/contact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "trapreact/errors.hpp"
#include "trapreact/specfun.hpp"

namespace trapreact::contact {

namespace sf = specfun;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// sign of Gamma(x) for real x off the poles
double gamma_sign(double x) {
  if (x > 0.0) return 1.0;
  const long k = static_cast<long>(std::ceil(-x));
  return (k % 2 == 0) ? 1.0 : -1.0;
}

// Perturbative slope of branch n about the noninteracting level 3/2 + 2n:
// E ~ 3/2 + 2n + c_n a with c_n = (2/sqrt(pi)) (2n+1)!! / (2^n n!).
double level_slope(int n) {
  double dfac = 1.0;
  for (int k = 3; k <= 2 * n + 1; k += 2) dfac *= k;
  double pw = 1.0, fact = 1.0;
  for (int k = 1; k <= n; ++k) {
    pw *= 2.0;
    fact *= k;
  }
  return 2.0 / std::sqrt(kPi) * dfac / (pw * fact);
}

}  // namespace

ComplexScatteringLength ComplexScatteringLength::from_value(Complex a) {
  if (a.imag() > 0.0) {
    throw DomainError("ComplexScatteringLength: Im a must be <= 0 (a = alpha - i beta, beta >= 0)");
  }
  return {a.real(), -a.imag()};
}

Complex busch_lhs(Complex E) {
  const Complex v = -E / 2.0 + 0.75;  // numerator argument
  const Complex w = -E / 2.0 + 0.25;  // denominator argument
  if (sf::near_gamma_pole(v)) {
    std::ostringstream os;
    os << "busch_lhs: pole at E = (" << E.real() << ", " << E.imag() << ")";
    throw PoleError(os.str());
  }
  if (sf::near_gamma_pole(w)) return {0.0, 0.0};
  if (std::abs(w) >= 100.0 && (w.real() > 0.0 || std::abs(w.imag()) > 50.0)) {
    // Gamma(w+1/2)/Gamma(w) = sqrt(w) (1 - 1/(8w) + ...): the direct
    // log-Gamma difference would lose |lgamma| ulps to cancellation out here
    // (deep molecular roots have |w| up to ~1e7)
    const Complex iw = 1.0 / w;
    const Complex s =
        1.0 + iw * (-1.0 / 8.0 +
                    iw * (1.0 / 128.0 +
                          iw * (5.0 / 1024.0 +
                                iw * (-21.0 / 32768.0 +
                                      iw * (-399.0 / 262144.0 +
                                            iw * (869.0 / 4194304.0))))));
    return 2.0 * std::sqrt(w) * s;
  }
  return 2.0 * std::exp(sf::clgamma(v) - sf::clgamma(w));
}

Complex busch_lhs_derivative(Complex E) {
  const Complex v = -E / 2.0 + 0.75;
  const Complex w = -E / 2.0 + 0.25;
  if (sf::near_gamma_pole(v)) {
    throw PoleError("busch_lhs_derivative: numerator pole");
  }
  if (sf::near_gamma_pole(w)) {
    // busch = 2 Gamma(v) / Gamma(w) with 1/Gamma(w) = (-1)^n n! (w+n) + ...
    const double n = -std::round(w.real());
    const double sign = (static_cast<long>(n) % 2 == 0) ? 1.0 : -1.0;
    return 2.0 * sf::cgamma(v) * sign * std::tgamma(n + 1.0) * (-0.5);
  }
  return busch_lhs(E) * (-0.5) * (sf::cdigamma(v) - sf::cdigamma(w));
}

Complex busch_inverse(Complex E) {
  const Complex v = -E / 2.0 + 0.75;
  const Complex w = -E / 2.0 + 0.25;
  if (sf::near_gamma_pole(w)) {
    std::ostringstream os;
    os << "busch_inverse: unitarity pole at E = (" << E.real() << ", "
       << E.imag() << ")";
    throw PoleError(os.str());
  }
  if (sf::near_gamma_pole(v)) return {0.0, 0.0};
  if (std::abs(w) >= 100.0 && (w.real() > 0.0 || std::abs(w.imag()) > 50.0)) {
    const Complex iw = 1.0 / w;
    const Complex s =
        1.0 + iw * (-1.0 / 8.0 +
                    iw * (1.0 / 128.0 +
                          iw * (5.0 / 1024.0 +
                                iw * (-21.0 / 32768.0 +
                                      iw * (-399.0 / 262144.0 +
                                            iw * (869.0 / 4194304.0))))));
    return 0.5 * std::exp(-0.5 * std::log(w)) / s;
  }
  return 0.5 * std::exp(sf::clgamma(w) - sf::clgamma(v));
}

Complex busch_inverse_derivative(Complex E) {
  const Complex v = -E / 2.0 + 0.75;
  const Complex w = -E / 2.0 + 0.25;
  if (sf::near_gamma_pole(w)) {
    throw PoleError("busch_inverse_derivative: unitarity pole");
  }
  if (sf::near_gamma_pole(v)) {
    const double n = -std::round(v.real());
    const double sign = (static_cast<long>(n) % 2 == 0) ? 1.0 : -1.0;
    return 0.5 * sf::cgamma(w) * sign * std::tgamma(n + 1.0) * (-0.5);
  }
  return busch_inverse(E) * (-0.5) * (sf::cdigamma(w) - sf::cdigamma(v));
}

double busch_lhs_real(double E) {
  const double v = -E / 2.0 + 0.75;
  const double w = -E / 2.0 + 0.25;
  if (sf::near_gamma_pole({v, 0})) {
    throw PoleError("busch_lhs_real: numerator pole");
  }
  if (sf::near_gamma_pole({w, 0})) return 0.0;
  const double lg = std::lgamma(v) - std::lgamma(w);
  return 2.0 * gamma_sign(v) * gamma_sign(w) * std::exp(lg);
}

namespace {

// Bisection for the unique root of busch_lhs_real = c in (lo, hi), both
// endpoints strictly inside one pole interval (busch is strictly decreasing
// there).
double bisect_interval(double c, double lo, double hi) {
  double flo = busch_lhs_real(lo) - c;
  double fhi = busch_lhs_real(hi) - c;
  if (flo * fhi > 0.0) {
    throw DomainError("real_spectrum: no sign change in bracket");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = busch_lhs_real(mid) - c;
    if (flo * fm <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
    if (hi - lo < 1e-15 * (1.0 + std::abs(lo))) break;
  }
  return 0.5 * (lo + hi);
}

// Newton polish of a (possibly complex) root of busch_lhs(E) = c.
croots::RootResult polish(Complex c, Complex seed, double tol) {
  croots::RootOptions o;
  o.tol = tol;
  o.derivative = [](Complex E) { return busch_lhs_derivative(E); };
  return croots::find_root([c](Complex E) { return busch_lhs(E) - c; }, seed, o);
}

// Continue a root of busch_lhs(E) = c(t) from t = 0 to t = 1 with adaptive
// stepping; throws LostBranchError when halving bottoms out.
Complex continue_root(Complex E0, const std::function<Complex(double)>& c_of_t,
                      double tol) {
  double t = 0.0;
  double step = 0.125;
  Complex E = E0;
  Complex Eprev = E0;
  double last_step = 0.0;
  while (t < 1.0) {
    step = std::min(step, 1.0 - t);
    const double tt = t + step;
    Complex seed = E;
    if (last_step > 0.0) seed = E + (E - Eprev) * (step / last_step);
    const croots::RootResult r = polish(c_of_t(tt), seed, tol);
    const bool ok = r.converged &&
                    std::abs(r.root - E) <= 0.75 * (1.0 + std::abs(E));
    if (ok) {
      Eprev = E;
      E = r.root;
      last_step = step;
      t = tt;
      step = std::min(step * 2.0, 0.125);
    } else {
      step /= 2.0;
      if (step < 1e-7) {
        std::ostringstream os;
        os << "contact: lost branch during continuation at t = " << t;
        throw LostBranchError(os.str());
      }
    }
  }
  return E;
}

}  // namespace

std::vector<double> real_spectrum(double c, int n_levels) {
  if (n_levels < 1) throw DomainError("real_spectrum: n_levels >= 1 required");
  std::vector<double> roots;
  roots.reserve(n_levels);

  if (c == 0.0) {  // unitarity: zeros of busch_lhs
    for (int n = 0; n < n_levels; ++n) roots.push_back(0.5 + 2.0 * n);
    return roots;
  }

  // first interval (-inf, 3/2): busch decreases from +inf through 0 (at 1/2)
  // to -inf
  const double eps = 1e-9;
  if (c > 0.0) {
    double lo = -0.5 * c * c - 2.0;  // below the molecular asymptote -c^2/2
    while (busch_lhs_real(lo) - c < 0.0) lo = 2.0 * lo - 2.0;
    roots.push_back(bisect_interval(c, lo, 0.5 - eps));
  } else {
    roots.push_back(bisect_interval(c, 0.5 + eps, 1.5 - eps));
  }
  for (int k = 1; static_cast<int>(roots.size()) < n_levels; ++k) {
    const double lo = 2.0 * k - 0.5 + eps;
    const double hi = 2.0 * k + 1.5 - eps;
    // skip across the interior zero at 2k + 1/2 cleanly
    roots.push_back(c > 0.0 ? bisect_interval(c, lo, 2.0 * k + 0.5)
                            : bisect_interval(c, 2.0 * k + 0.5, hi));
  }
  return roots;
}

std::vector<TrapLevel> spectrum(const ComplexScatteringLength& a, int n_levels,
                                double tol) {
  if (n_levels < 1) throw DomainError("spectrum: n_levels >= 1 required");
  std::vector<TrapLevel> out;
  out.reserve(n_levels);

  if (a.is_zero()) {
    // noninteracting levels, returned directly
    for (int n = 0; n < n_levels; ++n) {
      out.push_back({n, Complex(1.5 + 2.0 * n, 0.0), 0.0, Method::contact, 0});
    }
    return out;
  }

  const Complex c_target = 1.0 / a.value();

  if (a.alpha == 0.0) {
    // no real starting spectrum at alpha = 0: branches attach to the
    // noninteracting levels, entered at a small beta foothold
    const double beta0 = std::min(1e-3, a.beta);
    for (int n = 0; n < n_levels; ++n) {
      const Complex a_start(0.0, -beta0);
      const Complex seed = 1.5 + 2.0 * n + level_slope(n) * a_start;
      croots::RootResult r = polish(1.0 / a_start, seed, tol);
      if (!r.converged) throw LostBranchError("spectrum: foothold solve failed");
      const Complex E = continue_root(
          r.root,
          [&](double t) {
            const double b = beta0 + (a.beta - beta0) * t;
            return 1.0 / Complex(0.0, -b);
          },
          tol);
      out.push_back({n, E, std::abs(busch_lhs(E) - c_target), Method::contact, 0});
    }
    return out;
  }

  const std::vector<double> start = real_spectrum(1.0 / a.alpha, n_levels);
  for (int n = 0; n < n_levels; ++n) {
    Complex E(start[n], 0.0);
    if (a.beta > 0.0) {
      E = continue_root(
          E,
          [&](double t) { return 1.0 / Complex(a.alpha, -a.beta * t); }, tol);
    } else {
      const croots::RootResult r = polish(c_target, E, tol);
      if (r.converged) E = r.root;
    }
    out.push_back({n, E, std::abs(busch_lhs(E) - c_target), Method::contact, 0});
  }
  return out;
}

std::vector<TrapLevel> spectrum_from_inverse(Complex inv_a, int n_levels,
                                             double tol) {
  // Im(1/a) >= 0 is the physical (beta >= 0) half-plane; Im < 0 is permitted
  // here and yields the conjugate (gain) spectrum, used by symmetry checks.
  if (n_levels < 1) throw DomainError("spectrum_from_inverse: n_levels >= 1 required");
  std::vector<TrapLevel> out;
  out.reserve(n_levels);
  const std::vector<double> start = real_spectrum(inv_a.real(), n_levels);
  for (int n = 0; n < n_levels; ++n) {
    Complex E(start[n], 0.0);
    if (inv_a.imag() != 0.0) {
      E = continue_root(
          E, [&](double t) { return Complex(inv_a.real(), inv_a.imag() * t); },
          tol);
    } else {
      const croots::RootResult r = polish(inv_a, E, tol);
      if (r.converged) E = r.root;
    }
    out.push_back({n, E, std::abs(busch_lhs(E) - inv_a), Method::contact, 0});
  }
  return out;
}

std::vector<croots::BranchTrack> sweep_re_a(double beta,
                                            const std::vector<double>& re_a_grid,
                                            int n_levels) {
  if (re_a_grid.size() < 2) {
    throw DomainError("sweep_re_a: grid needs at least two points");
  }
  const ComplexScatteringLength a0{re_a_grid.front(), beta};
  const std::vector<TrapLevel> s = spectrum(a0, n_levels);
  std::vector<Complex> seeds;
  seeds.reserve(s.size());
  for (const TrapLevel& l : s) seeds.push_back(l.energy);

  croots::TrackOptions topts;
  topts.derivative = [](double, Complex E) { return busch_inverse_derivative(E); };
  topts.continuity_bound = 0.2;
  // inverse form: regular when the grid passes through a = 0
  return croots::track_branch(
      [beta](double re_a, Complex E) {
        return busch_inverse(E) - Complex(re_a, -beta);
      },
      seeds, re_a_grid, topts);
}

namespace {

struct GapPoint {
  double gap = 0.0;
  double re_a = 0.0;
  Complex e_lo{0, 0};
  Complex e_hi{0, 0};
};

GapPoint gap_metric(double beta, int branch_lo, int branch_hi,
                    const CrossingOptions& opts) {
  std::vector<double> grid;
  for (double x = opts.re_a_min; x <= opts.re_a_max + 1e-12;
       x += opts.coarse_step) {
    grid.push_back(x);
  }
  const int nb = std::max(branch_lo, branch_hi) + 1;
  const std::vector<TrapLevel> s =
      spectrum({grid.front(), beta}, nb);
  std::vector<Complex> seeds = {s[branch_lo].energy, s[branch_hi].energy};

  auto family = [beta](double re_a, Complex E) {
    return busch_lhs(E) - 1.0 / Complex(re_a, -beta);
  };
  croots::TrackOptions topts;
  topts.derivative = [](double, Complex E) { return busch_lhs_derivative(E); };
  auto tracks = croots::track_branch(family, seeds, grid, topts);
  if (!tracks[0].complete() || !tracks[1].complete()) {
    throw LostBranchError("find_avoided_crossing: branch lost during sweep");
  }

  GapPoint best;
  std::size_t jmin = 0;
  best.gap = std::numeric_limits<double>::max();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double d = std::abs(tracks[1].roots[j] - tracks[0].roots[j]);
    if (d < best.gap) {
      best = {d, grid[j], tracks[0].roots[j], tracks[1].roots[j]};
      jmin = j;
    }
  }
  // local refinement around the coarse minimum
  if (jmin > 0 && jmin + 1 < grid.size()) {
    double lo = grid[jmin - 1], hi = grid[jmin + 1];
    std::vector<Complex> sub_seeds = {tracks[0].roots[jmin - 1],
                                      tracks[1].roots[jmin - 1]};
    for (int round = 0; round < 4; ++round) {
      std::vector<double> sub;
      const int m = 20;
      for (int i = 0; i <= m; ++i) sub.push_back(lo + (hi - lo) * i / m);
      auto tr = croots::track_branch(family, sub_seeds, sub, topts);
      if (!tr[0].complete() || !tr[1].complete()) break;
      std::size_t k = 0;
      double gmin = std::numeric_limits<double>::max();
      for (std::size_t j = 0; j < sub.size(); ++j) {
        const double d = std::abs(tr[1].roots[j] - tr[0].roots[j]);
        if (d < gmin) {
          gmin = d;
          k = j;
        }
      }
      best = {gmin, sub[k], tr[0].roots[k], tr[1].roots[k]};
      const std::size_t klo = k > 0 ? k - 1 : 0;
      sub_seeds = {tr[0].roots[klo], tr[1].roots[klo]};
      lo = sub[klo];
      hi = sub[std::min(k + 1, sub.size() - 1)];
    }
  }
  return best;
}

}  // namespace

CrossingResult find_avoided_crossing(int branch_lo, int branch_hi,
                                     double beta_min, double beta_max,
                                     const CrossingOptions& opts) {
  if (!(beta_min >= 0.0 && beta_max <= 1.0 && beta_min < beta_max)) {
    throw DomainError("find_avoided_crossing: beta range must sit inside [0, 1]");
  }
  auto G = [&](double beta) { return gap_metric(beta, branch_lo, branch_hi, opts); };

  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = beta_min, hi = beta_max;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  GapPoint g1 = G(x1), g2 = G(x2);
  while (hi - lo > opts.beta_tol) {
    if (g1.gap < g2.gap) {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = hi - phi * (hi - lo);
      g1 = G(x1);
    } else {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = lo + phi * (hi - lo);
      g2 = G(x2);
    }
  }
  const double beta_star = 0.5 * (lo + hi);
  // monotone G over the range pins the minimum to an endpoint
  if (beta_star - beta_min < 2.0 * opts.beta_tol ||
      beta_max - beta_star < 2.0 * opts.beta_tol) {
    throw NoCrossingError("find_avoided_crossing: gap metric is monotone over the beta range");
  }
  const GapPoint g = G(beta_star);
  return {beta_star, g.gap, g.re_a, g.e_lo, g.e_hi};
}

namespace {

Complex psi_raw(Complex v, double r) {
  const double z = r * r;
  return std::exp(-z / 2.0) * sf::tricomi_u(v, {1.5, 0.0}, {z, 0.0});
}

// Adaptive Simpson on [lo, hi] for a complex integrand.
Complex adaptive_simpson(const std::function<Complex(double)>& f, double lo,
                         double hi, Complex flo, Complex fmid, Complex fhi,
                         double tol, int depth) {
  const double m = 0.5 * (lo + hi);
  const double lm = 0.5 * (lo + m);
  const double rm = 0.5 * (m + hi);
  const Complex flm = f(lm);
  const Complex frm = f(rm);
  const Complex whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  const Complex left = (m - lo) / 6.0 * (flo + 4.0 * flm + fmid);
  const Complex right = (hi - m) / 6.0 * (fmid + 4.0 * frm + fhi);
  const Complex split = left + right;
  if (depth <= 0 || std::abs(split - whole) < 15.0 * tol) {
    return split + (split - whole) / 15.0;
  }
  return adaptive_simpson(f, lo, m, flo, flm, fmid, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, hi, fmid, frm, fhi, tol / 2.0, depth - 1);
}

}  // namespace

std::vector<Complex> wavefunction(Complex E, Complex inv_a,
                                  std::span<const double> r_grid) {
  if (std::abs(busch_lhs(E) - inv_a) > 1e-8) {
    throw NonEigenvalueError("wavefunction: E does not solve busch_lhs(E) = 1/a");
  }
  for (double r : r_grid) {
    if (!(r > 0.0)) throw DomainError("wavefunction: r_grid must be positive");
  }
  const Complex v = -E / 2.0 + 0.75;

  // c-product normalization: integral psi^2 4 pi r^2 dr = 1 (no conjugate)
  auto integrand = [&](double r) -> Complex {
    const Complex p = psi_raw(v, std::max(r, 1e-9));
    return 4.0 * kPi * p * p * r * r;
  };
  Complex I(0.0, 0.0);
  const double panel = 0.25;
  int tiny_run = 0;
  for (double lo = 0.0; lo < 9.5; lo += panel) {
    const double hi = lo + panel;
    const Complex c = adaptive_simpson(integrand, lo, hi, integrand(lo),
                                       integrand(0.5 * (lo + hi)),
                                       integrand(hi), 1e-13, 24);
    I += c;
    if (std::abs(c) < 1e-16 * std::max(1.0, std::abs(I))) {
      if (++tiny_run >= 3) break;  // deep in the Gaussian/bound-state tail
    } else {
      tiny_run = 0;
    }
  }
  Complex A = 1.0 / std::sqrt(I);
  // phase convention: r*psi(r) points into Re > 0 as r -> 0+
  const Complex probe = A * psi_raw(v, 1e-3) * 1e-3;
  if (probe.real() < 0.0) A = -A;

  std::vector<Complex> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) out.push_back(A * psi_raw(v, r));
  return out;
}

RateConstants rate_constants(const ComplexScatteringLength& a, double k, int g,
                             double mu, double hbar) {
  if (k < 0.0) throw DomainError("rate_constants: k >= 0 required");
  if (g != 1 && g != 2) throw DomainError("rate_constants: g must be 1 or 2");
  const double mod2 = a.alpha * a.alpha + a.beta * a.beta;
  const double f = 1.0 / (1.0 + k * k * mod2 + 2.0 * k * a.beta);
  const double h = 2.0 * kPi * hbar;  // rates are printed with Planck's h
  RateConstants rc;
  rc.g = g;
  rc.wavenumber = k;
  rc.k_elastic = 2.0 * g * h * k / mu * mod2 * f;
  rc.k_loss = 2.0 * g * h / mu * a.beta * f;
  return rc;
}

}  // namespace trapreact::contact
