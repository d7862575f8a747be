// Finite-range absorbing well inside the harmonic trap. The "exact" method
// matches the logarithmic derivative of the deep-well inner plane waves to
// the outer trap solution r e^{-r^2/2} U((3-2E)/4, 3/2, r^2) at r = L; the
// two pseudopotential methods solve the contact eigenvalue condition with
// the zero-energy or the energy-dependent well scattering length.

#include "trapreact/trapwell.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "trapreact/croots.hpp"
#include "trapreact/errors.hpp"
#include "trapreact/specfun.hpp"

namespace trapreact::trapwell {

namespace sf = specfun;

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kSqrtPi = 1.77245385090551602729816748334;

// Gamma values at the fixed half-integer points of the b = 3/2 connection
// formulas.
const double kGammaM12 = -2.0 * kSqrtPi;      // Gamma(-1/2)
const double kGammaP12 = kSqrtPi;             // Gamma(+1/2)
const double kGammaM32 = 4.0 * kSqrtPi / 3.0; // Gamma(-3/2)
const double kGammaP32 = kSqrtPi / 2.0;       // Gamma(+3/2)

// distance from x to the nonpositive integers
double dist_to_poles(Complex x) {
  const double r = std::round(x.real());
  if (r > 0.0) return std::abs(x) < 1.0 ? std::abs(x) : 1.0;
  return std::abs(x - Complex(r, 0.0));
}

// Outer-solution building blocks, normalized to stay finite for large |a|:
//   Y = N(a) u_out-factor proportional to U(a, 3/2, z)
//   W = N(a) (u_out'/u_out numerator) so that ld_out = W / Y
// with N(a) = Gamma(a) or Gamma(a - 1/2), picked away from its poles.
struct OuterParts {
  Complex Y{0, 0};
  Complex W{0, 0};
};

OuterParts outer_parts(Complex E, double L) {
  const Complex a = (3.0 - 2.0 * E) / 4.0;
  const double z = L * L;
  const Complex zc(z, 0.0);
  const double zm12 = 1.0 / L;          // z^{-1/2}
  const double zm32 = 1.0 / (z * L);    // z^{-3/2}

  const Complex m_a = sf::kummer_m(a, {1.5, 0}, zc);
  const Complex m_a1 = sf::kummer_m(a + 1.0, {2.5, 0}, zc);
  const Complex m_ah = sf::kummer_m(a - 0.5, {0.5, 0}, zc);
  const Complex m_am = sf::kummer_m(a - 0.5, {-0.5, 0}, zc);

  OuterParts parts;
  if (dist_to_poles(a) >= dist_to_poles(a - 0.5)) {
    // N = Gamma(a): r1 = Gamma(a)/Gamma(a-1/2)
    const Complex r1 = std::exp(sf::clgamma(a) - sf::clgamma(a - 0.5));
    parts.Y = kGammaM12 * r1 * m_a + kGammaP12 * zm12 * m_ah;
    parts.W = -(kGammaM32 * a * r1 * m_a1 + kGammaP32 * zm32 * m_am);
  } else {
    // N = Gamma(a-1/2): t = Gamma(a-1/2)/Gamma(a)
    const Complex t = std::exp(sf::clgamma(a - 0.5) - sf::clgamma(a));
    parts.Y = kGammaM12 * m_a + kGammaP12 * t * zm12 * m_ah;
    parts.W = -(kGammaM32 * a * m_a1 + kGammaP32 * t * zm32 * m_am);
  }
  // ld_out = 1/L - L + 2 L (dU/dz)/U and dU/dz-part is W/Y
  return parts;
}

struct InnerParts {
  Complex p{0, 0};  // e^{-ikL} - eta e^{ikL}   (psi_in(L) / B)
  Complex q{0, 0};  // eta e^{ikL} + e^{-ikL}
  Complex k{0, 0};
};

InnerParts inner_parts(Complex E, const aqw::WellSpec& well) {
  InnerParts ip;
  ip.k = std::sqrt(2.0 * (E + well.depth));
  const Complex ekl = std::exp(kI * ip.k * well.range);
  const Complex emkl = std::exp(-kI * ip.k * well.range);
  ip.p = emkl - well.eta * ekl;
  ip.q = well.eta * ekl + emkl;
  return ip;
}

}  // namespace

Complex inner_log_derivative(Complex E, const aqw::WellSpec& well) {
  const InnerParts ip = inner_parts(E, well);
  if (std::abs(ip.p) < 1e-12 * (std::abs(ip.q) + 1.0)) {
    throw NodeAtBoundaryError("inner_log_derivative: psi_in(L) = 0");
  }
  return -kI * ip.k * ip.q / ip.p;
}

Complex outer_log_derivative(Complex E, double L) {
  if (!(L > 0.0)) throw DomainError("outer_log_derivative: L > 0 required");
  const OuterParts op = outer_parts(E, L);
  if (std::abs(op.Y) < 1e-12 * (std::abs(op.W) * L + 1.0)) {
    throw NodeAtBoundaryError("outer_log_derivative: psi_out(L) = 0");
  }
  return 1.0 / L - L + 2.0 * L * op.W / op.Y;
}

Complex matching_residual(Complex E, const aqw::WellSpec& well) {
  // F = p * [ (1/L - L) Y + 2 L W ] + i k q Y ; zero iff ld_out = ld_in,
  // finite at nodes of either side.
  const double L = well.range;
  const OuterParts op = outer_parts(E, L);
  const InnerParts ip = inner_parts(E, well);
  const Complex ld_out_num = (1.0 / L - L) * op.Y + 2.0 * L * op.W;
  return ip.p * ld_out_num + kI * ip.k * ip.q * op.Y;
}

namespace {

// Relative log-derivative mismatch at a candidate eigenvalue, switching to
// the inverse form when a node sits at the boundary.
double match_mismatch(Complex E, const aqw::WellSpec& well) {
  const double L = well.range;
  const OuterParts op = outer_parts(E, L);
  const InnerParts ip = inner_parts(E, well);
  const Complex ld_out_num = (1.0 / L - L) * op.Y + 2.0 * L * op.W;
  const Complex ld_in_num = -kI * ip.k * ip.q;
  // ld_out = ld_out_num / Y, ld_in = ld_in_num / p
  if (std::abs(op.Y) * std::abs(ip.p) >
      1e-3 * std::abs(ld_out_num) * std::abs(ld_in_num)) {
    const Complex lo = ld_out_num / op.Y;
    const Complex li = ld_in_num / ip.p;
    return std::abs(lo - li) / (1.0 + std::max(std::abs(lo), std::abs(li)));
  }
  // node at the boundary: compare inverse log-derivatives
  const Complex ilo = op.Y / ld_out_num;
  const Complex ili = ip.p / ld_in_num;
  return std::abs(ilo - ili) / (1.0 + std::max(std::abs(ilo), std::abs(ili)));
}

unsigned well_flags(Complex E, double u, double L, bool branch_warning) {
  unsigned f = 0;
  if (L * L > 0.01 * u || std::abs(E) > 0.01 * u) f |= contact::kFlagShallowWell;
  if (E.real() < -1.0) f |= contact::kFlagDivedOut;
  if (branch_warning) f |= contact::kFlagBranchWarning;
  return f;
}

// Families for the root solvers at one depth u.
croots::ComplexFn exact_family(const aqw::WellSpec& well) {
  return [well](Complex E) { return matching_residual(E, well); };
}

croots::ComplexFn edep_family(const aqw::WellSpec& well) {
  return [well](Complex E) {
    const Complex kappa = std::sqrt(2.0 * E);
    return contact::busch_lhs(E) - aqw::inverse_energy_dependent_a(kappa, well);
  };
}

croots::ComplexFn eindep_family(const aqw::WellSpec& well) {
  const Complex inv_at = aqw::inverse_zero_energy_a(well);
  return [inv_at](Complex E) { return contact::busch_lhs(E) - inv_at; };
}

// Root of busch_lhs(E) = c with Re E inside the n-th pole window, by real
// bisection at Re c followed by Newton continuation to the full complex c.
bool busch_window_root(Complex c, int n, Complex* out) {
  std::vector<double> real_roots;
  try {
    real_roots = contact::real_spectrum(c.real(), n + 1);
  } catch (const Error&) {
    return false;
  }
  Complex E(real_roots[n], 0.0);
  const int steps = 6;
  for (int s = 1; s <= steps; ++s) {
    const Complex ct(c.real(), c.imag() * s / steps);
    croots::RootOptions ro;
    ro.tol = 1e-10;
    ro.derivative = [](Complex x) { return contact::busch_lhs_derivative(x); };
    const croots::RootResult r = croots::find_root(
        [ct](Complex x) { return contact::busch_lhs(x) - ct; }, E, ro);
    if (!r.converged) return false;
    E = r.root;
  }
  *out = E;
  return true;
}

// trap-level seeds at the first grid depth: noninteracting + c_n a~
std::vector<Complex> initial_seeds(const FiniteRangeProblem& p) {
  aqw::WellSpec w = p.well;
  w.depth = p.u_grid.front();
  Complex at;
  try {
    at = aqw::zero_energy_a(w);
  } catch (const Error&) {
    at = Complex(0.0, 0.0);
  }
  std::vector<Complex> seeds;
  for (int n = 0; n < p.n_levels; ++n) {
    double dfac = 1.0;
    for (int k = 3; k <= 2 * n + 1; k += 2) dfac *= k;
    double pw = 1.0, fact = 1.0;
    for (int k = 1; k <= n; ++k) {
      pw *= 2.0;
      fact *= k;
    }
    const double cn = 2.0 / kSqrtPi * dfac / (pw * fact);
    seeds.push_back(1.5 + 2.0 * n + cn * at);
  }
  return seeds;
}

std::vector<LevelTrack> tracked_spectrum(
    const FiniteRangeProblem& p, contact::Method method,
    const std::function<croots::ComplexFn(const aqw::WellSpec&)>& make_family) {
  if (p.u_grid.size() < 2) {
    throw DomainError("trapwell: u_grid needs at least two points");
  }
  if (p.n_levels < 1) throw DomainError("trapwell: n_levels >= 1 required");

  auto family = [&](double u, Complex E) {
    aqw::WellSpec w = p.well;
    w.depth = u;
    return make_family(w)(E);
  };

  // polish the analytic seeds on the first grid point
  std::vector<Complex> seeds = initial_seeds(p);
  {
    aqw::WellSpec w0 = p.well;
    w0.depth = p.u_grid.front();
    const croots::ComplexFn f0 = make_family(w0);
    for (Complex& s : seeds) {
      croots::RootOptions ro;
      ro.tol = 1e-10;
      try {
        const croots::RootResult r = croots::find_root(f0, s, ro);
        if (r.converged) s = r.root;
      } catch (const Error&) {
      }
    }
  }

  croots::TrackOptions topts;
  topts.tol = 1e-10;
  topts.continuity_bound = 0.35;
  const auto tracks = croots::track_branch(family, seeds, p.u_grid, topts);

  std::vector<LevelTrack> out(tracks.size());
  for (std::size_t b = 0; b < tracks.size(); ++b) {
    out[b].branch = static_cast<int>(b);
    out[b].lost_at = tracks[b].lost_at;
    out[b].u = tracks[b].parameters;
    out[b].levels.reserve(tracks[b].roots.size());
    for (std::size_t j = 0; j < tracks[b].roots.size(); ++j) {
      contact::TrapLevel lvl;
      lvl.branch = static_cast<int>(b);
      lvl.energy = tracks[b].roots[j];
      lvl.method = method;
      aqw::WellSpec w = p.well;
      w.depth = tracks[b].parameters[j];
      if (method == contact::Method::aqw_exact) {
        lvl.residual = match_mismatch(lvl.energy, w);
      } else {
        lvl.residual = tracks[b].residuals[j];
      }
      bool bw = false;
      if (method == contact::Method::aqw_edep) {
        aqw::BranchStatus st;
        aqw::inverse_energy_dependent_a(std::sqrt(2.0 * lvl.energy), w, &st);
        bw = st.warning;
      }
      lvl.flags = well_flags(lvl.energy, w.depth, w.range, bw);
      out[b].levels.push_back(lvl);
    }
  }
  return out;
}

}  // namespace

std::vector<LevelTrack> exact_spectrum(const FiniteRangeProblem& p) {
  return tracked_spectrum(p, contact::Method::aqw_exact, exact_family);
}

std::vector<LevelTrack> pseudo_spectrum_eindep(const FiniteRangeProblem& p) {
  return tracked_spectrum(p, contact::Method::aqw_eindep, eindep_family);
}

std::vector<LevelTrack> pseudo_spectrum_edep(const FiniteRangeProblem& p) {
  return tracked_spectrum(p, contact::Method::aqw_edep, edep_family);
}

std::vector<MethodComparison> compare_methods(const FiniteRangeProblem& p) {
  if (p.u_grid.empty()) throw DomainError("compare_methods: empty grid");
  if (p.n_levels < 1) throw DomainError("compare_methods: n_levels >= 1");

  std::vector<MethodComparison> rows;
  rows.reserve(p.u_grid.size() * p.n_levels);
  std::vector<Complex> prev(p.n_levels, Complex(0, 0));
  std::vector<bool> have_prev(p.n_levels, false);

  for (double u : p.u_grid) {
    aqw::WellSpec w = p.well;
    w.depth = u;
    const Complex inv_at = aqw::inverse_zero_energy_a(w);
    const croots::ComplexFn f_exact = exact_family(w);
    const croots::ComplexFn f_edep = edep_family(w);

    for (int n = 0; n < p.n_levels; ++n) {
      MethodComparison row;
      row.u = u;
      row.alpha = w.alpha();
      row.branch = n;

      // exact level: previous-point seed, then the windowed eindep root
      std::vector<Complex> seeds;
      if (have_prev[n]) seeds.push_back(prev[n]);
      Complex Ewin;
      if (busch_window_root(inv_at, n, &Ewin)) seeds.push_back(Ewin);

      croots::RootOptions ro;
      ro.tol = 1e-10;
      bool got = false;
      Complex Eex;
      for (const Complex& s : seeds) {
        croots::RootResult r;
        try {
          r = croots::find_root(f_exact, s, ro);
        } catch (const Error&) {
          continue;
        }
        if (!r.converged) continue;
        if (r.root.imag() > 1e-9) continue;  // passivity guard
        const double wlo = n == 0 ? -1e30 : 2.0 * n - 0.5 - 1.2;
        const double whi = 2.0 * n + 1.5 + 1.2;
        if (r.root.real() < wlo || r.root.real() > whi) continue;
        Eex = r.root;
        got = true;
        break;
      }
      if (!got) {
        rows.push_back(row);
        continue;
      }
      prev[n] = Eex;
      have_prev[n] = true;

      row.valid = true;
      row.exact = Eex;
      row.exact_residual = match_mismatch(Eex, w);

      aqw::BranchStatus st;
      try {
        aqw::inverse_energy_dependent_a(std::sqrt(2.0 * Eex), w, &st);
      } catch (const Error&) {
      }
      row.flags = well_flags(Eex, u, w.range, st.warning);

      // nearest edep and eindep roots, seeded from the exact level
      try {
        const croots::RootResult red = croots::find_root(f_edep, Eex, ro);
        if (red.converged) {
          row.edep = red.root;
          row.edep_residual = red.residual;
        } else {
          row.valid = false;
        }
      } catch (const Error&) {
        row.valid = false;
      }
      croots::RootOptions rei;
      rei.tol = 1e-10;
      rei.derivative = [](Complex x) { return contact::busch_lhs_derivative(x); };
      try {
        const croots::RootResult rein = croots::find_root(
            [inv_at](Complex x) { return contact::busch_lhs(x) - inv_at; }, Eex,
            rei);
        if (rein.converged) {
          row.eindep = rein.root;
          row.eindep_residual = rein.residual;
        } else {
          row.valid = false;
        }
      } catch (const Error&) {
        row.valid = false;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace trapreact::trapwell
