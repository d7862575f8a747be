// Absorbing square quantum well: matching coefficients, the energy-dependent
// complex scattering length a(kappa), and its zero-energy limit.

#include "trapreact/aqw.hpp"

#include <cmath>
#include <sstream>

#include "trapreact/errors.hpp"

namespace trapreact::aqw {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = 3.14159265358979323846264338327950288;

}  // namespace

double WellSpec::alpha() const { return std::sqrt(2.0 * depth) * range; }

WellSpec WellSpec::make(double depth, double range, Complex eta) {
  if (!(depth > 0.0)) throw DomainError("WellSpec: depth must be positive");
  if (!(range > 0.0)) throw DomainError("WellSpec: range must be positive");
  if (std::abs(eta) > 1.0 + 1e-12) {
    throw DomainError("WellSpec: |eta| <= 1 required");
  }
  return {depth, range, eta};
}

AqwCoefficients coefficients(double E, const WellSpec& well) {
  if (!(E > 0.0)) throw DomainError("coefficients: E > 0 required");
  if (!(E + well.depth > 0.0)) {
    throw DomainError("coefficients: E + U > 0 required");
  }
  const double L = well.range;
  const Complex eta = well.eta;
  const double k = std::sqrt(2.0 * (E + well.depth));
  const double kap = std::sqrt(2.0 * E);
  const Complex p = eta * std::exp(kI * k * L) - std::exp(-kI * k * L);
  const Complex q = eta * std::exp(kI * k * L) + std::exp(-kI * k * L);
  const Complex den = kap * p - k * q;
  if (std::abs(den) < 1e-14 * (kap + k)) {
    std::ostringstream os;
    os << "coefficients: matching denominator vanishes at E = " << E
       << " (resonance pole)";
    throw DegenerateWellError(os.str());
  }
  AqwCoefficients c;
  c.k = k;
  c.kappa = kap;
  c.a_tilde = 2.0 * kap * eta * std::exp(-kI * kap * L) / den;
  c.b_tilde = -2.0 * kap * std::exp(-kI * kap * L) / den;
  c.c_tilde = std::exp(-2.0 * kI * kap * L) * (kap * p + k * q) / den;
  return c;
}

Complex energy_dependent_a(Complex kappa, const WellSpec& well,
                           BranchStatus* status) {
  if (kappa == Complex(0.0, 0.0)) {
    throw ZeroKappaError("energy_dependent_a: kappa = 0; use zero_energy_a");
  }
  if (status) {
    status->warning = kappa.imag() < 0.0 &&
                      std::abs(kappa.imag()) > std::abs(kappa.real());
  }
  const double L = well.range;
  const Complex eta = well.eta;
  const Complex k = std::sqrt(kappa * kappa + 2.0 * well.depth);
  const Complex p = eta * std::exp(kI * k * L) - std::exp(-kI * k * L);
  const Complex q = eta * std::exp(kI * k * L) + std::exp(-kI * k * L);
  const Complex e2 = std::exp(-2.0 * kI * kappa * L);
  const Complex num = kappa * p - k * q;
  const Complex den = kappa * p * (e2 - 1.0) + k * q * (e2 + 1.0);
  return (kI / kappa) * (1.0 + 2.0 * num / den);
}

Complex zero_energy_a(const WellSpec& well) {
  const double al = well.alpha();
  if (!(al > 0.0)) throw DomainError("zero_energy_a: alpha > 0 required");
  const Complex eta = well.eta;
  const Complex ep = std::exp(kI * al);
  const Complex em = std::exp(-kI * al);
  const Complex den = eta * ep + em;
  if (std::abs(den) < 1e-12) {
    std::ostringstream os;
    os << "zero_energy_a: resonance pole (eta e^{i alpha} + e^{-i alpha} = 0) "
          "at alpha = "
       << al;
    throw ResonancePoleError(os.str());
  }
  return well.range * (1.0 + kI * (eta * ep - em) / (al * den));
}

Complex inverse_energy_dependent_a(Complex kappa, const WellSpec& well,
                                   BranchStatus* status) {
  if (kappa == Complex(0.0, 0.0)) {
    throw ZeroKappaError("inverse_energy_dependent_a: kappa = 0");
  }
  if (status) {
    status->warning = kappa.imag() < 0.0 &&
                      std::abs(kappa.imag()) > std::abs(kappa.real());
  }
  const double L = well.range;
  const Complex eta = well.eta;
  const Complex k = std::sqrt(kappa * kappa + 2.0 * well.depth);
  const Complex p = eta * std::exp(kI * k * L) - std::exp(-kI * k * L);
  const Complex q = eta * std::exp(kI * k * L) + std::exp(-kI * k * L);
  const Complex e2 = std::exp(-2.0 * kI * kappa * L);
  const Complex num = kappa * p - k * q;
  const Complex den = kappa * p * (e2 - 1.0) + k * q * (e2 + 1.0);
  // a = (i/kappa)(den + 2 num)/den  =>  1/a = -i kappa den / (den + 2 num)
  return -kI * kappa * den / (den + 2.0 * num);
}

Complex inverse_zero_energy_a(const WellSpec& well) {
  const double al = well.alpha();
  if (!(al > 0.0)) throw DomainError("inverse_zero_energy_a: alpha > 0 required");
  const Complex eta = well.eta;
  const Complex ep = std::exp(kI * al);
  const Complex em = std::exp(-kI * al);
  const Complex den = eta * ep + em;
  const Complex num = eta * ep - em;
  // a~ = L (al den + i num)/(al den)  =>  1/a~ = al den / (L (al den + i num))
  return al * den / (well.range * (al * den + kI * num));
}

std::vector<ResonancePole> resonance_poles(Complex eta, double alpha_lo,
                                           double alpha_hi) {
  std::vector<ResonancePole> out;
  if (std::abs(std::abs(eta) - 1.0) > 1e-12) return out;  // no real poles inside the disk
  // |eta| = 1: eta e^{i a} = -e^{-i a}  <=>  Phi + 2a = pi (mod 2pi)
  auto g = [&](double a) {
    return std::abs(eta * std::exp(kI * a) + std::exp(-kI * a));
  };
  const double phi = std::arg(eta);
  // analytic pole ladder, then bracket each by scanning g
  double a0 = (kPi - phi) / 2.0;
  while (a0 - kPi >= alpha_lo) a0 -= kPi;
  for (double a = a0; a <= alpha_hi; a += kPi) {
    if (a < alpha_lo) continue;
    const double h = 1e-4;
    ResonancePole p;
    p.alpha = a;
    p.bracket_lo = a - h;
    p.bracket_hi = a + h;
    // confirm the bracket actually straddles the dip
    if (g(p.bracket_lo) > g(a) && g(p.bracket_hi) > g(a)) {
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace trapreact::aqw
