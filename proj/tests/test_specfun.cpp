#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "trapreact/errors.hpp"
#include "trapreact/specfun.hpp"

using trapreact::Complex;
using namespace trapreact::specfun;

namespace {

constexpr double kPi = 3.14159265358979323846;

double rel_err(Complex got, Complex want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

// Samples z with |Re|,|Im| <= box, at least `clearance` away from every
// nonpositive integer.
Complex sample_off_poles(std::mt19937& rng, double box, double clearance) {
  std::uniform_real_distribution<double> u(-box, box);
  for (;;) {
    const Complex z(u(rng), u(rng));
    bool ok = true;
    for (int k = 0; k >= -static_cast<int>(box) - 1; --k) {
      if (std::abs(z - Complex(k, 0)) < clearance) ok = false;
    }
    if (ok) return z;
  }
}

// Independent oracle for U(a,b,z), Re a > 0, z real > 0:
//   U = 1/Gamma(a) * int_0^inf e^{-z t} t^{a-1} (1+t)^{b-a-1} dt
// after u = t^a the integrand is bounded at the origin.
double u_integral_oracle(double a, double b, double z) {
  const double umax = std::pow(60.0 / z, a);
  const int n = 200000;  // plain Simpson, plenty for 1e-8
  const double h = umax / n;
  auto f = [&](double u) {
    if (u <= 0.0) return 1.0 / a;  // limit of the transformed integrand
    const double t = std::pow(u, 1.0 / a);
    return std::exp(-z * t) * std::pow(1.0 + t, b - a - 1.0) / a;
  };
  double s = f(0.0) + f(umax);
  for (int i = 1; i < n; ++i) {
    s += f(i * h) * ((i % 2) ? 4.0 : 2.0);
  }
  const double integral = s * h / 3.0;
  return integral / std::exp(clgamma(Complex(a, 0)).real());
}

}  // namespace

TEST_CASE("cgamma: closed forms and frozen reference values") {
  CHECK(rel_err(cgamma({5, 0}), {24, 0}) < 1e-13);
  CHECK(rel_err(cgamma({0.5, 0}), {std::sqrt(kPi), 0}) < 1e-13);
  // 50-digit arbitrary-precision reference values
  CHECK(rel_err(cgamma({0.25, 0}), {3.6256099082219083119, 0}) < 1e-13);
  CHECK(rel_err(cgamma({-0.5, 0}), {-2.0 * std::sqrt(kPi), 0}) < 1e-13);
}

TEST_CASE("cgamma: poles and overflow") {
  CHECK_THROWS_AS(cgamma({0, 0}), trapreact::PoleError);
  CHECK_THROWS_AS(cgamma({-3, 0}), trapreact::PoleError);
  CHECK_THROWS_AS(cgamma({-7.0, 1e-13}), trapreact::PoleError);
  CHECK_THROWS_AS(cgamma({200, 0}), trapreact::OverflowError);
  CHECK_NOTHROW(cgamma({-6.999, 0}));
}

TEST_CASE("clgamma: values, exp-consistency, conjugation") {
  CHECK(std::abs(clgamma({1, 0})) < 1e-14);
  CHECK(rel_err(clgamma({11, 0}), {15.104412573075515295, 0}) < 1e-14);
  CHECK(rel_err(clgamma({0.75, 0.5}),
                {-0.074102531408119960896, -0.45297189501492411775}) < 1e-13);
  CHECK(rel_err(clgamma({200, 0}), {857.93366982585743682, 0}) < 1e-13);

  std::mt19937 rng(20240811);
  for (int i = 0; i < 200; ++i) {
    const Complex z = sample_off_poles(rng, 15.0, 0.2);
    const Complex lg = clgamma(z);
    CHECK(rel_err(std::exp(lg), cgamma(z)) < 1e-12);
    const Complex lgc = clgamma(std::conj(z));
    CHECK(std::abs(lgc - std::conj(lg)) < 1e-10 * (1.0 + std::abs(lg)));
  }
}

TEST_CASE("clgamma: branch continuity along paths avoiding the cut") {
  // Circle of radius 2.7 swept from -0.97 pi to +0.97 pi: increments must be
  // small everywhere (a 2 pi i jump would show up as |delta| ~ 6.28).
  const double r = 2.7;
  const int n = 2000;
  Complex prev = clgamma(std::polar(r, -0.97 * kPi));
  for (int i = 1; i <= n; ++i) {
    const double th = -0.97 * kPi + 1.94 * kPi * i / n;
    const Complex cur = clgamma(std::polar(r, th));
    CHECK(std::abs(cur - prev) < 0.15);
    prev = cur;
  }
  // Radial path crossing Re z = 10 (the recurrence-depth transition).
  prev = clgamma({9.0, 3.0});
  for (int i = 1; i <= 400; ++i) {
    const Complex cur = clgamma({9.0 + 2.0 * i / 400.0, 3.0});
    CHECK(std::abs(cur - prev) < 0.05);
    prev = cur;
  }
}

TEST_CASE("cdigamma: values and derivative consistency") {
  CHECK(std::abs(cdigamma({1, 0}) - Complex(-0.57721566490153286061, 0)) < 1e-13);
  CHECK(rel_err(cdigamma({0.25, 0}), {-4.2274535333762654081, 0}) < 1e-13);
  CHECK(rel_err(cdigamma({0.75, 0.5}),
                {-0.60940135585464867827, 0.98185263421692994319}) < 1e-13);

  std::mt19937 rng(77);
  for (int i = 0; i < 300; ++i) {
    const Complex z = sample_off_poles(rng, 12.0, 0.2);
    // recurrence psi(z+1) - psi(z) = 1/z
    CHECK(std::abs(cdigamma(z + 1.0) - cdigamma(z) - 1.0 / z) < 1e-12 * (1.0 + std::abs(1.0 / z)));
  }
  // psi = d/dz clgamma, checked against a central difference
  for (int i = 0; i < 100; ++i) {
    const Complex z = sample_off_poles(rng, 8.0, 0.3);
    const double h = 1e-5;
    const Complex fd = (clgamma(z + h) - clgamma(z - h)) / (2.0 * h);
    CHECK(std::abs(cdigamma(z) - fd) < 1e-9 * (1.0 + std::abs(fd)));
  }
}

TEST_CASE("gamma identities: recurrence and reflection (1000 samples)") {
  std::mt19937 rng(12345);
  for (int i = 0; i < 1000; ++i) {
    const Complex z = sample_off_poles(rng, 20.0, 0.1);
    const Complex lhs = clgamma(z + 1.0);
    const Complex rhs = clgamma(z) + std::log(z);
    // compare through exp to ignore 2 pi i differences between log branches
    CHECK(std::abs(std::exp(lhs - rhs) - 1.0) < 1e-12);

    if (std::abs(z.imag()) < 15.0) {  // keep sin(pi z) representable
      // Gamma(z) Gamma(1-z) sin(pi z) / pi = 1
      bool near_pos_pole = false;  // 1-z must clear the poles too
      if (near_gamma_pole(1.0 - z, 0.1)) near_pos_pole = true;
      if (!near_pos_pole) {
        const Complex w = clgamma(z) + clgamma(1.0 - z) +
                          std::log(std::sin(kPi * z)) - std::log(Complex(kPi, 0));
        CHECK(std::abs(std::exp(w) - 1.0) < 1e-10);
      }
    }
  }
}

TEST_CASE("kummer_m: closed forms and frozen reference values") {
  CHECK(rel_err(kummer_m({0, 0}, {0.7, 0.2}, {3, 1}), {1, 0}) < 1e-14);
  CHECK(rel_err(kummer_m({1, 0}, {1, 0}, {2.5, -1.0}), std::exp(Complex(2.5, -1.0))) < 1e-13);
  CHECK(rel_err(kummer_m({1, 0}, {2, 0}, {2, 0}), {3.1945280494653251136, 0}) < 1e-12);
  // Re z < 0 goes through the Kummer transformation
  CHECK(rel_err(kummer_m({0.5, 0}, {1.5, 0}, {-4, 0}), {0.44104069538121083998, 0}) < 1e-12);
  CHECK(rel_err(kummer_m({2, 1}, {3.5, 0}, {1, -2}),
                {1.5809466296680244647, -2.3111062546930790254}) < 1e-12);
  CHECK_THROWS_AS(kummer_m({1, 0}, {0, 0}, {1, 0}), trapreact::ParameterPoleError);
  CHECK_THROWS_AS(kummer_m({1, 0}, {-2, 0}, {1, 0}), trapreact::ParameterPoleError);
}

namespace {

// Raw power series without the Kummer transformation: the independent side
// of the transformation identity (kummer_m itself reroutes Re z < 0 through
// the transformed series, so comparing it against itself would be vacuous).
// Also reports the largest term, which sets the conditioning of the
// alternating sum.
Complex kummer_series_raw(Complex a, Complex b, Complex z, double* max_term) {
  Complex sum(1, 0), term(1, 0);
  *max_term = 1.0;
  for (int n = 0; n < 700; ++n) {
    term *= (a + static_cast<double>(n)) / (b + static_cast<double>(n)) * z /
            static_cast<double>(n + 1);
    sum += term;
    *max_term = std::max(*max_term, std::abs(term));
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

TEST_CASE("kummer transformation M(a,b,z) = e^z M(b-a,b,-z)") {
  // The raw alternating series carries an unavoidable cancellation error of
  // a few ulps of its largest term; the assertion budgets for that.
  std::mt19937 rng(999);
  std::uniform_real_distribution<double> u(-3, 3), ux(-12, 0), uy(-6, 6);
  for (int i = 0; i < 400; ++i) {
    const Complex a(u(rng), u(rng));
    Complex b(u(rng), u(rng));
    if (near_gamma_pole(b, 0.1)) b += 0.25;
    const Complex z(ux(rng), uy(rng));
    const Complex lhs = kummer_m(a, b, z);  // transformed path (Re z < 0)
    double max_term = 0.0;
    const Complex rhs = kummer_series_raw(a, b, z, &max_term);
    CHECK(std::abs(lhs - rhs) < 1e-9 * (1.0 + std::abs(lhs)) + 3e-12 * max_term);
  }
}

TEST_CASE("tricomi_u: closed forms, terminating cases, frozen references") {
  CHECK(rel_err(tricomi_u({1, 0}, {2, 0}, {2, 0}), {0.5, 0}) < 1e-13);
  CHECK(rel_err(tricomi_u({0, 0}, {1.5, 0}, {0.3, 0.7}), {1, 0}) < 1e-14);
  // terminating polynomial: U(-1, 3/2, z) = z - 3/2
  CHECK(rel_err(tricomi_u({-1, 0}, {1.5, 0}, {2, 0}), {0.5, 0}) < 1e-13);
  CHECK(rel_err(tricomi_u({0.3, 0}, {1.5, 0}, {2, 0}), {0.83252987090257326468, 0}) < 1e-11);
  CHECK(rel_err(tricomi_u({0.8, -0.3}, {1.5, 0}, {2, 1}),
                {0.44967773515907714281, -0.0036527165641239182369}) < 1e-11);
  // |z| = 30 exercises the asymptotic path
  CHECK(rel_err(tricomi_u({-1.3, 0.25}, {1.5, 0}, {30, 0}),
                {52.335273826284150457, -56.405686494923113171}) < 1e-10);
  CHECK_THROWS_AS(tricomi_u({0.3, 0}, {1.5, 0}, {-2, 0}), trapreact::BranchError);
  CHECK_THROWS_AS(tricomi_u({0.3, 0}, {1.5, 0}, {0, 0}), trapreact::BranchError);
  CHECK_THROWS_AS(tricomi_u({0.3, 0.1}, {3, 0}, {2, 0}), trapreact::ParameterPoleError);
}

TEST_CASE("tricomi_u: recurrence path for large positive a at moderate z") {
  // the band where both the connection formula (e^{2 sqrt(az)} cancellation)
  // and the Poincare series degrade; values are 30-digit references
  CHECK(rel_err(tricomi_u({3, 0}, {1.5, 0}, {16, 0}), {1.6410816496588493e-4, 0}) < 1e-9);
  CHECK(rel_err(tricomi_u({11.75, 0}, {1.5, 0}, {25, 0}), {8.3363476313270514e-19, 0}) < 1e-9);
  CHECK(rel_err(tricomi_u({8, 0}, {1.5, 0}, {40, 0}), {4.2987272819143879e-14, 0}) < 1e-9);
  CHECK(rel_err(tricomi_u({12.3, 0}, {1.5, 0}, {9, 0}), {4.4578691965051913e-16, 0}) < 1e-9);
  CHECK(rel_err(tricomi_u({2.6, 0}, {1.5, 0}, {22, 0}), {2.5904807713066814e-4, 0}) < 1e-9);
  CHECK(rel_err(tricomi_u({5.5, 0}, {1.5, 0}, {14.5, 0}), {9.8239468534390395e-8, 0}) < 1e-9);
  CHECK(rel_err(tricomi_u({4.25, 0.5}, {1.5, 0}, {18, 0}),
                {-9.8912983270523794e-8, -2.2522986067838062e-6}) < 1e-9);
  CHECK(rel_err(tricomi_u({7.1, 0}, {2.5, 0}, {30, 0}), {1.0801115394112453e-11, 0}) < 1e-9);
}

TEST_CASE("tricomi_u agrees with the integral-representation oracle") {
  CHECK(std::abs(tricomi_u({0.3, 0}, {1.5, 0}, {2, 0}).real() -
                 u_integral_oracle(0.3, 1.5, 2.0)) < 1e-8);
  CHECK(std::abs(tricomi_u({1.2, 0}, {1.5, 0}, {5, 0}).real() -
                 u_integral_oracle(1.2, 1.5, 5.0)) < 1e-8);
}

TEST_CASE("M/U consistency: independent connection formula, b = 3/2") {
  // a-box and |z| bounded so the identity's own conditioning (the two
  // formulas evaluate the same cancellation in different orders) stays below
  // the 1e-9 assertion: loss ~ e^{Re z} |z|^{2Re a - 3/2} e^{|Im a|} ulps.
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> ua(-2.5, 1.5), uai(-1.5, 1.5);
  const Complex b(1.5, 0);
  auto connection = [&](Complex a, Complex z) {
    // written out independently of the implementation path under test
    const Complex g_mhalf(-2.0 * std::sqrt(kPi), 0.0);  // Gamma(-1/2)
    const Complex g_phalf(std::sqrt(kPi), 0.0);         // Gamma(+1/2)
    const Complex t1 = g_mhalf / cgamma(a - 0.5) * kummer_m(a, b, z);
    const Complex t2 =
        g_phalf / cgamma(a) * std::exp(-0.5 * std::log(z)) * kummer_m(a - 0.5, {0.5, 0}, z);
    return t1 + t2;
  };
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    // moderate |z|, right half-plane: both the production path and the
    // reference formula are accurate here
    Complex a(ua(rng), uai(rng));
    std::uniform_real_distribution<double> ur(0.05, 8.0), uth(-1.5, 1.5);
    Complex z = std::polar(ur(rng), uth(rng));
    if (near_gamma_pole(a, 0.1) || near_gamma_pole(a - 0.5, 0.1)) continue;
    const Complex got = tricomi_u(a, b, z);
    const Complex want = connection(a, z);
    CAPTURE(a.real());
    CAPTURE(a.imag());
    CAPTURE(z.real());
    CAPTURE(z.imag());
    CHECK(std::abs(got - want) < 1e-9 * (1.0 + std::abs(want)));
    ++checked;
  }
  CHECK(checked > 400);
}

TEST_CASE("tricomi_u crossover: asymptotic and series paths bridged by the integral oracle") {
  // Beyond |z| ~ 16 on the positive real axis the implementation hands over
  // from the connection formula to the asymptotic series (exactly where the
  // formula-vs-formula comparison loses meaning to e^{|z|} cancellation), so
  // the quadrature oracle arbitrates across the whole band.
  for (double a : {0.25, 0.6, 1.1}) {
    for (double z = 14.0; z <= 42.0; z += 2.0) {
      const double want = u_integral_oracle(a, 1.5, z);
      const Complex got = tricomi_u({a, 0}, {1.5, 0}, {z, 0});
      CAPTURE(a);
      CAPTURE(z);
      CHECK(std::abs(got.real() - want) < 1e-8 * (1.0 + std::abs(want)));
      CHECK(std::abs(got.imag()) < 1e-8);  // roundoff residue of complex intermediates
      if (z >= 28.0) {
        // asymptotic regime proper: smallest term is below 1e-11 here
        CHECK(std::abs(got.real() - want) < 1e-9 * (1.0 + std::abs(want)));
      }
    }
  }
}

TEST_CASE("Wronskian M U' - M' U = -Gamma(b)/Gamma(a) z^{-b} e^z") {
  // Re a and |z| bounded so the connection-formula cancellation stays below
  // the 1e-8 assertion (loss ~ e^{Re z} |z|^{2 Re a + 1/2} ulps for the U'
  // factor with b = 5/2).
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> ua(-2.0, 1.5), ur(0.3, 6.0), uth(-1.3, 1.3);
  const Complex b(1.5, 0);
  for (int i = 0; i < 300; ++i) {
    Complex a(ua(rng), ua(rng));
    if (near_gamma_pole(a, 0.15) || near_gamma_pole(a - 0.5, 0.15) ||
        near_gamma_pole(a + 1.0, 0.15) || near_gamma_pole(a - 0.5 - 1.0, 0.15)) {
      continue;
    }
    const Complex z = std::polar(ur(rng), uth(rng));
    const Complex lhs = kummer_m(a, b, z) * tricomi_u_derivative(a, b, z) -
                        kummer_m_derivative(a, b, z) * tricomi_u(a, b, z);
    const Complex rhs =
        -cgamma(b) * rgamma(a) * std::exp(-b * std::log(z)) * std::exp(z);
    CHECK(std::abs(lhs - rhs) < 1e-8 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("rgamma is zero at poles and 1/Gamma elsewhere") {
  CHECK(rgamma({-4, 0}) == Complex(0, 0));
  CHECK(rel_err(rgamma({5, 0}), {1.0 / 24.0, 0}) < 1e-13);
}
