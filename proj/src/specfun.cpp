// Complex special functions: Gamma family and the confluent hypergeometric
// pair M (Kummer) / U (Tricomi).
//
// Gamma uses the Lanczos approximation with Godfrey's coefficients for
// g = 607/128 (relative error ~1e-15 in the right half-plane), reflected for
// Re z < 1/2. log-Gamma is built from the Stirling series after an upward
// recurrence to Re z >= 10: each log in that construction has its branch cut
// inside the negative real axis, which keeps clgamma continuous everywhere
// off that axis without winding corrections.

#include "trapreact/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "trapreact/errors.hpp"

namespace trapreact::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;
constexpr double kLogMax = 709.782712893384;  // log(DBL_MAX)

constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczosC = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    3.3994649984811888699e-5,
    4.6523628927048575665e-5,   -9.8374475304879564677e-5,
    1.5808870322491248884e-4,   -2.1026444172410488319e-4,
    2.1743961811521264320e-4,   -1.6431810653676389022e-4,
    8.4418223983852743293e-5,   -2.6190838401581408670e-5,
    3.6899182659531622704e-6};

// Even Bernoulli numbers B_2, B_4, ..., B_16.
constexpr std::array<double, 8> kBernoulli2n = {
    1.0 / 6.0,   -1.0 / 30.0,        1.0 / 42.0,  -1.0 / 30.0,
    5.0 / 66.0,  -691.0 / 2730.0,    7.0 / 6.0,   -3617.0 / 510.0};

Complex lanczos_sum(Complex z) {
  Complex s(kLanczosC[0], 0.0);
  for (std::size_t k = 1; k < kLanczosC.size(); ++k) {
    s += kLanczosC[k] / (z + static_cast<double>(k - 1));
  }
  return s;
}

[[noreturn]] void throw_pole(const char* fn, Complex z) {
  std::ostringstream os;
  os << fn << ": argument (" << z.real() << ", " << z.imag()
     << ") is a nonpositive-integer pole of Gamma";
  throw PoleError(os.str());
}

// Stirling series for Re z >= 10.
Complex stirling_lgamma(Complex z) {
  const Complex lz = std::log(z);
  Complex s = (z - 0.5) * lz - z + kLogSqrt2Pi;
  const Complex z2 = z * z;
  Complex zp = z;
  for (std::size_t n = 0; n < kBernoulli2n.size(); ++n) {
    const double tn = 2.0 * static_cast<double>(n + 1);
    s += kBernoulli2n[n] / (tn * (tn - 1.0) * zp);
    zp *= z2;
  }
  return s;
}

}  // namespace

bool near_gamma_pole(Complex z, double tol) {
  if (std::abs(z.imag()) > tol) return false;
  const double r = std::round(z.real());
  return r <= 0.0 && std::abs(z.real() - r) <= tol;
}

Complex cgamma(Complex z) {
  if (near_gamma_pole(z)) throw_pole("cgamma", z);
  if (z.real() >= 0.5) {
    const Complex t = z + (kLanczosG - 0.5);
    const Complex expo = (z - 0.5) * std::log(t) - t;
    if (expo.real() > kLogMax - 5.0) {
      throw OverflowError("cgamma: result exceeds double range; use clgamma");
    }
    return std::sqrt(2.0 * kPi) * std::exp(expo) * lanczos_sum(z);
  }
  // Reflection: Gamma(z) = pi / (sin(pi z) Gamma(1-z)).
  const Complex s = std::sin(kPi * z);
  const Complex g = cgamma(1.0 - z);
  const Complex r = kPi / (s * g);
  if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) {
    // sin(pi z) overflowed: the true value underflows to zero.
    if (std::abs(z.imag()) > 100.0) return Complex(0.0, 0.0);
    throw OverflowError("cgamma: reflection overflow");
  }
  return r;
}

Complex clgamma(Complex z) {
  if (near_gamma_pole(z)) throw_pole("clgamma", z);
  int n = 0;
  if (z.real() < 10.0) {
    n = static_cast<int>(std::ceil(10.0 - z.real()));
  }
  Complex lg = stirling_lgamma(z + static_cast<double>(n));
  for (int j = 0; j < n; ++j) {
    lg -= std::log(z + static_cast<double>(j));
  }
  return lg;
}

Complex cdigamma(Complex z) {
  if (near_gamma_pole(z)) throw_pole("cdigamma", z);
  Complex acc(0.0, 0.0);
  Complex w = z;
  while (w.real() < 12.0) {
    acc -= 1.0 / w;
    w += 1.0;
  }
  Complex s = std::log(w) - 0.5 / w;
  const Complex w2 = w * w;
  Complex wp = w2;
  for (std::size_t n = 0; n < kBernoulli2n.size() - 1; ++n) {
    const double tn = 2.0 * static_cast<double>(n + 1);
    s -= kBernoulli2n[n] / (tn * wp);
    wp *= w2;
  }
  return s + acc;
}

Complex rgamma(Complex z) {
  if (near_gamma_pole(z, 1e-8)) {
    // leading order about the pole at -n: 1/Gamma(z) = (-1)^n n! (z+n) + ...
    const double n = -std::round(z.real());
    const Complex eps = z + n;
    const double sign = (static_cast<long>(n) % 2 == 0) ? 1.0 : -1.0;
    return sign * std::tgamma(n + 1.0) * eps;
  }
  const Complex lg = clgamma(z);
  if (-lg.real() > kLogMax - 5.0) {
    throw OverflowError("rgamma: 1/Gamma overflow");
  }
  return std::exp(-lg);
}

namespace {

Complex kummer_series(Complex a, Complex b, Complex z) {
  Complex sum(1.0, 0.0);
  Complex comp(0.0, 0.0);  // Kahan compensation
  Complex term(1.0, 0.0);
  int small_count = 0;
  for (int n = 0; n < 500; ++n) {
    term *= (a + static_cast<double>(n)) / (b + static_cast<double>(n)) * z /
            static_cast<double>(n + 1);
    const Complex y = term - comp;
    const Complex t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (std::abs(term) <= 1e-16 * std::abs(sum)) {
      if (++small_count >= 2) return sum;
    } else {
      small_count = 0;
    }
  }
  throw ConvergenceError("kummer_m: series did not converge in 500 terms");
}

}  // namespace

Complex kummer_m(Complex a, Complex b, Complex z) {
  if (near_gamma_pole(b)) {
    throw ParameterPoleError("kummer_m: b is a nonpositive integer");
  }
  if (z.real() < 0.0) {
    return std::exp(z) * kummer_series(b - a, b, -z);
  }
  return kummer_series(a, b, z);
}

Complex kummer_m_derivative(Complex a, Complex b, Complex z) {
  return a / b * kummer_m(a + 1.0, b + 1.0, z);
}

namespace {

bool near_integer(Complex z, double tol = 1e-12) {
  return std::abs(z.imag()) <= tol &&
         std::abs(z.real() - std::round(z.real())) <= tol;
}

struct AsymptoticResult {
  Complex value;
  double rel_err;
};

// Index after which (x)_n vanishes, or -1 if x is not a nonpositive integer.
int pochhammer_terminates_at(Complex x) {
  if (!near_gamma_pole(x)) return -1;
  return static_cast<int>(-std::round(x.real())) + 1;
}

// Poincare expansion U ~ z^{-a} sum_n (a)_n (a-b+1)_n / (n! (-z)^n).
// If a or a-b+1 is a nonpositive integer the sum terminates and is exact for
// any z; otherwise it is summed to its smallest term, whose size estimates
// the error.
AsymptoticResult u_asymptotic(Complex a, Complex b, Complex z) {
  int nterm = -1;
  for (Complex x : {a, a - b + 1.0}) {
    const int t = pochhammer_terminates_at(x);
    if (t >= 0 && (nterm < 0 || t < nterm)) nterm = t;
  }
  Complex sum(1.0, 0.0);
  Complex term(1.0, 0.0);
  if (nterm >= 0) {
    for (int n = 0; n + 1 < nterm; ++n) {
      term *= (a + static_cast<double>(n)) *
              (a - b + 1.0 + static_cast<double>(n)) /
              (static_cast<double>(n + 1) * (-z));
      sum += term;
    }
    return {std::exp(-a * std::log(z)) * sum, 0.0};
  }
  double best = std::numeric_limits<double>::max();
  Complex best_sum = sum;
  const int nmax = static_cast<int>(2.0 * std::abs(z)) + 30;
  for (int n = 0; n < nmax; ++n) {
    term *= (a + static_cast<double>(n)) * (a - b + 1.0 + static_cast<double>(n)) /
            (static_cast<double>(n + 1) * (-z));
    const double at = std::abs(term);
    if (at < best) {
      best = at;
      sum += term;
      best_sum = sum;
      if (at <= 1e-16 * std::abs(sum)) break;
    } else {
      break;  // divergent tail reached
    }
  }
  const double denom = std::abs(best_sum);
  const double rel = denom > 0.0 ? best / denom : 1.0;
  return {std::exp(-a * std::log(z)) * best_sum, rel};
}

Complex u_connection(Complex a, Complex b, Complex z) {
  const Complex t1 = cgamma(1.0 - b) * rgamma(a - b + 1.0) * kummer_m(a, b, z);
  const Complex t2 = cgamma(b - 1.0) * rgamma(a) *
                     std::exp((1.0 - b) * std::log(z)) *
                     kummer_m(a - b + 1.0, 2.0 - b, z);
  return t1 + t2;
}

// Relative cancellation loss of the connection formula. Three sources: the
// power series of each M loses e^{|w|-Re w} ulps to alternation (w is the
// series argument after the Kummer transformation); for Re z > 0 the two
// connection terms grow like e^z z^{a-b} while U itself is ~ z^{-a}; and for
// large positive Re a the terms grow like e^{2 sqrt(az)} against
// U ~ e^{-2 sqrt(az)}.
double connection_loss(Complex a, Complex b, Complex z) {
  const double series = std::abs(z) - std::abs(z.real());
  const double combine = std::max(z.real(), 0.0);
  const double bessel =
      4.0 * std::sqrt(std::max(a.real(), 0.0) * std::abs(z));
  const double p = std::max(2.0 * a.real() - b.real(), 0.0);
  return 1e-16 *
         std::exp(std::min(series + std::max(combine, bessel), 690.0)) *
         std::pow(std::max(std::abs(z), 1.0), p);
}

Complex u_select(Complex a, Complex b, Complex z, double* err_out);

// Backward (Miller-type) recurrence in a: U(a-1,b,z) = -[(b-2a-z) U(a,b,z)
// + a(a-b+1) U(a+1,b,z)]. U is the recessive solution as a -> +infinity, so
// downward recursion from trial values is stable; the result is normalized
// against a directly computable small-a value.
Complex u_miller(Complex a, Complex b, Complex z, int shift) {
  const Complex a0 = a - static_cast<double>(shift);
  const int extra = 40 + static_cast<int>(std::abs(z) / 4.0);
  const int top = shift + extra;

  Complex up(0.0, 0.0);   // index top+1
  Complex uc(1e-280, 0.0);  // index top
  Complex at_shift(0.0, 0.0);
  bool have_shift = false;
  for (int k = top; k >= 1; --k) {
    const Complex ak = a0 + static_cast<double>(k);
    Complex um = -((b - 2.0 * ak - z) * uc + ak * (ak - b + 1.0) * up);
    if (k - 1 == shift) {
      at_shift = um;
      have_shift = true;
    }
    up = uc;
    uc = um;
    const double mag = std::abs(uc);
    if (mag > 1e220) {
      uc /= 1e220;
      up /= 1e220;
      if (have_shift) at_shift /= 1e220;
    }
  }
  double norm_err = 0.0;
  const Complex u0 = u_select(a0, b, z, &norm_err);
  return at_shift * (u0 / uc);
}

// Chooses among the asymptotic series (|arg z| <= pi/2, the smallest-term
// bound region), the connection formula, and the backward recurrence, by
// estimated error; reports the estimate through err_out when non-null.
Complex u_select(Complex a, Complex b, Complex z, double* err_out) {
  const double conn_err = connection_loss(a, b, z);
  double asym_err = std::numeric_limits<double>::max();
  AsymptoticResult ar{Complex(0, 0), asym_err};
  const bool asym_valid = std::abs(z) >= 14.0 && z.real() >= 0.0;
  if (asym_valid) {
    ar = u_asymptotic(a, b, z);
    asym_err = ar.rel_err;
  }
  // Recurrence only helps when the troublesome sqrt(az) growth is present
  // and a can be shifted down to the certified small-a band.
  const bool miller_applicable =
      a.real() >= 1.3 && z.real() >= 0.0 && std::abs(z) >= 4.0 &&
      !near_integer(b);
  double miller_err = std::numeric_limits<double>::max();
  int shift = 0;
  if (miller_applicable) {
    shift = static_cast<int>(std::ceil(a.real() - 0.8));
    const Complex a0 = a - static_cast<double>(shift);
    miller_err = 10.0 * std::min(connection_loss(a0, b, z),
                                 asym_valid ? u_asymptotic(a0, b, z).rel_err
                                            : std::numeric_limits<double>::max());
    miller_err = std::max(miller_err, 1e-13);
  }

  const double best = std::min({conn_err, asym_err, miller_err});
  if (err_out) *err_out = best;
  if (best > 1e-6) {
    throw ConvergenceError(
        "tricomi_u: no evaluation path reaches 1e-6 for this argument");
  }
  if (miller_err <= conn_err && miller_err <= asym_err) {
    return u_miller(a, b, z, shift);
  }
  if (asym_err <= conn_err) {
    return ar.value;
  }
  return u_connection(a, b, z);
}

}  // namespace

Complex tricomi_u(Complex a, Complex b, Complex z) {
  if (z == Complex(0.0, 0.0)) {
    throw BranchError("tricomi_u: z = 0");
  }
  if (z.imag() == 0.0 && z.real() < 0.0) {
    throw BranchError("tricomi_u: z on the negative real axis (branch cut)");
  }
  // When a or a-b+1 is a nonpositive integer the Poincare expansion
  // terminates and is an exact closed form for any z (covers U(a,a+1,z) =
  // z^{-a} and the polynomial cases, including integer b).
  if (near_gamma_pole(a) || near_gamma_pole(a - b + 1.0)) {
    return u_asymptotic(a, b, z).value;
  }
  if (near_integer(b)) {
    throw ParameterPoleError("tricomi_u: integer b (logarithmic case) not supported");
  }
  return u_select(a, b, z, nullptr);
}

Complex tricomi_u_derivative(Complex a, Complex b, Complex z) {
  return -a * tricomi_u(a + 1.0, b + 1.0, z);
}

}  // namespace trapreact::specfun
