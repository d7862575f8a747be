#ifndef TRAPREACT_SPECFUN_HPP
#define TRAPREACT_SPECFUN_HPP

#include <complex>

namespace trapreact {

using Complex = std::complex<double>;

namespace specfun {

// Euler Gamma function of a complex argument.
// Lanczos rational approximation (g = 607/128, 15 terms) for Re z >= 1/2,
// reflection formula below. Throws PoleError at z = 0, -1, -2, ... and
// OverflowError when |Gamma(z)| exceeds the double range (use clgamma then).
Complex cgamma(Complex z);

// log Gamma, branch-continuous on the plane cut along the negative real axis
// (coincides with the canonical branch that is real on the positive reals).
// Computed by upward recurrence into the Stirling region; every log involved
// has its cut inside the negative real z axis, so no winding bookkeeping is
// needed. exp(clgamma(z)) == cgamma(z) wherever the latter is representable.
Complex clgamma(Complex z);

// digamma psi(z) = d/dz clgamma(z). Upward recurrence to Re z >= 12, then the
// Bernoulli asymptotic series.
Complex cdigamma(Complex z);

// 1/Gamma(z): entire, zero at the poles of Gamma. Never throws PoleError.
Complex rgamma(Complex z);

// Kummer confluent hypergeometric M(a,b,z) by direct power series with
// compensated summation; the Kummer transformation M(a,b,z) = e^z M(b-a,b,-z)
// is applied for Re z < 0 to avoid alternating-series cancellation.
// Throws ParameterPoleError when b is a nonpositive integer and
// ConvergenceError if 500 terms do not reach the 1e-16 term/sum cutoff.
Complex kummer_m(Complex a, Complex b, Complex z);

// dM/dz = (a/b) M(a+1, b+1, z).
Complex kummer_m_derivative(Complex a, Complex b, Complex z);

// Tricomi confluent hypergeometric U(a,b,z), principal branch (cut on the
// negative real z axis). Two-M connection formula at moderate |z|, divergent
// asymptotic series at large |z|; the switch is based on the estimated
// cancellation loss of the connection formula versus the smallest asymptotic
// term. Integer b is rejected with ParameterPoleError (the logarithmic case
// is not implemented; all in-library uses have b = 3/2 or 5/2).
Complex tricomi_u(Complex a, Complex b, Complex z);

// dU/dz = -a U(a+1, b+1, z).
Complex tricomi_u_derivative(Complex a, Complex b, Complex z);

// True if z is within tol of a nonpositive integer (a Gamma pole).
bool near_gamma_pole(Complex z, double tol = 1e-12);

}  // namespace specfun
}  // namespace trapreact

#endif
