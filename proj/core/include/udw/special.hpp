#pragma once

#include <complex>

namespace udw {

// Error function of a complex argument,
//   erf(z) = (2/sqrt(pi)) \int_0^z e^{-t^2} dt.
//
// Supported domain: |z| <= 50 with a result representable in double.
// Since |erf(x+iy)| grows like e^{y^2-x^2}, arguments with
// y^2 - x^2 > ~705 have no finite double representation; those and
// |z| > 50 throw std::domain_error rather than returning inf/nan.
std::complex<double> erf_complex(std::complex<double> z);

// Complementary error function for x >= 0, evaluated through a scaled
// complement rather than the literal 1 - erf(x), so no cancellation for
// large x. Throws std::domain_error for x < 0.
double erfc_real(double x);

// Scaled complementary error function e^{z^2} erfc(z) on the closed right
// half-plane Re(z) >= 0. Bounded there, which is what makes the closed-form
// kernels overflow-free at large distances.
std::complex<double> erfcx_complex(std::complex<double> z);

namespace special_detail {

using cld = std::complex<long double>;

// Maclaurin sum, compensated accumulation. Accurate wherever the terms do
// not cancel catastrophically: |z| < 3.5, or any radius near the imaginary
// axis (Re z < 2.5) where all terms share a sign pattern.
cld erf_series(cld z);

// Laplace continued fraction for sqrt(pi) e^{z^2} erfc(z), evaluated with
// the modified Lentz scheme. Requires Re(z) >= 2.5 and moderate/large |z|;
// the fraction diverges on the imaginary axis.
cld erfcx_cf(cld z);

// Large-argument expansion of e^{z^2} erfc(z), valid for |arg z| < 3pi/4.
// Truncation error ~ e^{-|z|^2}; used for |z| >= 7.5.
cld erfcx_asymptotic(cld z);

// Branch dispatch for Re(z) >= 0.
cld erfcx_right(cld z);

} // namespace special_detail

} // namespace udw
