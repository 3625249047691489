#include "udw/special.hpp"

#include <cmath>
#include <stdexcept>

namespace udw {
namespace special_detail {

namespace {
constexpr long double kSqrtPi = 1.77245385090551602729816748334114518L;
constexpr long double kTwoOverSqrtPi = 1.12837916709551257389615890312154517L;
constexpr long double kTiny = 1e-4000L;
} // namespace

cld erf_series(cld z) {
    cld term = z;
    cld sum{0.0L, 0.0L};
    cld comp{0.0L, 0.0L};
    for (int k = 0; k < 4000; ++k) {
        cld contrib = term / static_cast<long double>(2 * k + 1);
        cld y = contrib - comp;
        cld t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        term *= -z * z / static_cast<long double>(k + 1);
        if (std::abs(contrib) < 1e-22L * std::abs(sum) + 1e-4900L) break;
    }
    return kTwoOverSqrtPi * sum;
}

cld erfcx_cf(cld z) {
    // sqrt(pi) e^{z^2} erfc(z) = 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
    cld f = z;
    cld c = z;
    cld d{0.0L, 0.0L};
    for (int n = 1; n <= 500; ++n) {
        const long double a = 0.5L * n;
        d = z + a * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = z + a / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0L / d;
        cld delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0L) < 1e-20L) break;
    }
    return 1.0L / (kSqrtPi * f);
}

cld erfcx_asymptotic(cld z) {
    const cld r = 1.0L / (2.0L * z * z);
    cld term{1.0L, 0.0L};
    cld sum{1.0L, 0.0L};
    long double prev = 1.0L;
    for (int k = 1; k <= 80; ++k) {
        term *= -static_cast<long double>(2 * k - 1) * r;
        const long double mag = std::abs(term);
        if (mag > prev) break; // asymptotic tail started growing
        sum += term;
        if (mag < 1e-22L * std::abs(sum)) break;
        prev = mag;
    }
    return sum / (kSqrtPi * z);
}

cld erfcx_right(cld z) {
    const long double az = std::abs(z);
    if (az >= 7.5L) return erfcx_asymptotic(z);
    if (z.real() >= 2.5L && az >= 3.5L) return erfcx_cf(z);
    // |erf| >~ 1 exactly where e^{z^2} is small, so the product is benign.
    return std::exp(z * z) * (1.0L - erf_series(z));
}

} // namespace special_detail

namespace {

using special_detail::cld;

void require_finite(std::complex<double> z, const char* who) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::domain_error(std::string(who) + ": non-finite argument");
}

} // namespace

std::complex<double> erf_complex(std::complex<double> z) {
    require_finite(z, "erf_complex");
    if (std::abs(z) > 50.0)
        throw std::domain_error("erf_complex: |z| > 50 is outside the supported range");
    if (z.imag() * z.imag() - z.real() * z.real() > 705.0)
        throw std::domain_error("erf_complex: |erf(z)| exceeds the double range");

    cld w(z.real(), z.imag());
    const bool reflected = w.real() < 0.0L;
    if (reflected) w = -w;

    cld r;
    if (std::abs(w) < 3.5L || w.real() < 2.5L)
        r = special_detail::erf_series(w);
    else
        r = 1.0L - std::exp(-w * w) * special_detail::erfcx_right(w);

    if (reflected) r = -r;
    return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

double erfc_real(double x) {
    if (!(x >= 0.0))
        throw std::domain_error("erfc_real: argument must be >= 0");
    return std::erfc(x);
}

std::complex<double> erfcx_complex(std::complex<double> z) {
    require_finite(z, "erfcx_complex");
    if (z.real() < 0.0)
        throw std::domain_error("erfcx_complex: requires Re(z) >= 0");
    const cld r = special_detail::erfcx_right(cld(z.real(), z.imag()));
    return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

} // namespace udw
