#include "udw/closed_form.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "udw/special.hpp"

namespace udw {

namespace {

constexpr long double kSqrtPi = 1.77245385090551602729816748334114518L;
constexpr long double kTwoOverSqrtPi = 1.12837916709551257389615890312154517L;
constexpr long double kPi = 3.14159265358979323846264338327950288L;
constexpr double kInvFourSqrtPi = 0.141047395886939072;

std::atomic<std::uint64_t> g_clamp_count{0};

void check_distance(double d, const char* who) {
    if (std::isnan(d) || d < 0.0)
        throw std::domain_error(std::string(who) + ": distance must be >= 0");
}

void check_gap_arg(double g, const char* who) {
    if (!std::isfinite(g))
        throw std::domain_error(std::string(who) + ": non-finite gap argument");
}

double clamp_probability(double p) {
    if (p >= 0.0) return p;
    if (p > -1e-12) {
        g_clamp_count.fetch_add(1, std::memory_order_relaxed);
        return 0.0;
    }
    throw std::logic_error("transition_probability: negative value beyond rounding tolerance");
}

} // namespace

namespace closed_form_detail {

double f_direct(double d, double s) {
    const special_detail::cld z(0.5L * s, 0.5L * d);
    const special_detail::cld w = special_detail::erfcx_right(z);
    const long double sl = s;
    return static_cast<double>(-std::exp(-0.25L * sl * sl) / d * w.imag());
}

double f_series(double d, double s) {
    const long double a = 0.5L * s;
    const long double dd = d;
    const long double E = kTwoOverSqrtPi * std::exp(-a * a);
    const long double erfc_a = std::erfc(a);
    if (d == 0.0) return static_cast<double>(0.5L * E - a * erfc_a);
    const long double d2 = dd * dd;
    const long double a2 = a * a;
    const long double qr = a * d2 / 4 + a * (3 - 2 * a2) * d2 * d2 / 96;
    const long double qi = dd / 2 - (2 * a2 - 1) * dd * d2 / 24 +
                           (4 * a2 * a2 - 12 * a2 + 3) * dd * d2 * d2 / 960;
    const long double sad = std::sin(a * dd);
    const long double cad = std::cos(a * dd);
    const long double braces = -erfc_a * sad + E * (cad * qi + sad * qr);
    return static_cast<double>(std::exp(-d2 / 4) * braces / dd);
}

double g_re_direct(double d, double delta) {
    const special_detail::cld z(0.5L * delta, 0.5L * d);
    const special_detail::cld w = special_detail::erfcx_right(z);
    const long double dl = delta;
    const long double dd = d;
    const long double t = -std::exp(-0.25L * dl * dl) / dd * w.imag() +
                          std::exp(-0.25L * dd * dd) * std::sin(0.5L * dl * dd) / dd;
    return static_cast<double>(t);
}

double g_re_series(double d, double delta) {
    const long double a = 0.5L * delta;
    const long double dd = d;
    const long double E = kTwoOverSqrtPi * std::exp(-a * a);
    const long double erf_a = std::erf(a);
    const long double d2 = dd * dd;
    const long double a2 = a * a;
    const long double qr = a * d2 / 4 + a * (3 - 2 * a2) * d2 * d2 / 96;
    const long double qi = dd / 2 - (2 * a2 - 1) * dd * d2 / 24 +
                           (4 * a2 * a2 - 12 * a2 + 3) * dd * d2 * d2 / 960;
    const long double sad = std::sin(a * dd);
    const long double cad = std::cos(a * dd);
    const long double braces = erf_a * sad + E * (cad * qi + sad * qr);
    return static_cast<double>(std::exp(-d2 / 4) * braces / dd);
}

} // namespace closed_form_detail

double f_aux(double d, double gap_sum) {
    check_distance(d, "f_aux");
    check_gap_arg(gap_sum, "f_aux");
    if (gap_sum < 0.0)
        throw std::domain_error("f_aux: gap sum must be >= 0");
    if (std::isinf(d)) return 0.0;
    if (d < closed_form_detail::kSeriesSwitch)
        return closed_form_detail::f_series(d, gap_sum);
    return closed_form_detail::f_direct(d, gap_sum);
}

std::complex<double> g_aux(double d, double gap_diff) {
    check_distance(d, "g_aux");
    check_gap_arg(gap_diff, "g_aux");
    if (d == 0.0)
        throw std::domain_error("g_aux: the time-ordered kernel diverges at zero separation");
    if (std::isinf(d)) return {0.0, 0.0};
    const double delta = std::abs(gap_diff);
    const double re = (d < closed_form_detail::kSeriesSwitch)
                          ? closed_form_detail::g_re_series(d, delta)
                          : closed_form_detail::g_re_direct(d, delta);
    const long double dd = d;
    const long double im = std::exp(-0.25L * dd * dd) * std::cos(0.5L * (long double)delta * dd) / dd;
    return {re, static_cast<double>(im)};
}

double transition_probability(double gap, double z) {
    check_gap_arg(gap, "transition_probability");
    if (gap < 0.0)
        throw std::domain_error("transition_probability: gap must be >= 0");
    if (std::isnan(z) || z < 0.0)
        throw std::domain_error("transition_probability: z must be >= 0");
    const long double gl = gap;
    const long double bracket = std::exp(-gl * gl) - kSqrtPi * gl * std::erfc(gl);
    const double free_part = static_cast<double>(bracket / (4.0L * kPi));
    if (std::isinf(z)) return clamp_probability(free_part);
    const double boundary = f_aux(2.0 * z, 2.0 * gap) * kInvFourSqrtPi;
    return clamp_probability(free_part - boundary);
}

PairAmplitudes pair_amplitudes(const Detector& a, const Detector& b) {
    const PairDistances dist = pair_distances(a, b);
    const Detector& first = (a.label <= b.label) ? a : b;
    const Detector& second = (a.label <= b.label) ? b : a;
    const double s = first.gap + second.gap;
    const double delta = second.gap - first.gap;

    const double pref_c = kInvFourSqrtPi * std::exp(-0.25 * delta * delta);
    const double pref_x = kInvFourSqrtPi * std::exp(-0.25 * s * s);

    PairAmplitudes out;
    out.distances = dist;
    out.c = pref_c * (f_aux(dist.direct, s) - f_aux(dist.image, s));
    // The defining time-ordered integral fixes the orientation of Im X; the
    // g bracket alone yields its conjugate (pinned by the oracle tests).
    const std::complex<double> bracket = g_aux(dist.direct, delta) - g_aux(dist.image, delta);
    out.x = -pref_x * std::conj(bracket);
    return out;
}

Probabilities all_probabilities(const GeometryConfig& cfg) {
    Probabilities p;
    p.a = transition_probability(cfg.detectors[0].gap, cfg.detectors[0].position[2]);
    p.b = transition_probability(cfg.detectors[1].gap, cfg.detectors[1].position[2]);
    p.c = transition_probability(cfg.detectors[2].gap, cfg.detectors[2].position[2]);
    return p;
}

std::uint64_t probability_clamp_count() {
    return g_clamp_count.load(std::memory_order_relaxed);
}

void reset_probability_clamp_count() {
    g_clamp_count.store(0, std::memory_order_relaxed);
}

} // namespace udw
