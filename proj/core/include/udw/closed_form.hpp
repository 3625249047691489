#pragma once

#include <complex>
#include <cstdint>

#include "udw/geometry.hpp"

namespace udw {

// Closed-form transition probability and pairwise amplitudes of three static
// two-level detectors with Gaussian switching e^{-tau^2/(2 sigma^2)}, coupled
// to the massless scalar vacuum beside a perfectly reflecting plane. All
// results are at unit coupling; the caller rescales by lambda^2.

struct PairAmplitudes {
    std::complex<double> c{};   // single-excitation correlation C
    std::complex<double> x{};   // vacuum <-> double-excitation amplitude X
    PairDistances distances{};
};

struct Probabilities {
    double a{0.0};
    double b{0.0};
    double c{0.0};
};

// Auxiliary kernel
//   f(d, s) = (e^{-d^2/4}/d) { Im[e^{i s d/2} erf((s + i d)/2)] - sin(s d/2) }
//           = -(e^{-s^2/4}/d) Im[erfcx((s + i d)/2)],
// continuous at d = 0 with f(0, s) = e^{-s^2/4}/sqrt(pi) - (s/2) erfc(s/2).
// Decays like 2 e^{-s^2/4}/(sqrt(pi) d^2) at large d: the erf factor grows
// like e^{+d^2/4} and cancels the Gaussian envelope, leaving the power-law
// tail of the smeared vacuum correlations. f(inf, s) = 0.
double f_aux(double d, double gap_sum);

// Auxiliary kernel
//   g(d, delta) = (e^{-d^2/4}/d) { Im[e^{i delta d/2} erf((delta + i d)/2)]
//                                  + i cos(delta d/2) },
// even in delta. The real part is continuous at d -> 0+ (same structure as
// f); the imaginary part e^{-d^2/4} cos(delta d/2)/d carries the 1/d
// short-distance singularity of the time-ordered kernel, so d > 0 is
// required.
std::complex<double> g_aux(double d, double gap_diff);

// Excitation probability of a single static detector at boundary distance z,
// unit coupling. Vanishes at z = 0 and tends to the free-space value
// [e^{-gap^2} - sqrt(pi) gap erfc(gap)]/(4 pi) as z -> inf, with a
// boundary correction that decays like 1/z^2. Tiny negative rounding
// residues in (-1e-12, 0) are clamped to zero and counted; anything more
// negative throws std::logic_error.
double transition_probability(double gap, double z);

// Pairwise amplitudes C and X from the generic direct/image distances. C is
// real for static equal-time detectors. The X bracket built from g alone
// comes out conjugated relative to the defining time-ordered integral (the
// quadrature oracle fixes Im X > 0 at spacelike separation), so the bracket
// is conjugated here; see the oracle tests.
PairAmplitudes pair_amplitudes(const Detector& a, const Detector& b);

// Probabilities of all three detectors of a configuration.
Probabilities all_probabilities(const GeometryConfig& cfg);

// Count of probability values clamped from (-1e-12, 0) to zero.
std::uint64_t probability_clamp_count();
void reset_probability_clamp_count();

namespace closed_form_detail {
// Both branches of f and Re(g), exposed for branch-consistency tests.
// The series branch is a d^0/d^2/d^4 expansion used below d = 1e-3.
double f_direct(double d, double s);
double f_series(double d, double s);
double g_re_direct(double d, double delta);
double g_re_series(double d, double delta);
inline constexpr double kSeriesSwitch = 1e-3;
} // namespace closed_form_detail

} // namespace udw
