#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "udw/geometry.hpp"

namespace udw {

// Brute-force evaluation of the defining response integrals with the
// image-method two-point function, regularized at finite epsilon and
// extrapolated to epsilon -> 0. Entirely independent of the closed forms:
// nothing here touches erf.

struct oracle_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureSettings {
    // Regulator values, strictly decreasing geometric sequence (>= 3 entries).
    std::vector<double> epsilon_schedule{};
    // Switching-time truncation; Gaussian tails beyond 8 sigma are < e^{-32}.
    double tau_window{8.0};
    // Seed nodes per axis for the direct 2-D mode.
    int grid{48};
    // Polynomial degree of the epsilon -> 0 extrapolation (capped by the
    // schedule length minus one). The leading correction is odd in epsilon,
    // so the extrapolation variable is epsilon itself.
    int extrapolation_order{3};
    // Absolute tolerance for the adaptive panels of one integral.
    double panel_tol{1e-10};

    enum class Mode { Reduced1D, Direct2D };
    // Reduced1D integrates over u = tau - tau' after the analytic Gaussian
    // integral over the mean time; Direct2D evaluates the raw double
    // integral and exists to cross-check the reduction.
    Mode mode{Mode::Reduced1D};

    static QuadratureSettings defaults();
    void validate() const;
};

struct OracleReal {
    double value{0.0};
    double error{0.0};
};

struct OracleComplex {
    std::complex<double> value{};
    double error{0.0};
};

// Image-method two-point function at time separation dt and spatial
// separations d_direct (same point: 0) and d_image (may be +inf to disable
// the boundary term).
std::complex<double> wightman(double dt, double d_direct, double d_image, double eps);

// Excitation probability of a detector with the given gap at boundary
// distance z (z = +inf for free space), unit coupling.
OracleReal oracle_P(double gap, double z, const QuadratureSettings& settings);

// Pairwise amplitudes; positions may coincide for C (then C equals P of
// that detector).
OracleComplex oracle_C(const Detector& a, const Detector& b, const QuadratureSettings& settings);
OracleComplex oracle_X(const Detector& a, const Detector& b, const QuadratureSettings& settings);

namespace oracle_detail {

struct QuadOutcome {
    std::complex<double> value{};
    double error{0.0};
};

using Integrand = std::function<std::complex<double>(double)>;

// Globally adaptive Gauss-Legendre quadrature (15/31 pair) over panels
// seeded by `breakpoints`; bisects the worst panel until the summed error
// estimate drops below tol.
QuadOutcome adaptive_integrate(const Integrand& f, const std::vector<double>& breakpoints,
                               double tol);

std::vector<double> seeded_breakpoints(double lo, double hi,
                                       const std::vector<double>& poles, double eps);

struct Extrapolated {
    std::complex<double> value{};
    double error{0.0};
    bool converged{true};
};

// Polynomial extrapolation to epsilon = 0 through (eps_k, F_k), Neville
// tableau in the variable epsilon. quad_error enters the reported error
// through the Lagrange weight amplification.
Extrapolated extrapolate_to_zero(const std::vector<double>& eps,
                                 const std::vector<std::complex<double>>& values,
                                 const std::vector<double>& quad_errors,
                                 int max_order);

const std::vector<double>& gauss_legendre_nodes(int n);
const std::vector<double>& gauss_legendre_weights(int n);

} // namespace oracle_detail

} // namespace udw
