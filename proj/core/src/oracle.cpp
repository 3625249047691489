#include "udw/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <string>

namespace udw {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.7724538509055160273;

void check_gap_z(double gap, double z, const char* who) {
    if (!std::isfinite(gap) || gap < 0.0)
        throw std::domain_error(std::string(who) + ": gap must be finite and >= 0");
    if (std::isnan(z) || z < 0.0)
        throw std::domain_error(std::string(who) + ": z must be >= 0");
}

} // namespace

namespace oracle_detail {

namespace {

// Legendre nodes by Newton iteration on the recurrence.
void compute_gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

struct GLRule {
    std::vector<double> x, w;
};

const GLRule& rule(int n) {
    static const std::map<int, GLRule> cache = [] {
        std::map<int, GLRule> m;
        for (int n : {15, 31}) {
            GLRule r;
            compute_gauss_legendre(n, r.x, r.w);
            m.emplace(n, std::move(r));
        }
        return m;
    }();
    return cache.at(n);
}

struct Panel {
    double a, b;
    std::complex<double> value;
    double error;
};

Panel evaluate_panel(const Integrand& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::complex<double> coarse{0.0, 0.0}, fine{0.0, 0.0};
    {
        const auto& r = rule(15);
        for (std::size_t i = 0; i < r.x.size(); ++i)
            coarse += r.w[i] * f(mid + half * r.x[i]);
        coarse *= half;
    }
    {
        const auto& r = rule(31);
        for (std::size_t i = 0; i < r.x.size(); ++i)
            fine += r.w[i] * f(mid + half * r.x[i]);
        fine *= half;
    }
    return {a, b, fine, std::abs(fine - coarse)};
}

} // namespace

const std::vector<double>& gauss_legendre_nodes(int n) { return rule(n).x; }
const std::vector<double>& gauss_legendre_weights(int n) { return rule(n).w; }

QuadOutcome adaptive_integrate(const Integrand& f, const std::vector<double>& breakpoints,
                               double tol) {
    if (breakpoints.size() < 2)
        throw std::domain_error("adaptive_integrate: need at least two breakpoints");
    auto worse = [](const Panel& p, const Panel& q) { return p.error < q.error; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> heap(worse);

    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i] < breakpoints[i + 1])) continue;
        Panel p = evaluate_panel(f, breakpoints[i], breakpoints[i + 1]);
        total_error += p.error;
        heap.push(std::move(p));
    }

    const int max_panels = 60000;
    int panels = static_cast<int>(heap.size());
    const double width_floor = 1e-14 * (breakpoints.back() - breakpoints.front());
    std::vector<Panel> retired; // panels too narrow to split further
    double frozen_error = 0.0;

    while (!heap.empty() && total_error - frozen_error > 0.0 && total_error > tol &&
           panels < max_panels) {
        Panel worst = heap.top();
        if (worst.error <= 0.0) break;
        heap.pop();
        if (worst.b - worst.a < width_floor) {
            frozen_error += worst.error;
            retired.push_back(worst);
            continue;
        }
        total_error -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = evaluate_panel(f, worst.a, mid);
        Panel right = evaluate_panel(f, mid, worst.b);
        total_error += left.error + right.error;
        heap.push(std::move(left));
        heap.push(std::move(right));
        ++panels;
    }
    if (total_error > 1e3 * tol && panels >= max_panels)
        throw oracle_failure("adaptive_integrate: tolerance unreachable within the panel budget");

    std::complex<double> sum{0.0, 0.0};
    double err = 0.0;
    for (const Panel& p : retired) {
        sum += p.value;
        err += p.error;
    }
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {sum, err};
}

std::vector<double> seeded_breakpoints(double lo, double hi, const std::vector<double>& poles,
                                       double eps) {
    std::set<double> pts{lo, hi};
    for (double p : poles) {
        if (!std::isfinite(p)) continue;
        for (double m : {0.0, 1.0, 4.0, 16.0, 64.0}) {
            for (double sgn : {-1.0, 1.0}) {
                const double c = p + sgn * m * eps;
                if (lo < c && c < hi) pts.insert(c);
                if (m == 0.0) break;
            }
        }
    }
    return {pts.begin(), pts.end()};
}

Extrapolated extrapolate_to_zero(const std::vector<double>& eps,
                                 const std::vector<std::complex<double>>& values,
                                 const std::vector<double>& quad_errors, int max_order) {
    const std::size_t n = eps.size();
    if (n == 0 || values.size() != n || quad_errors.size() != n)
        throw std::domain_error("extrapolate_to_zero: inconsistent inputs");
    const std::size_t order = std::min<std::size_t>(max_order, n - 1);
    const std::size_t m = order + 1; // points actually used: the smallest m epsilons
    const std::size_t off = n - m;

    // Neville tableau evaluated at 0; diagonal entries are the successive
    // polynomial orders.
    std::vector<std::complex<double>> t(values.begin() + off, values.end());
    std::vector<double> x(eps.begin() + off, eps.end());
    std::vector<std::complex<double>> diagonal{t[0]};
    for (std::size_t j = 1; j < m; ++j) {
        for (std::size_t i = m - 1; i >= j; --i)
            t[i] = t[i] + (t[i] - t[i - 1]) * (x[i] / (x[i - j] - x[i]));
        diagonal.push_back(t[m - 1]);
    }

    // Lagrange-at-zero weights bound the quadrature noise amplification.
    double amp = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        double w = 1.0;
        for (std::size_t l = 0; l < m; ++l)
            if (l != k) w *= x[l] / (x[l] - x[k]);
        amp += std::abs(w) * quad_errors[off + k];
    }

    Extrapolated out;
    out.value = diagonal.back();
    const double step_last =
        m >= 2 ? std::abs(diagonal[m - 1] - diagonal[m - 2]) : quad_errors.back();
    const double step_prev =
        m >= 3 ? std::abs(diagonal[m - 2] - diagonal[m - 3]) : step_last;
    out.error = step_last + amp;
    out.converged = step_last <= 10.0 * (step_prev + amp);
    return out;
}

} // namespace oracle_detail

QuadratureSettings QuadratureSettings::defaults() {
    QuadratureSettings s;
    s.epsilon_schedule = {std::pow(10.0, -1.5), 1e-2, std::pow(10.0, -2.5), 1e-3};
    return s;
}

void QuadratureSettings::validate() const {
    if (epsilon_schedule.size() < 3)
        throw std::domain_error("QuadratureSettings: epsilon schedule needs >= 3 entries");
    for (double e : epsilon_schedule)
        if (!(e > 0.0) || !std::isfinite(e))
            throw std::domain_error("QuadratureSettings: epsilon values must be positive");
    const double ratio = epsilon_schedule[1] / epsilon_schedule[0];
    if (!(ratio < 1.0))
        throw std::domain_error("QuadratureSettings: epsilon schedule must decrease");
    for (std::size_t i = 0; i + 1 < epsilon_schedule.size(); ++i) {
        const double r = epsilon_schedule[i + 1] / epsilon_schedule[i];
        if (std::abs(r / ratio - 1.0) > 1e-9)
            throw std::domain_error("QuadratureSettings: epsilon schedule must be geometric");
    }
    if (!(tau_window >= 8.0))
        throw std::domain_error("QuadratureSettings: tau_window must be >= 8");
    if (grid < 8)
        throw std::domain_error("QuadratureSettings: grid too coarse");
    if (extrapolation_order < 1)
        throw std::domain_error("QuadratureSettings: extrapolation order must be >= 1");
    if (!(panel_tol > 0.0))
        throw std::domain_error("QuadratureSettings: panel tolerance must be positive");
}

std::complex<double> wightman(double dt, double d_direct, double d_image, double eps) {
    if (!(eps > 0.0))
        throw std::domain_error("wightman: eps must be positive");
    if (std::isnan(d_direct) || d_direct < 0.0 || std::isnan(d_image) || d_image < d_direct)
        throw std::domain_error("wightman: need 0 <= d_direct <= d_image");
    const std::complex<double> tm(dt, -eps);
    const std::complex<double> q = tm * tm;
    std::complex<double> w = 1.0 / (q - d_direct * d_direct);
    if (!std::isinf(d_image)) w -= 1.0 / (q - d_image * d_image);
    return -w / (4.0 * kPi * kPi);
}

namespace {

using oracle_detail::adaptive_integrate;
using oracle_detail::Extrapolated;
using oracle_detail::extrapolate_to_zero;
using oracle_detail::QuadOutcome;
using oracle_detail::seeded_breakpoints;

struct PairKernel {
    double gap_sum;  // s
    double gap_diff; // delta
    double d_direct;
    double d_image;
};

// One epsilon member of the reduced u-integral family.
QuadOutcome reduced_integral(const PairKernel& k, double eps, double u_lo, double u_hi,
                             const QuadratureSettings& qs,
                             const std::function<std::complex<double>(double)>& phase) {
    std::vector<double> poles;
    for (double p : {k.d_direct, k.d_image})
        if (std::isfinite(p)) {
            poles.push_back(p);
            poles.push_back(-p);
        }
    const auto bps = seeded_breakpoints(u_lo, u_hi, poles, eps);
    auto f = [&](double u) {
        return std::exp(-0.25 * u * u) * phase(u) * wightman(u, k.d_direct, k.d_image, eps);
    };
    return adaptive_integrate(f, bps, qs.panel_tol);
}

struct SweepOverEps {
    std::vector<std::complex<double>> values;
    std::vector<double> errors;
};

template <typename PerEps>
Extrapolated run_schedule(const QuadratureSettings& qs, PerEps&& per_eps, const char* who) {
    SweepOverEps sw;
    for (double eps : qs.epsilon_schedule) {
        QuadOutcome o = per_eps(eps);
        sw.values.push_back(o.value);
        sw.errors.push_back(o.error);
    }
    Extrapolated ex = extrapolate_to_zero(qs.epsilon_schedule, sw.values, sw.errors,
                                          qs.extrapolation_order);
    if (!ex.converged)
        throw oracle_failure(std::string(who) + ": epsilon extrapolation did not converge");
    return ex;
}

// --- direct 2-D mode -------------------------------------------------------

std::vector<double> grid_breakpoints(double lo, double hi, int n) {
    std::vector<double> pts;
    pts.reserve(n + 1);
    for (int i = 0; i <= n; ++i) pts.push_back(lo + (hi - lo) * i / n);
    return pts;
}

// Raw double integral over (tau, tau'); kernel(tau, tau') supplies the phase
// and theta structure.
QuadOutcome direct_2d(const QuadratureSettings& qs, double eps, double dd, double di,
                      const std::function<std::complex<double>(double, double)>& kernel) {
    const double W = qs.tau_window;
    const auto outer_bps = grid_breakpoints(-W, W, qs.grid);
    double inner_err_max = 0.0;
    auto outer = [&](double tau) {
        std::vector<double> poles{tau, tau - dd, tau + dd};
        if (std::isfinite(di)) {
            poles.push_back(tau - di);
            poles.push_back(tau + di);
        }
        const auto bps = seeded_breakpoints(-W, W, poles, eps);
        auto inner = [&](double taup) {
            return std::exp(-0.5 * (tau * tau + taup * taup)) * kernel(tau, taup);
        };
        QuadOutcome o = adaptive_integrate(inner, bps, qs.panel_tol);
        inner_err_max = std::max(inner_err_max, o.error);
        return o.value;
    };
    QuadOutcome o = adaptive_integrate(outer, outer_bps, qs.panel_tol * 100.0);
    o.error += inner_err_max * 2.0 * W; // worst inner error times the outer measure
    return o;
}

} // namespace

OracleReal oracle_P(double gap, double z, const QuadratureSettings& qs) {
    qs.validate();
    check_gap_z(gap, z, "oracle_P");
    const double di = std::isinf(z) ? std::numeric_limits<double>::infinity() : 2.0 * z;
    const double U = 2.0 * qs.tau_window;

    Extrapolated ex;
    if (qs.mode == QuadratureSettings::Mode::Reduced1D) {
        PairKernel k{2.0 * gap, 0.0, 0.0, di};
        ex = run_schedule(
            qs,
            [&](double eps) {
                auto o = reduced_integral(
                    k, eps, -U, U, qs,
                    [&](double u) {
                        return std::exp(std::complex<double>(0.0, -gap * u));
                    });
                o.value *= kSqrtPi;
                o.error *= kSqrtPi;
                return o;
            },
            "oracle_P");
    } else {
        ex = run_schedule(
            qs,
            [&](double eps) {
                return direct_2d(qs, eps, 0.0, di, [&](double tau, double taup) {
                    const double u = tau - taup;
                    return std::exp(std::complex<double>(0.0, -gap * u)) *
                           wightman(u, 0.0, di, eps);
                });
            },
            "oracle_P");
    }
    return {ex.value.real(), ex.error + std::abs(ex.value.imag())};
}

OracleComplex oracle_C(const Detector& a, const Detector& b, const QuadratureSettings& qs) {
    qs.validate();
    check_gap_z(a.gap, a.position[2], "oracle_C");
    check_gap_z(b.gap, b.position[2], "oracle_C");

    double dd, di;
    if (a.position == b.position) {
        dd = 0.0;
        di = 2.0 * a.position[2];
    } else {
        const PairDistances dist = pair_distances(a, b);
        dd = dist.direct;
        di = dist.image;
    }
    const double s = a.gap + b.gap;
    const double delta = a.gap - b.gap;
    const double pref = kSqrtPi * std::exp(-0.25 * delta * delta);
    const double U = 2.0 * qs.tau_window;

    Extrapolated ex;
    if (qs.mode == QuadratureSettings::Mode::Reduced1D) {
        PairKernel k{s, delta, dd, di};
        ex = run_schedule(
            qs,
            [&](double eps) {
                auto o = reduced_integral(
                    k, eps, -U, U, qs,
                    [&](double u) {
                        return std::exp(std::complex<double>(0.0, -0.5 * s * u));
                    });
                o.value *= pref;
                o.error *= pref;
                return o;
            },
            "oracle_C");
    } else {
        ex = run_schedule(
            qs,
            [&](double eps) {
                return direct_2d(qs, eps, dd, di, [&](double tau, double taup) {
                    return std::exp(std::complex<double>(0.0, -(a.gap * tau - b.gap * taup))) *
                           wightman(tau - taup, dd, di, eps);
                });
            },
            "oracle_C");
    }
    return {ex.value, ex.error};
}

OracleComplex oracle_X(const Detector& a, const Detector& b, const QuadratureSettings& qs) {
    qs.validate();
    check_gap_z(a.gap, a.position[2], "oracle_X");
    check_gap_z(b.gap, b.position[2], "oracle_X");
    const PairDistances dist = pair_distances(a, b);
    const double s = a.gap + b.gap;
    const double delta = a.gap - b.gap;
    const double pref = 2.0 * kSqrtPi * std::exp(-0.25 * s * s);
    const double U = 2.0 * qs.tau_window;

    Extrapolated ex;
    if (qs.mode == QuadratureSettings::Mode::Reduced1D) {
        PairKernel k{s, delta, dist.direct, dist.image};
        ex = run_schedule(
            qs,
            [&](double eps) {
                auto o = reduced_integral(k, eps, 0.0, U, qs, [&](double u) {
                    return std::complex<double>(std::cos(0.5 * delta * u), 0.0);
                });
                o.value *= -pref;
                o.error *= pref;
                return o;
            },
            "oracle_X");
    } else {
        ex = run_schedule(
            qs,
            [&](double eps) {
                auto o = direct_2d(qs, eps, dist.direct, dist.image,
                                   [&](double tau, double taup) {
                                       const double u = tau - taup;
                                       const std::complex<double> phase = std::exp(
                                           std::complex<double>(0.0, a.gap * tau + b.gap * taup));
                                       // theta mask: later-time argument first
                                       const std::complex<double> w =
                                           (tau >= taup)
                                               ? wightman(u, dist.direct, dist.image, eps)
                                               : wightman(-u, dist.direct, dist.image, eps);
                                       return phase * w;
                                   });
                o.value = -o.value;
                return o;
            },
            "oracle_X");
    }
    return {ex.value, ex.error};
}

} // namespace udw
