#include "udw/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "udw/version.hpp"

namespace udw {

namespace {

constexpr double kInvFourSqrtPi = 0.141047395886939072;

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    threads = std::min(threads, n);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            int i;
            while ((i = next.fetch_add(1)) < n && !failed.load()) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true);
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string format_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

GeometryConfig build_geometry(GeometryKind kind, double L, double dz,
                              const std::array<double, 3>& gaps) {
    switch (kind) {
        case GeometryKind::Parallel: return make_parallel(L, dz, gaps);
        case GeometryKind::Orthogonal: return make_orthogonal(L, dz, gaps);
        default:
            throw std::domain_error("sweeps require a parallel or orthogonal geometry");
    }
}

struct ColumnSet {
    bool p{false}, absc{false}, absx{false}, cl1{false}, additivity{false};
};

ColumnSet parse_outputs(const std::vector<std::string>& outputs) {
    ColumnSet cs;
    if (outputs.empty())
        throw std::domain_error("outputs selection must not be empty");
    for (const auto& o : outputs) {
        if (o == "P") cs.p = true;
        else if (o == "absC") cs.absc = true;
        else if (o == "absX") cs.absx = true;
        else if (o == "C_l1") cs.cl1 = true;
        else if (o == "additivity_residual") cs.additivity = true;
        else
            throw std::domain_error("unknown output selector '" + o +
                                    "' (expected P, absC, absX, C_l1, additivity_residual)");
    }
    return cs;
}

std::vector<std::string> column_names(const ColumnSet& cs) {
    std::vector<std::string> names;
    if (cs.p) names.insert(names.end(), {"P_A", "P_B", "P_C"});
    if (cs.absc) names.insert(names.end(), {"abs_C_AB", "abs_C_BC", "abs_C_AC"});
    if (cs.absx) names.insert(names.end(), {"abs_X_AB", "abs_X_BC", "abs_X_AC"});
    if (cs.cl1) names.push_back("C_l1");
    if (cs.additivity) names.push_back("additivity_residual");
    return names;
}

std::vector<double> row_values(const ColumnSet& cs, const PointResult& r) {
    std::vector<double> v;
    if (cs.p) v.insert(v.end(), {r.p[0], r.p[1], r.p[2]});
    if (cs.absc)
        v.insert(v.end(), {std::abs(r.c[0]), std::abs(r.c[1]), std::abs(r.c[2])});
    if (cs.absx)
        v.insert(v.end(), {std::abs(r.x[0]), std::abs(r.x[1]), std::abs(r.x[2])});
    if (cs.cl1) v.push_back(r.c_l1);
    if (cs.additivity) v.push_back(r.additivity.residual);
    return v;
}

void write_geometry_header(std::ostream& os, const GeometryConfig& g, double lambda) {
    os << "# geometry = " << kind_name(g.kind) << "\n";
    if (g.kind == GeometryKind::GeneralStatic) {
        for (int i = 0; i < 3; ++i) {
            const auto& d = g.detectors[i];
            os << "# detector" << "ABC"[i] << ": gap = " << format_param(d.gap) << " position = ("
               << format_param(d.position[0]) << ", " << format_param(d.position[1]) << ", "
               << format_param(d.position[2]) << ")\n";
        }
    } else {
        os << "# gapA = " << format_param(g.detectors[0].gap)
           << " gapB = " << format_param(g.detectors[1].gap)
           << " gapC = " << format_param(g.detectors[2].gap) << " L = " << format_param(g.L)
           << " dz = " << format_param(g.dz) << "\n";
    }
    os << "# lambda = " << format_param(lambda) << "\n";
    os << "# units: lengths in sigma; gaps are Omega*sigma; outputs scale as lambda^2\n";
    os << "# note: dz is read as dz/sigma (every length here is dimensionless in sigma units)\n";
}

} // namespace

const char* axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::L_over_sigma: return "L_over_sigma";
        case SweepAxis::dz_over_sigma: return "dz_over_sigma";
        case SweepAxis::gapB: return "gapB";
        case SweepAxis::gapC: return "gapC";
        default: return "gapBC_grid";
    }
}

const char* kind_name(GeometryKind kind) {
    switch (kind) {
        case GeometryKind::Parallel: return "parallel";
        case GeometryKind::Orthogonal: return "orthogonal";
        default: return "general";
    }
}

std::string format_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

TripartiteState point_state(const PointConfig& config) {
    if (!(std::isfinite(config.lambda) && config.lambda > 0.0))
        throw std::domain_error("lambda must be finite and > 0");
    const auto& g = config.geometry;
    const double l2 = config.lambda * config.lambda;

    Probabilities p = all_probabilities(g);
    p.a *= l2;
    p.b *= l2;
    p.c *= l2;

    std::array<PairAmplitudes, 3> pairs{
        pair_amplitudes(g.detectors[0], g.detectors[1]),
        pair_amplitudes(g.detectors[1], g.detectors[2]),
        pair_amplitudes(g.detectors[0], g.detectors[2]),
    };
    for (auto& pa : pairs) {
        pa.c *= l2;
        pa.x *= l2;
    }
    return assemble_state(p, pairs);
}

PointResult run_point(const PointConfig& config) {
    const TripartiteState st = point_state(config);
    PointResult r;
    r.p = {st.probs.a, st.probs.b, st.probs.c};
    for (int i = 0; i < 3; ++i) {
        r.c[i] = st.pairs[i].c;
        r.x[i] = st.pairs[i].x;
    }
    r.c_l1 = l1_coherence(st.rho);
    r.additivity = additivity_check(st);
    r.min_eig = min_eigenvalue(st);
    r.gap_order_warning = config.geometry.gap_order_warning;
    return r;
}

void SweepSpec::validate() const {
    if (kind == GeometryKind::GeneralStatic)
        throw std::domain_error("SweepSpec: sweeps run on parallel or orthogonal geometries");
    if (steps < 2) throw std::domain_error("SweepSpec: steps must be >= 2");
    if (!(start < stop)) throw std::domain_error("SweepSpec: start must be < stop");
    if (!(std::isfinite(start) && std::isfinite(stop)))
        throw std::domain_error("SweepSpec: non-finite axis range");
    if (!(lambda > 0.0)) throw std::domain_error("SweepSpec: lambda must be > 0");
    for (double g : gaps)
        if (!(g >= 0.0)) throw std::domain_error("SweepSpec: gaps must be >= 0");
    if (!(L > 0.0)) throw std::domain_error("SweepSpec: L must be > 0");
    if (!(dz >= 0.0)) throw std::domain_error("SweepSpec: dz must be >= 0");
    const bool axis_positive = axis == SweepAxis::L_over_sigma;
    if (axis_positive && !(start > 0.0))
        throw std::domain_error("SweepSpec: L axis must start > 0");
    if (!axis_positive && !(start >= 0.0))
        throw std::domain_error("SweepSpec: axis must start >= 0");
    parse_outputs(outputs);
}

std::vector<SweepRow> compute_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<std::vector<double>> coords;
    const auto lin = [&](int i) {
        return spec.start + (spec.stop - spec.start) * static_cast<double>(i) /
                                static_cast<double>(spec.steps - 1);
    };
    if (spec.axis == SweepAxis::gapBC_grid) {
        for (int i = 0; i < spec.steps; ++i)
            for (int j = 0; j < spec.steps; ++j)
                coords.push_back({lin(i), lin(j)});
    } else {
        for (int i = 0; i < spec.steps; ++i) coords.push_back({lin(i)});
    }

    std::vector<SweepRow> rows(coords.size());
    auto eval = [&](int i) {
        const auto& cv = coords[i];
        double L = spec.L, dz = spec.dz;
        std::array<double, 3> gaps = spec.gaps;
        switch (spec.axis) {
            case SweepAxis::L_over_sigma: L = cv[0]; break;
            case SweepAxis::dz_over_sigma: dz = cv[0]; break;
            case SweepAxis::gapB: gaps[1] = cv[0]; break;
            case SweepAxis::gapC: gaps[2] = cv[0]; break;
            case SweepAxis::gapBC_grid:
                gaps[1] = cv[0];
                gaps[2] = cv[1];
                break;
        }
        PointConfig pc{build_geometry(spec.kind, L, dz, gaps), spec.lambda};
        try {
            rows[i].axis_values = cv;
            rows[i].result = run_point(pc);
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "sweep point failed at " << axis_name(spec.axis) << " = (";
            for (std::size_t k = 0; k < cv.size(); ++k)
                msg << (k ? ", " : "") << format_param(cv[k]);
            msg << "): " << e.what();
            throw std::runtime_error(msg.str());
        }
    };
    parallel_for(static_cast<int>(coords.size()), spec.threads, eval);
    return rows;
}

void run_sweep(const SweepSpec& spec, std::ostream& os) {
    const std::vector<SweepRow> rows = compute_sweep(spec);
    const ColumnSet cs = parse_outputs(spec.outputs);

    os << "# udwharvest v" << kVersion << "\n";
    os << "# command = sweep\n";
    const GeometryConfig base = build_geometry(spec.kind, spec.L, spec.dz, spec.gaps);
    write_geometry_header(os, base, spec.lambda);
    os << "# axis = " << axis_name(spec.axis) << " start = " << format_param(spec.start)
       << " stop = " << format_param(spec.stop) << " steps = " << spec.steps << "\n";
    bool any_warning = false;
    for (const auto& r : rows) any_warning |= r.result.gap_order_warning;
    if (any_warning)
        os << "# warning: gap ordering gapC >= gapB >= gapA violated at one or more rows "
              "(advisory only)\n";

    std::vector<std::string> cols;
    if (spec.axis == SweepAxis::gapBC_grid)
        cols = {"gapB", "gapC"};
    else
        cols = {axis_name(spec.axis)};
    for (const auto& n : column_names(cs)) cols.push_back(n);
    os << "# columns: ";
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";

    for (const auto& r : rows) {
        bool first = true;
        for (double a : r.axis_values) {
            os << (first ? "" : ",") << format_sci(a);
            first = false;
        }
        for (double v : row_values(cs, r.result)) os << "," << format_sci(v);
        os << "\n";
    }
}

void write_point_csv(const PointConfig& config, const std::vector<std::string>& outputs,
                     std::ostream& os) {
    const ColumnSet cs = parse_outputs(outputs);
    const PointResult r = run_point(config);
    os << "# udwharvest v" << kVersion << "\n";
    os << "# command = point\n";
    write_geometry_header(os, config.geometry, config.lambda);
    if (r.gap_order_warning)
        os << "# warning: gap ordering gapC >= gapB >= gapA violated (advisory only)\n";
    const auto names = column_names(cs);
    os << "# columns: ";
    for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
    os << "\n";
    const auto vals = row_values(cs, r);
    for (std::size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << format_sci(vals[i]);
    os << "\n";
}

void dump_state(const PointConfig& config, std::ostream& os) {
    const TripartiteState st = point_state(config);
    static const char* kets[8] = {"|000>", "|001>", "|010>", "|100>",
                                  "|011>", "|101>", "|110>", "|111>"};
    os << "# udwharvest v" << kVersion << " state dump\n";
    write_geometry_header(os, config.geometry, config.lambda);
    os << "# basis (bits A,B,C): ";
    for (int i = 0; i < 8; ++i) os << kets[i] << (i < 7 ? " " : "\n");
    os << "# rows: ket label then re,im pairs per column\n";
    for (int i = 0; i < 8; ++i) {
        os << kets[i];
        for (int j = 0; j < 8; ++j)
            os << " " << format_sci(st.rho[i][j].real()) << " "
               << format_sci(st.rho[i][j].imag());
        os << "\n";
    }
    double trace = 0.0;
    double herm = 0.0;
    for (int i = 0; i < 8; ++i) {
        trace += st.rho[i][i].real();
        for (int j = 0; j < 8; ++j)
            herm = std::max(herm, std::abs(st.rho[i][j] - std::conj(st.rho[j][i])));
    }
    const AdditivityCheck add = additivity_check(st);
    os << "# trace = " << format_sci(trace) << "\n";
    os << "# hermiticity_residual = " << format_sci(herm) << "\n";
    os << "# min_eigenvalue = " << format_sci(min_eigenvalue(st)) << "\n";
    os << "# C_l1 = " << format_sci(l1_coherence(st.rho)) << "\n";
    os << "# additivity_residual = " << format_sci(add.residual) << "\n";
}

// --- validation --------------------------------------------------------------

namespace {

struct ValidationTask {
    std::function<ValidationRow()> run;
};

ValidationRow make_p_row(double gap, double z, const QuadratureSettings& qs) {
    ValidationRow row;
    row.quantity = "P";
    row.params = "gap=" + format_param(gap) + " z=" + format_param(z);
    row.closed = transition_probability(gap, z);
    try {
        const OracleReal o = oracle_P(gap, z, qs);
        row.oracle = o.value;
        row.oracle_error = o.error;
        row.difference = std::abs(row.closed - row.oracle);
        row.tolerance = 1e-4 * std::abs(o.value);
        row.pass = row.difference <= row.tolerance;
    } catch (const oracle_failure& e) {
        row.params += std::string(" [oracle failure: ") + e.what() + "]";
        row.pass = false;
    }
    return row;
}

std::pair<Detector, Detector> pair_for(GeometryKind kind, double ga, double gb, double L,
                                       double dz) {
    Detector a{DetectorLabel::A, ga, {0.0, 0.0, dz}};
    Detector b = (kind == GeometryKind::Parallel)
                     ? Detector{DetectorLabel::B, gb, {L, 0.0, dz}}
                     : Detector{DetectorLabel::B, gb, {0.0, 0.0, dz + L}};
    return {a, b};
}

ValidationRow make_pair_row(const char* quantity, GeometryKind kind, double ga, double gb,
                            double L, double dz, const QuadratureSettings& qs) {
    ValidationRow row;
    row.quantity = quantity;
    row.params = std::string("geom=") + kind_name(kind) + " gapA=" + format_param(ga) +
                 " gapB=" + format_param(gb) + " L=" + format_param(L) +
                 " dz=" + format_param(dz);
    const auto [a, b] = pair_for(kind, ga, gb, L, dz);
    const PairAmplitudes amp = pair_amplitudes(a, b);
    const bool is_c = quantity[0] == 'C';
    row.closed = is_c ? amp.c : amp.x;
    try {
        const OracleComplex o = is_c ? oracle_C(a, b, qs) : oracle_X(a, b, qs);
        row.oracle = o.value;
        row.oracle_error = o.error;
        row.difference = std::abs(row.closed - row.oracle);
        row.tolerance = std::max(1e-3 * std::abs(o.value), 1e-8);
        row.pass = row.difference <= row.tolerance;
    } catch (const oracle_failure& e) {
        row.params += std::string(" [oracle failure: ") + e.what() + "]";
        row.pass = false;
    }
    return row;
}

} // namespace

ValidationReport run_validate(const QuadratureSettings& settings, const ValidateOptions& opts) {
    settings.validate();
    const auto t0 = std::chrono::steady_clock::now();

    const std::vector<double> gap_grid{0.0, 0.1, 1.0, 2.0};
    const std::vector<double> dist_grid{0.5, 1.0, 2.0, 5.0};
    const double dz_pair = 1.0;

    std::vector<std::function<ValidationRow()>> tasks;
    if (opts.quick) {
        tasks.push_back([&] { return make_p_row(0.1, 1.0, settings); });
        tasks.push_back([&] { return make_p_row(2.0, 5.0, settings); });
        for (const char* q : {"C", "X"}) {
            tasks.push_back([&, q] {
                return make_pair_row(q, GeometryKind::Parallel, 0.1, 0.1, 1.0, dz_pair, settings);
            });
            tasks.push_back([&, q] {
                return make_pair_row(q, GeometryKind::Orthogonal, 0.1, 1.0, 1.0, dz_pair,
                                     settings);
            });
        }
    } else {
        for (double gap : gap_grid)
            for (double z : dist_grid)
                tasks.push_back([&, gap, z] { return make_p_row(gap, z, settings); });
        for (const char* q : {"C", "X"})
            for (GeometryKind kind : {GeometryKind::Parallel, GeometryKind::Orthogonal})
                for (std::size_t i = 0; i < gap_grid.size(); ++i)
                    for (std::size_t j = i; j < gap_grid.size(); ++j)
                        for (double L : dist_grid)
                            tasks.push_back([&, q, kind, i, j, L] {
                                return make_pair_row(q, kind, gap_grid[i], gap_grid[j], L,
                                                     dz_pair, settings);
                            });
    }

    ValidationReport report;
    report.rows.resize(tasks.size());
    parallel_for(static_cast<int>(tasks.size()), opts.threads,
                 [&](int i) { report.rows[i] = tasks[i](); });

    report.all_pass = true;
    for (const auto& r : report.rows) report.all_pass &= r.pass;

    // Pair BC image-distance audit (orthogonal): generic mirror construction
    // versus the literal substitution reading with the AB image distance.
    {
        const double L = 1.0, dz = 0.5, gb = 0.5, gc = 1.0;
        const Detector db{DetectorLabel::B, gb, {0.0, 0.0, dz + L}};
        const Detector dc{DetectorLabel::C, gc, {0.0, 0.0, dz + 2.0 * L}};
        const PairAmplitudes generic = pair_amplitudes(db, dc);
        const double s = gb + gc, delta = gc - gb;
        const double literal_image = L + 2.0 * dz;
        const std::complex<double> literal_c =
            kInvFourSqrtPi * std::exp(-0.25 * delta * delta) *
            (f_aux(L, s) - f_aux(literal_image, s));
        const OracleComplex oc = oracle_C(db, dc, settings);
        report.bc_generic_diff = std::abs(generic.c - oc.value);
        report.bc_literal_diff = std::abs(literal_c - oc.value);
        std::ostringstream audit;
        audit << "pair BC (orthogonal, L=1 dz=0.5 gapB=0.5 gapC=1): generic image distance "
              << format_param(generic.distances.image) << " differs from the oracle by "
              << format_sci(report.bc_generic_diff)
              << "; literal substitution reading (image " << format_param(literal_image)
              << ") differs by " << format_sci(report.bc_literal_diff)
              << " -> the generic mirror construction matches the defining integrals";
        report.bc_audit = audit.str();
    }

    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

void write_validation_report(const ValidationReport& report, std::ostream& os) {
    os << "# udwharvest v" << kVersion << " validation report\n";
    os << "# tolerances: P 1e-4 relative; C,X max(1e-3 relative, 1e-8 absolute)\n";
    os << "# quantity | parameters | closed form | oracle | oracle error | |diff| | status\n";
    for (const auto& r : report.rows) {
        os << r.quantity << " | " << r.params << " | ";
        if (r.quantity == "P")
            os << format_sci(r.closed.real()) << " | " << format_sci(r.oracle.real());
        else
            os << format_sci(r.closed.real()) << (r.closed.imag() < 0 ? "" : "+")
               << format_sci(r.closed.imag()) << "i | " << format_sci(r.oracle.real())
               << (r.oracle.imag() < 0 ? "" : "+") << format_sci(r.oracle.imag()) << "i";
        os << " | " << format_sci(r.oracle_error) << " | " << format_sci(r.difference) << " | "
           << (r.pass ? "pass" : "FAIL") << "\n";
    }
    os << "# audit: " << report.bc_audit << "\n";
    std::size_t passed = 0;
    for (const auto& r : report.rows) passed += r.pass ? 1 : 0;
    os << "# summary: " << passed << "/" << report.rows.size() << " points passed in "
       << format_param(report.seconds) << " s -> " << (report.all_pass ? "PASS" : "FAIL")
       << "\n";
}

} // namespace udw
