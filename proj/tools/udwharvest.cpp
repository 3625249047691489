// Command-line driver: parameter points, figure sweeps, state dumps, and the
// oracle cross-validation run. All lengths are in units of the switching
// width sigma; gaps are the dimensionless Omega*sigma.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "udw/runner.hpp"
#include "udw/version.hpp"

namespace {

struct CommonOptions {
    std::string geometry{"parallel"};
    double L{1.0};
    double dz{1.0};
    std::array<double, 3> gaps{0.1, 0.1, 0.1};
    std::vector<double> posA, posB, posC;
    double lambda{1.0};
    std::vector<std::string> outputs{"P", "absC", "absX", "C_l1", "additivity_residual"};
    std::string output_path{"-"};
    int threads{1};
};

void add_geometry_options(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--geometry", opt.geometry, "parallel | orthogonal | general")
        ->check(CLI::IsMember({"parallel", "orthogonal", "general"}))
        ->capture_default_str();
    cmd->add_option("--L", opt.L, "adjacent detector separation L/sigma")
        ->capture_default_str();
    cmd->add_option("--dz", opt.dz, "boundary distance dz/sigma of the closest detector")
        ->capture_default_str();
    cmd->add_option("--gapA", opt.gaps[0], "energy gap OmegaA*sigma")->capture_default_str();
    cmd->add_option("--gapB", opt.gaps[1], "energy gap OmegaB*sigma")->capture_default_str();
    cmd->add_option("--gapC", opt.gaps[2], "energy gap OmegaC*sigma")->capture_default_str();
    cmd->add_option("--posA", opt.posA, "x,y,z of detector A (general geometry)")
        ->delimiter(',')
        ->expected(3);
    cmd->add_option("--posB", opt.posB, "x,y,z of detector B (general geometry)")
        ->delimiter(',')
        ->expected(3);
    cmd->add_option("--posC", opt.posC, "x,y,z of detector C (general geometry)")
        ->delimiter(',')
        ->expected(3);
    cmd->add_option("--lambda", opt.lambda, "coupling; outputs rescale by lambda^2")
        ->capture_default_str();
}

void add_output_option(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--output", opt.output_path, "output file, '-' for stdout")
        ->envname("UDWHARVEST_OUTPUT")
        ->capture_default_str();
}

udw::GeometryConfig build_geometry(const CommonOptions& opt) {
    if (opt.geometry == "parallel") return udw::make_parallel(opt.L, opt.dz, opt.gaps);
    if (opt.geometry == "orthogonal") return udw::make_orthogonal(opt.L, opt.dz, opt.gaps);
    if (opt.posA.size() != 3 || opt.posB.size() != 3 || opt.posC.size() != 3)
        throw CLI::ValidationError("--geometry general requires --posA/--posB/--posC");
    return udw::make_general(
        {udw::Detector{udw::DetectorLabel::A, opt.gaps[0], {opt.posA[0], opt.posA[1], opt.posA[2]}},
         udw::Detector{udw::DetectorLabel::B, opt.gaps[1], {opt.posB[0], opt.posB[1], opt.posB[2]}},
         udw::Detector{udw::DetectorLabel::C, opt.gaps[2], {opt.posC[0], opt.posC[1], opt.posC[2]}}});
}

int emit(const std::string& path, const std::string& body) {
    if (path == "-") {
        std::cout << body;
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open '" << path << "' for writing\n";
        return 2;
    }
    out << body;
    return 0;
}

udw::SweepAxis parse_axis(const std::string& name) {
    if (name == "L_over_sigma") return udw::SweepAxis::L_over_sigma;
    if (name == "dz_over_sigma") return udw::SweepAxis::dz_over_sigma;
    if (name == "gapB") return udw::SweepAxis::gapB;
    if (name == "gapC") return udw::SweepAxis::gapC;
    return udw::SweepAxis::gapBC_grid;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coherence harvesting by three static detectors beside a reflecting boundary"};
    app.set_version_flag("--version", std::string("udwharvest v") + udw::kVersion);
    app.set_config("--config", "", "flat key = value configuration file");
    app.require_subcommand(1);

    CommonOptions point_opt, sweep_opt, state_opt;
    std::string validate_output{"-"};

    auto* point = app.add_subcommand("point", "evaluate one parameter point, emit one CSV row");
    add_geometry_options(point, point_opt);
    point->add_option("--outputs", point_opt.outputs, "column groups")->delimiter(',');
    add_output_option(point, point_opt);

    auto* sweep = app.add_subcommand("sweep", "sweep one axis (or the gap grid), emit CSV");
    add_geometry_options(sweep, sweep_opt);
    std::string axis_name{"L_over_sigma"};
    double start = 0.5, stop = 5.0;
    int steps = 20;
    sweep->add_option("--axis", axis_name, "L_over_sigma | dz_over_sigma | gapB | gapC | gapBC_grid")
        ->check(CLI::IsMember(
            {"L_over_sigma", "dz_over_sigma", "gapB", "gapC", "gapBC_grid"}))
        ->capture_default_str();
    sweep->add_option("--start", start, "axis start")->capture_default_str();
    sweep->add_option("--stop", stop, "axis stop")->capture_default_str();
    sweep->add_option("--steps", steps, "axis point count (>= 2)")->capture_default_str();
    sweep->add_option("--threads", sweep_opt.threads, "worker threads (results identical)")
        ->capture_default_str();
    sweep->add_option("--outputs", sweep_opt.outputs, "column groups")->delimiter(',');
    add_output_option(sweep, sweep_opt);

    auto* validate = app.add_subcommand(
        "validate", "cross-check the closed forms against the quadrature oracle");
    bool quick = false;
    int vthreads = 1;
    validate->add_flag("--quick", quick, "small smoke grid instead of the full one");
    validate->add_option("--threads", vthreads, "worker threads")->capture_default_str();
    validate->add_option("--output", validate_output, "report file, '-' for stdout")
        ->envname("UDWHARVEST_OUTPUT")
        ->capture_default_str();

    auto* state = app.add_subcommand("state", "dump the 8x8 joint state at a parameter point");
    add_geometry_options(state, state_opt);
    add_output_option(state, state_opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (point->parsed()) {
            udw::PointConfig pc{build_geometry(point_opt), point_opt.lambda};
            if (pc.geometry.gap_order_warning)
                std::cerr << "note: gap ordering gapC >= gapB >= gapA violated (advisory)\n";
            std::ostringstream body;
            udw::write_point_csv(pc, point_opt.outputs, body);
            return emit(point_opt.output_path, body.str());
        }
        if (sweep->parsed()) {
            udw::SweepSpec spec;
            spec.kind = sweep_opt.geometry == "orthogonal" ? udw::GeometryKind::Orthogonal
                                                           : udw::GeometryKind::Parallel;
            if (sweep_opt.geometry == "general")
                throw CLI::ValidationError("sweep supports parallel and orthogonal geometries");
            spec.L = sweep_opt.L;
            spec.dz = sweep_opt.dz;
            spec.gaps = sweep_opt.gaps;
            spec.axis = parse_axis(axis_name);
            spec.start = start;
            spec.stop = stop;
            spec.steps = steps;
            spec.lambda = sweep_opt.lambda;
            spec.outputs = sweep_opt.outputs;
            spec.threads = sweep_opt.threads;
            std::ostringstream body;
            udw::run_sweep(spec, body);
            return emit(sweep_opt.output_path, body.str());
        }
        if (validate->parsed()) {
            const udw::ValidationReport report =
                udw::run_validate(udw::QuadratureSettings::defaults(), {quick, vthreads});
            std::ostringstream body;
            udw::write_validation_report(report, body);
            const int rc = emit(validate_output, body.str());
            if (rc != 0) return rc;
            return report.all_pass ? 0 : 1;
        }
        if (state->parsed()) {
            udw::PointConfig pc{build_geometry(state_opt), state_opt.lambda};
            std::ostringstream body;
            udw::dump_state(pc, body);
            return emit(state_opt.output_path, body.str());
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
