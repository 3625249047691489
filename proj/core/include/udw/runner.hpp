#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "udw/oracle.hpp"
#include "udw/state.hpp"

namespace udw {

// Parameter-point evaluation, sweeps, and the oracle cross-validation run.
// Everything here is deterministic: identical inputs produce byte-identical
// CSV bodies regardless of the worker count.

struct PointConfig {
    GeometryConfig geometry{};
    double lambda{1.0}; // pure output rescale, everything inside is at lambda = 1
};

struct PointResult {
    std::array<double, 3> p{};                   // P_A, P_B, P_C (lambda-scaled)
    std::array<std::complex<double>, 3> c{};     // C_AB, C_BC, C_AC
    std::array<std::complex<double>, 3> x{};     // X_AB, X_BC, X_AC
    double c_l1{0.0};
    AdditivityCheck additivity{};
    double min_eig{0.0};
    bool gap_order_warning{false};
};

PointResult run_point(const PointConfig& config);

// Assemble the full 8x8 state at a parameter point.
TripartiteState point_state(const PointConfig& config);

enum class SweepAxis { L_over_sigma, dz_over_sigma, gapB, gapC, gapBC_grid };

struct SweepSpec {
    GeometryKind kind{GeometryKind::Parallel}; // Parallel or Orthogonal
    double L{1.0};
    double dz{1.0};
    std::array<double, 3> gaps{0.1, 0.1, 0.1};
    SweepAxis axis{SweepAxis::L_over_sigma};
    double start{0.5};
    double stop{5.0};
    int steps{20}; // >= 2; gapBC_grid emits steps^2 rows
    double lambda{1.0};
    // Output column groups: P, absC, absX, C_l1, additivity_residual.
    std::vector<std::string> outputs{"P", "absC", "absX", "C_l1", "additivity_residual"};
    int threads{1};

    void validate() const;
};

struct SweepRow {
    std::vector<double> axis_values; // one entry, or two for the gap grid
    PointResult result;
};

std::vector<SweepRow> compute_sweep(const SweepSpec& spec);

// CSV with a '#' provenance header; no timestamps, so reruns are
// byte-identical.
void run_sweep(const SweepSpec& spec, std::ostream& os);
void write_point_csv(const PointConfig& config, const std::vector<std::string>& outputs,
                     std::ostream& os);

// Labeled dump of the 8x8 matrix, 12 significant digits, plus diagnostics.
void dump_state(const PointConfig& config, std::ostream& os);

// --- oracle cross-validation ------------------------------------------------

struct ValidationRow {
    std::string quantity; // "P", "C", "X"
    std::string params;
    std::complex<double> closed{};
    std::complex<double> oracle{};
    double oracle_error{0.0};
    double difference{0.0};
    double tolerance{0.0};
    bool pass{false};
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    bool all_pass{false};
    double seconds{0.0};
    // Orthogonal pair BC admits two readings of the image distance: the
    // generic mirror construction versus a literal gap-substitution rule.
    // The audit records which one the quadrature oracle supports.
    std::string bc_audit;
    double bc_generic_diff{0.0};
    double bc_literal_diff{0.0};
};

struct ValidateOptions {
    bool quick{false};
    int threads{1};
};

ValidationReport run_validate(const QuadratureSettings& settings, const ValidateOptions& opts);
void write_validation_report(const ValidationReport& report, std::ostream& os);

// 12 significant digits, lowercase scientific.
std::string format_sci(double v);

const char* axis_name(SweepAxis axis);
const char* kind_name(GeometryKind kind);

} // namespace udw
