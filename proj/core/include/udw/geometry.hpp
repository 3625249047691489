#pragma once

#include <array>

namespace udw {

// All lengths are in units of the switching width sigma; energy gaps are the
// dimensionless products Omega*sigma. The reflecting boundary is the plane
// z = 0 and detectors live in the half-space z >= 0.

enum class DetectorLabel { A = 0, B = 1, C = 2 };

struct Detector {
    DetectorLabel label{DetectorLabel::A};
    double gap{0.0};                         // Omega*sigma, >= 0
    std::array<double, 3> position{0, 0, 0}; // {x, y, z}, z >= 0
};

enum class GeometryKind { Parallel, Orthogonal, GeneralStatic };

struct PairDistances {
    double direct{0.0}; // |r_a - r_b|
    double image{0.0};  // distance from a to the mirror image of b
};

struct GeometryConfig {
    GeometryKind kind{GeometryKind::Parallel};
    double L{0.0};  // adjacent separation (Parallel/Orthogonal)
    double dz{0.0}; // boundary distance of the closest detector
    std::array<Detector, 3> detectors{};
    // Advisory only: set when the conventional ordering gapC >= gapB >= gapA
    // does not hold. Nothing downstream depends on the ordering.
    bool gap_order_warning{false};
};

// Three detectors on a line parallel to the boundary, x in {0, L, 2L}, z = dz.
GeometryConfig make_parallel(double L, double dz, const std::array<double, 3>& gaps);

// Three detectors on the boundary normal, z in {dz, dz+L, dz+2L}.
GeometryConfig make_orthogonal(double L, double dz, const std::array<double, 3>& gaps);

// Arbitrary static placements (labels must be A, B, C in order).
GeometryConfig make_general(const std::array<Detector, 3>& detectors);

// Direct separation and mirror-image separation of a detector pair.
// image^2 - direct^2 = 4 z_a z_b identically, so image == direct exactly
// when either detector sits on the boundary. Coincident positions throw
// std::domain_error (degenerate geometry).
PairDistances pair_distances(const Detector& a, const Detector& b);

} // namespace udw
