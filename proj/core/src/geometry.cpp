#include "udw/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace udw {

namespace {

void check_gap(double gap) {
    if (!std::isfinite(gap) || gap < 0.0)
        throw std::domain_error("geometry: energy gap must be finite and >= 0");
}

void check_detector(const Detector& d) {
    check_gap(d.gap);
    for (double c : d.position)
        if (!std::isfinite(c))
            throw std::domain_error("geometry: non-finite detector coordinate");
    if (d.position[2] < 0.0)
        throw std::domain_error("geometry: detectors must satisfy z >= 0");
}

bool ordering_violated(const std::array<double, 3>& gaps) {
    return !(gaps[2] >= gaps[1] && gaps[1] >= gaps[0]);
}

} // namespace

GeometryConfig make_parallel(double L, double dz, const std::array<double, 3>& gaps) {
    if (!(std::isfinite(L) && L > 0.0))
        throw std::domain_error("make_parallel: L must be finite and > 0");
    if (!(std::isfinite(dz) && dz >= 0.0))
        throw std::domain_error("make_parallel: dz must be finite and >= 0");
    for (double g : gaps) check_gap(g);
    GeometryConfig cfg;
    cfg.kind = GeometryKind::Parallel;
    cfg.L = L;
    cfg.dz = dz;
    cfg.detectors = {Detector{DetectorLabel::A, gaps[0], {0.0, 0.0, dz}},
                     Detector{DetectorLabel::B, gaps[1], {L, 0.0, dz}},
                     Detector{DetectorLabel::C, gaps[2], {2.0 * L, 0.0, dz}}};
    cfg.gap_order_warning = ordering_violated(gaps);
    return cfg;
}

GeometryConfig make_orthogonal(double L, double dz, const std::array<double, 3>& gaps) {
    if (!(std::isfinite(L) && L > 0.0))
        throw std::domain_error("make_orthogonal: L must be finite and > 0");
    if (!(std::isfinite(dz) && dz >= 0.0))
        throw std::domain_error("make_orthogonal: dz must be finite and >= 0");
    for (double g : gaps) check_gap(g);
    GeometryConfig cfg;
    cfg.kind = GeometryKind::Orthogonal;
    cfg.L = L;
    cfg.dz = dz;
    cfg.detectors = {Detector{DetectorLabel::A, gaps[0], {0.0, 0.0, dz}},
                     Detector{DetectorLabel::B, gaps[1], {0.0, 0.0, dz + L}},
                     Detector{DetectorLabel::C, gaps[2], {0.0, 0.0, dz + 2.0 * L}}};
    cfg.gap_order_warning = ordering_violated(gaps);
    return cfg;
}

GeometryConfig make_general(const std::array<Detector, 3>& detectors) {
    for (const auto& d : detectors) check_detector(d);
    if (detectors[0].label != DetectorLabel::A || detectors[1].label != DetectorLabel::B ||
        detectors[2].label != DetectorLabel::C)
        throw std::domain_error("make_general: detectors must be labeled A, B, C in order");
    GeometryConfig cfg;
    cfg.kind = GeometryKind::GeneralStatic;
    cfg.L = 0.0;
    cfg.dz = 0.0;
    cfg.detectors = detectors;
    cfg.gap_order_warning = ordering_violated(
        {detectors[0].gap, detectors[1].gap, detectors[2].gap});
    return cfg;
}

PairDistances pair_distances(const Detector& a, const Detector& b) {
    check_detector(a);
    check_detector(b);
    const double dx = a.position[0] - b.position[0];
    const double dy = a.position[1] - b.position[1];
    const double dzz = a.position[2] - b.position[2];
    const double perp2 = dx * dx + dy * dy;
    const double direct = std::sqrt(perp2 + dzz * dzz);
    if (direct == 0.0)
        throw std::domain_error("pair_distances: coincident detectors (degenerate geometry)");
    const double zsum = a.position[2] + b.position[2];
    const double image = std::sqrt(perp2 + zsum * zsum);
    return {direct, image};
}

} // namespace udw
