#pragma once

#include <set>
#include <span>
#include <vector>

#include "ectdim/contour.hpp"

namespace ectdim::inversion {

/// Consensus crossing point of two or more level curves. Coordinates are
/// physical (pi2, pi3); the residual is the worst distance from the point to
/// any contributing curve, measured in grid cells. transversality is the
/// sine of the widest crossing angle inside the cluster: near zero means the
/// curves only graze each other and the point position is unreliable along
/// the tangent direction.
struct IntersectionPoint {
    double pi2 = 0.0;
    double pi3 = 0.0;
    double residual = 0.0;
    double transversality = 0.0;
    std::set<Functional> contributing;
};

struct IntersectOptions {
    double cluster_radius = 1.0;  // grid cells
};

/// Pairwise segment-segment intersections between curves of distinct
/// functionals, single-link clustered within cluster_radius (in grid-cell
/// units), each cluster reduced to the least-squares point of its
/// contributing segments. Result sorted by residual, ascending.
/// Requires >= 2 curves of distinct functionals (std::invalid_argument
/// otherwise); returns an empty list when nothing crosses.
std::vector<IntersectionPoint> intersect_curves(const forward::FGrid& grid,
                                                std::span<const LevelCurve> curves,
                                                const IntersectOptions& opts = {});

}  // namespace ectdim::inversion
