#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ectdim/contour.hpp"
#include "ectdim/intersect.hpp"
#include "ectdim/regions.hpp"

namespace ectdim::inversion {

struct EstimateOptions {
    double region_k = 10.0;
    double blind_boundary = 3.0;  // pi2*pi3 threshold; per-grid configuration
    double cluster_radius = 1.0;  // grid cells
    bool newton_refine = true;
    // A cluster counts as a genuine root of F = pi1 only when at least
    // min_contributing functionals agree and the curves cross at a
    // resolvable angle. Two genuine roots further apart than
    // ambiguity_separation cells mean the measurement cannot decide between
    // them (the thickness-blind fiber) and the frequency is discarded.
    std::size_t min_contributing = 3;
    double min_transversality = 0.01;
    double ambiguity_separation = 5.0;  // grid cells
};

/// Outcome of one single-frequency inversion. When no intersection lands in
/// a feasible region the record is not accepted and `region` (when present)
/// names where the best cluster fell, so the caller can discard the
/// frequency and move on.
struct EstimateRecord {
    double omega = 0.0;
    int repeat_index = 1;
    std::optional<IntersectionPoint> point;
    std::optional<RegionLabel> region;
    double sigma_hat = 0.0;  // S/m, only meaningful when accepted
    double dh_hat = 0.0;     // m, only meaningful when accepted
    bool accepted = false;
    std::string note;
};

/// Level curves of Re/Im/|.|/phase of pi1 = to_pi1(dz) intersected on the
/// grid; the best feasible cluster (smallest residual, then smallest pi2) is
/// refined by one Newton step on the bilinear (Re, Im) interpolants and
/// mapped back to sigma = (2 nu0/omega)(pi2/D)^2 and dh = D pi3.
/// The decision never uses the true plate parameters: acceptance comes from
/// the measured intersection position alone.
EstimateRecord estimate_single_frequency(std::complex<double> dz_meas, double omega,
                                         const forward::ProbeGeometry& probe,
                                         const forward::FGrid& grid,
                                         const EstimateOptions& opts = {});

/// Vertex-wise map of a (pi2, pi3) level curve into the (sigma, dh) plane
/// for the frequency the curve was measured at.
/// Requires curve.omega (std::invalid_argument otherwise; also when it
/// disagrees with the omega argument).
std::vector<std::vector<Point2>> map_curve_to_physical(const LevelCurve& curve,
                                                       double omega, double D);

struct FusedEstimate {
    double sigma = 0.0;        // S/m
    double dh = 0.0;           // m
    double sigma_std = 0.0;    // sample std over surviving records
    double dh_std = 0.0;
    std::size_t n_accepted = 0;
    std::size_t n_used = 0;    // after outlier rejection
    std::vector<std::size_t> rejected;  // indices into the input span
    std::vector<double> residuals;      // per accepted record, grid cells
};

/// Mean of the accepted per-frequency estimates after 3xMAD outlier
/// rejection (a record is dropped when either its sigma or its dh estimate
/// sits further than 3 MAD from the respective median).
/// Throws InfeasibleError when no record is accepted, naming the regions
/// encountered.
FusedEstimate fuse_multi_frequency(std::span<const EstimateRecord> records);

}  // namespace ectdim::inversion
