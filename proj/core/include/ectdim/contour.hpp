#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "ectdim/fgrid.hpp"

namespace ectdim::inversion {

enum class Functional { real_part, imag_part, magnitude, phase };

const char* functional_name(Functional f);

/// Applies the chosen real functional to a complex sample.
double apply_functional(Functional f, std::complex<double> v);

struct Point2 {
    double x = 0.0;  // pi2
    double y = 0.0;  // pi3
};

/// Iso-contour of one real functional of F in the (pi2, pi3) plane.
/// Polylines carry at least two vertices, all inside the grid bounding box.
/// `degenerate` marks the everything-equals-the-level case, where no
/// isolated contour exists.
struct LevelCurve {
    Functional functional = Functional::magnitude;
    double level = 0.0;
    std::vector<std::vector<Point2>> segments;
    std::optional<double> omega;
    bool degenerate = false;

    bool empty() const { return segments.empty(); }
};

/// Marching-squares contour of functional(F) at the given level, with linear
/// interpolation along cell edges and the cell-average rule on saddles.
/// Phase values are unwrapped cell-locally before thresholding so the
/// +-pi cut cannot produce spurious contours. A level outside the sampled
/// range yields an empty (non-degenerate) curve.
LevelCurve extract_level_curve(const forward::FGrid& grid, Functional functional,
                               double level);

}  // namespace ectdim::inversion
