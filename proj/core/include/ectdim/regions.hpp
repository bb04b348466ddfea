#pragma once

#include <string>

namespace ectdim::inversion {

/// Operating regions of the (pi2, pi3) plane, a 3x3 partition:
/// rows by pi3 (>= k | between | <= 1/k), columns by pi2*pi3
/// (<= 1/k | between | >= blind boundary).
///
///        pi2*pi3<=1/k   middle      pi2*pi3>=boundary
///  pi3>=k     (a)         (b)            (c)
///  middle     (d)         (e)            (f)
///  pi3<=1/k   (g)         (h)            (i)
///
/// (d), (e), (h): both sigma and dh retrievable (feasibility region).
/// (g): only the sigma*dh product. Everything else: sigma only.
enum class Region { a, b, c, d, e, f, g, h, i };

struct Retrievable {
    bool sigma = false;
    bool dh = false;
    bool sigma_dh_product = false;
};

struct RegionLabel {
    Region region = Region::e;
    Retrievable retrievable;
};

const char* region_name(Region r);
bool region_feasible(Region r);

/// k is the "much greater than one" margin; blind_boundary is the numeric
/// pi2*pi3 threshold beyond which level curves run vertical and the data
/// carries no thickness information.
/// Throws std::domain_error for non-positive pi2/pi3.
RegionLabel classify_region(double pi2, double pi3, double k = 10.0,
                            double blind_boundary = 3.0);

}  // namespace ectdim::inversion
