#pragma once

#include <array>
#include <cstdint>
#include <numbers>

namespace ectdim::forward {

/// Free-space magnetic constants. nu0 is the magnetic reluctance of vacuum,
/// defined as 1/mu0.
struct PhysicalConstants {
    static constexpr double mu0 = 4.0e-7 * std::numbers::pi;  // H/m
    static constexpr double nu0 = 1.0 / mu0;                  // m/H
};

/// T/R probe: two coaxial coils with common radii, receiver below driver.
/// Lengths in metres. theta (tilt) must be zero: the axisymmetric model
/// cannot represent a tilted probe.
struct ProbeGeometry {
    double r1 = 0.0;  // inner coil radius
    double r2 = 0.0;  // outer coil radius (also the characteristic length D)
    double h1 = 0.0;  // receiver coil height
    double h2 = 0.0;  // driver coil height
    double d = 0.0;   // axial separation between the coils
    double l0 = 0.0;  // lift-off
    int n1 = 0;       // receiver turns
    int n2 = 0;       // driver turns
    double theta = 0.0;

    double characteristic_length() const { return r2; }

    /// Normalized shape (r1/D, h1/D, h2/D, d/D) plus l0/D; everything the
    /// dimensionless map depends on besides (pi2, pi3).
    std::array<double, 5> normalized_shape() const {
        const double D = r2;
        return {r1 / D, h1 / D, h2 / D, d / D, l0 / D};
    }

    /// Throws std::invalid_argument when a constraint is violated.
    void validate() const;
};

struct PlateSpec {
    double sigma = 0.0;  // electrical conductivity, S/m
    double dh = 0.0;     // thickness, m

    void validate() const;
};

/// Hash of the normalized probe shape; grids carry it so estimation can
/// reject a grid built for a different probe.
std::uint64_t probe_shape_tag(const ProbeGeometry& probe);

}  // namespace ectdim::forward
