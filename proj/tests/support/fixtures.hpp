#pragma once

#include <memory>
#include <string>

#include "ectdim/dimensions.hpp"
#include "ectdim/fgrid.hpp"
#include "ectdim/probe.hpp"

namespace fixtures {

/// The T/R probe used throughout: r1 = 23.60 mm, r2 = 23.95 mm,
/// h1 = h2 = 6 mm, d = 2.20 mm, l0 = 1 mm, 17 turns per coil.
ectdim::forward::ProbeGeometry bench_probe();

/// RLC series circuit in the frequency domain over the (A, V, T) basis,
/// repeating {R, E, omega}, current I dependent.
ectdim::dims::DimensionalSystem rlc_system();

/// Eddy-current system over the (L, T, Ohm) basis: impedance variation,
/// conductivity, vacuum reluctance, angular frequency, thickness, lift-off,
/// probe size, shape vector, tilt; repeating {nu0, omega, D}.
ectdim::dims::DimensionalSystem ect_system();

/// Default 200x200 log-spaced grid for bench_probe(), built once per process
/// and cached on disk under the working directory so repeated test runs skip
/// the build.
std::shared_ptr<const ectdim::forward::FGrid> default_grid();

/// Path of the on-disk copy of default_grid() (builds it if needed).
std::string default_grid_path();

}  // namespace fixtures
