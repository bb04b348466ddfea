#pragma once

#include <complex>
#include <cstdint>
#include <unordered_map>

#include "ectdim/probe.hpp"

namespace ectdim::forward {

/// Electromagnetic penetration depth sqrt(2 nu0 / (omega sigma)).
/// Throws std::domain_error for non-positive inputs.
double skin_depth(double omega, double sigma);

/// Integral of x J1(x) over [x1, x2] to ~1e-14 relative accuracy.
/// Requires 0 <= x1 <= x2; x1 > x2 throws std::invalid_argument.
double coil_radial_integral(double x1, double x2);

struct IntegrationOptions {
    double rel_tol = 1e-9;
};

/// Change in mutual impedance dZ = Z_plate - Z_air of the coil pair at
/// angular frequency omega over a nonmagnetic conductive plate, from the
/// axisymmetric semi-analytical (Dodd-Deeds) layered-conductor model:
///
///   dZ = j w pi mu0 N1 N2 / [h1 h2 (r2-r1)^2]
///        * Int_0^inf k^-6 I(k r1, k r2)^2
///          (e^{-k z1} - e^{-k z2}) (e^{-k z3} - e^{-k z4}) G(k) dk
///
/// with receiver span [z1,z2] = [l0, l0+h1], driver span [z3,z4] =
/// [l0+h1+d, l0+h1+d+h2], k1 = sqrt(k^2 + j w mu0 sigma) on the branch
/// Re(k1) >= 0, and G the finite-thickness reflection coefficient
///
///   G(k) = (k^2 - k1^2)(1 - E) / [(k+k1)^2 - (k-k1)^2 E],  E = e^{-2 k1 dh}.
///
/// This G satisfies the three physical gates: G == 0 when sigma -> 0,
/// G -> (k-k1)/(k+k1) when dh -> inf, and the resulting dZ keeps
/// Re(dZ) >= 0, Im(dZ) <= 0 for valid nonmagnetic inputs. Writing G with
/// decaying exponentials only keeps thick plates overflow-free.
///
/// Throws ConvergenceError when the improper integral cannot reach rel_tol.
std::complex<double> mutual_impedance_delta(const ProbeGeometry& probe,
                                            const PlateSpec& plate, double omega,
                                            const IntegrationOptions& opts = {});

/// Same integral with the half-space (dh -> inf) reflection coefficient
/// (k-k1)/(k+k1); the thick-plate limit of mutual_impedance_delta.
std::complex<double> mutual_impedance_delta_halfspace(const ProbeGeometry& probe,
                                                      double sigma, double omega,
                                                      const IntegrationOptions& opts = {});

/// dZ -> pi1 = dZ nu0 / (N1 N2 omega D) and back.
std::complex<double> to_pi1(std::complex<double> dz, double omega,
                            const ProbeGeometry& probe);
std::complex<double> from_pi1(std::complex<double> pi1, double omega,
                              const ProbeGeometry& probe);

/// pi2 = D / skin_depth = D sqrt(omega sigma / (2 nu0)); pi3 = dh / D.
double pi2_of(double omega, double sigma, double D);
double pi3_of(double dh, double D);

/// Inverse maps: sigma = (2 nu0 / omega) (pi2 / D)^2, dh = D pi3.
double sigma_of_pi2(double pi2, double omega, double D);
double dh_of_pi3(double pi3, double D);

namespace detail {

/// Per-thread cache of the probe-only part of the integrand, keyed by the
/// bit pattern of the normalized wavenumber. Values are bit-identical to a
/// fresh evaluation, so caching never affects results. Not thread-safe;
/// use one per thread and never across probes.
struct CoilKernelCache {
    std::unordered_map<std::uint64_t, double> values;
};

/// Axial spans of the two coils, normalized by D. The integrand treats the
/// receiver and driver spans symmetrically (mutual-impedance reciprocity).
struct CoilSpans {
    double rho1 = 0.0;  // inner radius / D; outer is 1 by construction
    double rx_lo = 0.0, rx_hi = 0.0;
    double tx_lo = 0.0, tx_hi = 0.0;
};

std::complex<double> dimensionless_pi1_spans(const CoilSpans& spans, double pi2,
                                             double pi3, const IntegrationOptions& opts,
                                             CoilKernelCache* cache = nullptr);

/// Dimensionless impedance pi1 = F(pi2, pi3) for a normalized probe shape
/// (r1/D, h1/D, h2/D, d/D, l0/D). The physical entry points wrap this.
std::complex<double> dimensionless_pi1(const std::array<double, 5>& shape, double pi2,
                                       double pi3, const IntegrationOptions& opts,
                                       CoilKernelCache* cache = nullptr);

std::complex<double> dimensionless_pi1_halfspace(const std::array<double, 5>& shape,
                                                 double pi2,
                                                 const IntegrationOptions& opts);

}  // namespace detail

}  // namespace ectdim::forward
