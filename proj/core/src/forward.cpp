#include "ectdim/forward.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "ectdim/quadrature.hpp"

namespace ectdim::forward {

namespace {

using policy_t =
    boost::math::policies::policy<boost::math::policies::promote_double<false>>;

double bessel_j1(double x) { return boost::math::cyl_bessel_j(1, x, policy_t()); }

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= kFnvPrime;
    }
    return h;
}

}  // namespace

void ProbeGeometry::validate() const {
    if (!(0.0 < r1 && r1 < r2)) {
        throw std::invalid_argument("probe requires 0 < r1 < r2");
    }
    if (!(h1 > 0.0 && h2 > 0.0 && d > 0.0 && l0 > 0.0)) {
        throw std::invalid_argument("probe requires positive h1, h2, d, l0");
    }
    if (n1 < 1 || n2 < 1) {
        throw std::invalid_argument("probe requires at least one turn per coil");
    }
    if (theta != 0.0) {
        throw std::invalid_argument(
            "tilted probes (theta != 0) are outside the axisymmetric model");
    }
}

void PlateSpec::validate() const {
    if (!(sigma > 0.0)) throw std::invalid_argument("plate conductivity must be positive");
    if (!(dh > 0.0)) throw std::invalid_argument("plate thickness must be positive");
}

std::uint64_t probe_shape_tag(const ProbeGeometry& probe) {
    const auto shape = probe.normalized_shape();
    std::uint64_t h = kFnvOffset;
    for (double v : shape) {
        h = fnv1a(h, &v, sizeof(v));
    }
    return h;
}

double skin_depth(double omega, double sigma) {
    if (!(omega > 0.0)) throw std::domain_error("skin_depth: omega must be positive");
    if (!(sigma > 0.0)) throw std::domain_error("skin_depth: sigma must be positive");
    return std::sqrt(2.0 * PhysicalConstants::nu0 / (omega * sigma));
}

double coil_radial_integral(double x1, double x2) {
    if (x1 < 0.0 || x1 > x2) {
        throw std::invalid_argument("coil_radial_integral requires 0 <= x1 <= x2");
    }
    if (x1 == x2) return 0.0;
    // J1 oscillates with period 2*pi; panels no wider than 2 keep the
    // 16-point rule at machine accuracy.
    const auto n = static_cast<std::size_t>(std::ceil((x2 - x1) / 2.0));
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = x1 + (x2 - x1) * static_cast<double>(i) / static_cast<double>(n);
        const double b = x1 + (x2 - x1) * static_cast<double>(i + 1) / static_cast<double>(n);
        sum += quad::gauss_legendre_16([](double x) { return x * bessel_j1(x); }, a, b);
    }
    return sum;
}

double pi2_of(double omega, double sigma, double D) {
    return D * std::sqrt(omega * sigma / (2.0 * PhysicalConstants::nu0));
}

double pi3_of(double dh, double D) { return dh / D; }

double sigma_of_pi2(double pi2, double omega, double D) {
    const double ratio = pi2 / D;
    return 2.0 * PhysicalConstants::nu0 / omega * ratio * ratio;
}

double dh_of_pi3(double pi3, double D) { return D * pi3; }

std::complex<double> to_pi1(std::complex<double> dz, double omega,
                            const ProbeGeometry& probe) {
    if (!(omega > 0.0)) throw std::domain_error("to_pi1: omega must be positive");
    const double scale = static_cast<double>(probe.n1) * static_cast<double>(probe.n2) *
                         omega * probe.characteristic_length();
    return dz * (PhysicalConstants::nu0 / scale);
}

std::complex<double> from_pi1(std::complex<double> pi1, double omega,
                              const ProbeGeometry& probe) {
    if (!(omega > 0.0)) throw std::domain_error("from_pi1: omega must be positive");
    const double scale = static_cast<double>(probe.n1) * static_cast<double>(probe.n2) *
                         omega * probe.characteristic_length();
    return pi1 * (scale / PhysicalConstants::nu0);
}

namespace detail {

namespace {

/// Probe-only factor of the normalized integrand:
///   K(u) = (I(u rho1, u) / u^3)^2
///          * (e^{-u rx_lo} - e^{-u rx_hi}) (e^{-u tx_lo} - e^{-u tx_hi})
/// with all lengths normalized by D. Real and non-negative, and symmetric in
/// the two spans.
double coil_kernel(const CoilSpans& s, double u) {
    const double i3 = coil_radial_integral(u * s.rho1, u) / (u * u * u);
    const double span_rx = std::exp(-u * s.rx_lo) * (1.0 - std::exp(-u * (s.rx_hi - s.rx_lo)));
    const double span_tx = std::exp(-u * s.tx_lo) * (1.0 - std::exp(-u * (s.tx_hi - s.tx_lo)));
    return i3 * i3 * span_rx * span_tx;
}

double cached_coil_kernel(const CoilSpans& s, double u, CoilKernelCache* cache) {
    if (cache == nullptr) return coil_kernel(s, u);
    const std::uint64_t key = std::bit_cast<std::uint64_t>(u);
    auto it = cache->values.find(key);
    if (it != cache->values.end()) return it->second;
    const double v = coil_kernel(s, u);
    cache->values.emplace(key, v);
    return v;
}

CoilSpans spans_of_shape(const std::array<double, 5>& shape) {
    const double rho1 = shape[0];
    const double eta1 = shape[1];
    const double eta2 = shape[2];
    const double dd = shape[3];
    const double lam = shape[4];
    CoilSpans s;
    s.rho1 = rho1;
    s.rx_lo = lam;
    s.rx_hi = lam + eta1;
    s.tx_lo = lam + eta1 + dd;
    s.tx_hi = lam + eta1 + dd + eta2;
    return s;
}

/// Finite-thickness reflection coefficient in normalized variables,
/// u1 = sqrt(u^2 + 2 j pi2^2), E = e^{-2 u1 pi3}:
///   G = (u^2 - u1^2)(1 - E) / [(u + u1)^2 - (u - u1)^2 E]
/// Only decaying exponentials appear, so thick plates cannot overflow.
std::complex<double> reflection_finite(double u, double pi2, double pi3) {
    const std::complex<double> u1 =
        std::sqrt(std::complex<double>(u * u, 2.0 * pi2 * pi2));
    const std::complex<double> e = std::exp(-2.0 * u1 * pi3);
    const std::complex<double> num =
        std::complex<double>(0.0, -2.0 * pi2 * pi2) * (1.0 - e);
    const std::complex<double> sum = u + u1;
    const std::complex<double> dif = u - u1;
    return num / (sum * sum - dif * dif * e);
}

std::complex<double> reflection_halfspace(double u, double pi2) {
    const std::complex<double> u1 =
        std::sqrt(std::complex<double>(u * u, 2.0 * pi2 * pi2));
    return (u - u1) / (u + u1);
}

template <typename Reflection>
std::complex<double> integrate_pi1(const CoilSpans& spans, const IntegrationOptions& opts,
                                   CoilKernelCache* cache, Reflection&& gamma) {
    const double eta1 = spans.rx_hi - spans.rx_lo;
    const double eta2 = spans.tx_hi - spans.tx_lo;
    if (!(spans.rho1 > 0.0 && spans.rho1 < 1.0 && eta1 > 0.0 && eta2 > 0.0 &&
          spans.rx_lo > 0.0 && spans.tx_lo > 0.0)) {
        throw std::invalid_argument("invalid normalized coil spans");
    }

    // Slowest decay of the span product: e^{-u (rx_lo + tx_lo)}.
    const double decay = spans.rx_lo + spans.tx_lo;
    double u_max = 60.0 / decay;

    auto integrand = [&](double u) {
        return cached_coil_kernel(spans, u, cache) * gamma(u);
    };

    quad::AdaptiveOptions qopts;
    qopts.rel_tol = opts.rel_tol;

    for (int attempt = 0;; ++attempt) {
        std::vector<double> breaks;
        breaks.push_back(0.0);
        for (double b = u_max / 1024.0; b < u_max; b *= 2.0) breaks.push_back(b);
        breaks.push_back(u_max);

        auto result = quad::integrate_adaptive(integrand, breaks, qopts);

        // Tail bound: |integrand| decays at least like e^{-u decay}, so the
        // remainder is below |f(u_max)| / decay.
        const double tail = std::abs(integrand(u_max)) / decay;
        if (tail <= std::max(opts.rel_tol * std::abs(result.value), qopts.abs_floor) ||
            attempt >= 2) {
            const double prefactor =
                std::numbers::pi / (eta1 * eta2 * (1.0 - spans.rho1) * (1.0 - spans.rho1));
            return std::complex<double>(0.0, prefactor) * result.value;
        }
        u_max *= 2.0;
    }
}

}  // namespace

std::complex<double> dimensionless_pi1_spans(const CoilSpans& spans, double pi2,
                                             double pi3, const IntegrationOptions& opts,
                                             CoilKernelCache* cache) {
    return integrate_pi1(spans, opts, cache,
                         [pi2, pi3](double u) { return reflection_finite(u, pi2, pi3); });
}

std::complex<double> dimensionless_pi1(const std::array<double, 5>& shape, double pi2,
                                       double pi3, const IntegrationOptions& opts,
                                       CoilKernelCache* cache) {
    return dimensionless_pi1_spans(spans_of_shape(shape), pi2, pi3, opts, cache);
}

std::complex<double> dimensionless_pi1_halfspace(const std::array<double, 5>& shape,
                                                 double pi2,
                                                 const IntegrationOptions& opts) {
    return integrate_pi1(spans_of_shape(shape), opts, nullptr,
                         [pi2](double u) { return reflection_halfspace(u, pi2); });
}

}  // namespace detail

std::complex<double> mutual_impedance_delta(const ProbeGeometry& probe,
                                            const PlateSpec& plate, double omega,
                                            const IntegrationOptions& opts) {
    probe.validate();
    plate.validate();
    if (!(omega > 0.0)) throw std::domain_error("mutual_impedance_delta: omega > 0 required");

    const double D = probe.characteristic_length();
    const double pi2 = pi2_of(omega, plate.sigma, D);
    const double pi3 = pi3_of(plate.dh, D);
    const auto pi1 = detail::dimensionless_pi1(probe.normalized_shape(), pi2, pi3, opts);
    return from_pi1(pi1, omega, probe);
}

std::complex<double> mutual_impedance_delta_halfspace(const ProbeGeometry& probe,
                                                      double sigma, double omega,
                                                      const IntegrationOptions& opts) {
    probe.validate();
    if (!(sigma > 0.0)) throw std::domain_error("halfspace: sigma > 0 required");
    if (!(omega > 0.0)) throw std::domain_error("halfspace: omega > 0 required");

    const double D = probe.characteristic_length();
    const double pi2 = pi2_of(omega, sigma, D);
    const auto pi1 = detail::dimensionless_pi1_halfspace(probe.normalized_shape(), pi2, opts);
    return from_pi1(pi1, omega, probe);
}

}  // namespace ectdim::forward
