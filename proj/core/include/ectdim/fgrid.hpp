#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ectdim/forward.hpp"
#include "ectdim/probe.hpp"

namespace ectdim::forward {

enum class GridSpacing { linear, log };

/// Tabulated dimensionless map F(pi2, pi3) on a rectangular lattice.
/// values is row-major over pi2: values[i * n3 + j] = F(pi2_axis[i], pi3_axis[j]).
struct FGrid {
    std::vector<double> pi2_axis;
    std::vector<double> pi3_axis;
    std::vector<std::complex<double>> values;
    std::uint64_t probe_tag = 0;

    std::size_t n2() const { return pi2_axis.size(); }
    std::size_t n3() const { return pi3_axis.size(); }

    const std::complex<double>& at(std::size_t i, std::size_t j) const {
        return values[i * n3() + j];
    }
    std::complex<double>& at(std::size_t i, std::size_t j) {
        return values[i * n3() + j];
    }

    /// Fractional index of a physical coordinate (piecewise linear between
    /// samples, clamped extrapolation by the end slopes). Inverse of
    /// pi2_at / pi3_at.
    double x_of_pi2(double pi2) const;
    double y_of_pi3(double pi3) const;
    double pi2_at(double x) const;
    double pi3_at(double y) const;

    /// Throws std::invalid_argument on broken invariants (axes not strictly
    /// increasing, size mismatch, non-finite values).
    void validate() const;
};

struct GridBuildParams {
    double pi2_min = 2.82;
    double pi2_max = 28.2;
    double pi3_min = 4.2e-3;
    double pi3_max = 0.42;
    std::size_t n2 = 200;
    std::size_t n3 = 200;
    GridSpacing spacing = GridSpacing::log;
    double sigma_ref = 35.0e6;  // S/m; immaterial by dimensional collapse
    double rel_tol = 1e-9;
    unsigned threads = 0;  // 0 = hardware concurrency
};

/// Tabulates F by picking, for every lattice point, the representative
/// physical tuple (sigma_ref, omega solved from pi2, dh solved from pi3),
/// running the forward model and normalizing to pi1. Lattice points are
/// independent, so the result is identical for any thread count.
FGrid compute_f_grid(const ProbeGeometry& probe, const GridBuildParams& params);

/// |dZ| ~ |F| * pi2^2 must increase strictly along every pi3 row for the
/// frequency response to be monotone at fixed (sigma, dh). Checked at build
/// time by callers that care; returns false on the first violation.
bool monotone_frequency_response(const FGrid& grid);

/// Versioned binary format (magic, version, probe tag, axes, interleaved
/// complex values, little-endian doubles). Writes are atomic
/// (temp file + rename).
void save_grid(const FGrid& grid, const std::string& path);
FGrid load_grid(const std::string& path);

/// Plot-friendly export: header "pi2,pi3,re_f,im_f", one row per lattice point.
void export_grid_csv(const FGrid& grid, const std::string& path);

}  // namespace ectdim::forward
