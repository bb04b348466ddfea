#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ectdim/probe.hpp"

namespace ectdim::pipeline {

struct MeasurementRecord {
    double omega = 0.0;  // rad/s
    std::complex<double> dz;
    int repeat_index = 1;
    std::string plate_id;  // optional
};

/// Multiplicative relative noise (rho) plus an absolute complex floor
/// (abs_sigma, ohms), both circular complex Gaussian.
struct NoiseModel {
    double rho = 0.0;
    double abs_sigma = 0.0;
};

/// Forward-model measurements dz (1 + rho g) + abs_sigma g', with g, g'
/// standard complex Gaussians from a seeded generator; identical output for
/// identical arguments. Frequencies are taken in Hz and emitted sorted
/// ascending, repeats 1..n within each frequency.
std::vector<MeasurementRecord> synthesize_measurements(
    const forward::ProbeGeometry& probe, const forward::PlateSpec& plate,
    std::vector<double> frequencies_hz, int repeats, const NoiseModel& noise,
    std::uint64_t seed, const std::string& plate_id = {});

/// CSV round trip, header "frequency_hz,re_ohm,im_ohm,repeat,plate_id";
/// UTF-8, LF, decimal point.
void save_measurements_csv(const std::vector<MeasurementRecord>& records,
                           const std::string& path);
std::vector<MeasurementRecord> load_measurements_csv(const std::string& path);

}  // namespace ectdim::pipeline
