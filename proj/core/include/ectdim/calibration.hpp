#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ectdim/fgrid.hpp"
#include "ectdim/measurement.hpp"
#include "ectdim/probe.hpp"

namespace ectdim::pipeline {

/// Per-frequency complex calibration factor c(omega), the ratio of model to
/// measured impedance for the reference plates. Applied multiplicatively to
/// raw measurements; Re and Im interpolate linearly in omega, with constant
/// hold beyond the table ends.
class CalibrationTable {
public:
    struct Entry {
        double omega = 0.0;
        std::complex<double> c{1.0, 0.0};
    };

    CalibrationTable() = default;  // identity
    explicit CalibrationTable(std::vector<Entry> entries);

    struct Evaluation {
        std::complex<double> c{1.0, 0.0};
        bool extrapolated = false;
    };
    Evaluation evaluate(double omega) const;

    bool identity() const { return entries_.empty(); }
    const std::vector<Entry>& entries() const { return entries_; }
    const std::vector<std::string>& notes() const { return notes_; }
    void add_note(std::string note) { notes_.push_back(std::move(note)); }

private:
    std::vector<Entry> entries_;  // strictly increasing omega
    std::vector<std::string> notes_;
};

/// Returns the record with dz multiplied by the interpolated c(omega).
MeasurementRecord apply_calibration(const CalibrationTable& table,
                                    const MeasurementRecord& m);

struct ReferencePlate {
    forward::PlateSpec plate;
    std::vector<MeasurementRecord> measurements;
};

/// c(omega) = mean over reference plates of model dZ / measured dZ, per
/// frequency shared by all plates. Near-zero measured values are excluded
/// with a note on the table. The grid is only consulted to confirm it
/// matches the probe the references were measured with.
/// Throws std::invalid_argument on empty input or when no shared frequency
/// survives.
CalibrationTable fit_calibration(const std::vector<ReferencePlate>& references,
                                 const forward::ProbeGeometry& probe,
                                 const forward::FGrid& grid);

/// CSV round trip, header "frequency_hz,re_c,im_c".
void save_calibration_csv(const CalibrationTable& table, const std::string& path);
CalibrationTable load_calibration_csv(const std::string& path);

}  // namespace ectdim::pipeline
