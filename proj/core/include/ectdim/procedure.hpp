#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ectdim/calibration.hpp"
#include "ectdim/estimate.hpp"
#include "ectdim/fgrid.hpp"
#include "ectdim/measurement.hpp"

namespace ectdim::pipeline {

struct SynthSpec {
    forward::PlateSpec plate;
    std::vector<double> frequencies_hz;
    int repeats = 1;
    NoiseModel noise;
    std::uint64_t seed = 1;
    std::string plate_id;
};

struct TruthSpec {
    double sigma = 0.0;  // S/m
    double dh = 0.0;     // m
};

/// Everything run_procedure needs: the probe, where the grid comes from
/// (file or build parameters), the calibration source (file, reference data,
/// or identity when neither is given) and the measurement source (file or
/// synthesizer). Error figures are only computed when truth is present.
struct ProcedureConfig {
    forward::ProbeGeometry probe;

    std::optional<std::string> grid_path;
    std::optional<forward::GridBuildParams> grid_build;

    std::optional<std::string> calibration_path;
    std::optional<std::vector<ReferencePlate>> calibration_references;

    std::optional<std::string> measurements_path;
    std::optional<SynthSpec> synth;

    std::optional<TruthSpec> truth;
    inversion::EstimateOptions estimate;
};

/// Figures of merit for one frequency: means over the repeats, absolute
/// relative errors of those means and the spread of the per-repeat errors
/// (all percentages).
struct FrequencyMerit {
    double omega = 0.0;
    double frequency_hz = 0.0;
    int n_total = 0;
    int n_accepted = 0;
    double sigma_mean = 0.0;  // S/m, over accepted repeats
    double dh_mean = 0.0;     // m
    std::optional<double> eps_sigma;      // %
    std::optional<double> eps_dh;         // %
    std::optional<double> std_eps_sigma;  // %, over per-repeat errors
    std::optional<double> std_eps_dh;     // %
    std::string region;  // representative region label at this frequency
    bool calibration_extrapolated = false;
};

struct MeritReport {
    std::vector<FrequencyMerit> per_frequency;

    double sigma_final = 0.0;  // S/m, mean of surviving per-frequency means
    double dh_final = 0.0;     // m
    double std_sigma = 0.0;    // S/m, spread of the per-frequency means
    double std_dh = 0.0;       // m
    std::optional<double> eps_sigma;      // %
    std::optional<double> eps_dh;         // %
    std::optional<double> std_eps_sigma;  // %, spread of per-frequency errors
    std::optional<double> std_eps_dh;     // %

    std::optional<TruthSpec> truth;
    std::size_t n_frequencies_used = 0;     // after outlier rejection
    std::vector<double> rejected_frequencies_hz;
    int calibration_extrapolations = 0;

    std::string render_text() const;
    std::string render_json() const;
};

struct ProcedureResult {
    MeritReport report;
    std::vector<inversion::EstimateRecord> records;  // one per measurement
    std::shared_ptr<const forward::FGrid> grid;
    CalibrationTable calibration;
};

/// Phase 1 (grid + calibration), phase 2 (per-frequency, per-repeat
/// estimation, discarding infeasible frequencies), phase 3 (outlier-robust
/// averaging of the per-frequency means) and the merit figures.
/// Throws InfeasibleError when every frequency is discarded.
ProcedureResult run_procedure(const ProcedureConfig& config);

/// Plot-ready artifacts next to the machine-readable report:
///   report.json, report.txt        merit report
///   records.csv                    every per-repeat estimate
///   merit_vs_frequency.csv         error/spread vs frequency
///   level_curves.csv               per-frequency curves, both planes
///   intersections.csv              per-frequency consensus points
/// Returns the list of files written.
std::vector<std::string> write_report_files(const ProcedureResult& result,
                                            const forward::ProbeGeometry& probe,
                                            const std::string& out_dir);

}  // namespace ectdim::pipeline
