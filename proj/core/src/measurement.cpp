#include "ectdim/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "ectdim/csv.hpp"
#include "ectdim/forward.hpp"

namespace ectdim::pipeline {

namespace {

/// Box-Muller on explicit 53-bit uniforms. std::normal_distribution is
/// implementation-defined, this is not; synthesized datasets must be
/// reproducible byte for byte.
class ComplexGaussian {
public:
    explicit ComplexGaussian(std::uint64_t seed) : rng_(seed) {}

    std::complex<double> operator()() {
        const double u1 =
            (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;  // [0, 1)
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace

std::vector<MeasurementRecord> synthesize_measurements(
    const forward::ProbeGeometry& probe, const forward::PlateSpec& plate,
    std::vector<double> frequencies_hz, int repeats, const NoiseModel& noise,
    std::uint64_t seed, const std::string& plate_id) {
    probe.validate();
    plate.validate();
    if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
    if (noise.rho < 0.0 || noise.abs_sigma < 0.0) {
        throw std::invalid_argument("noise parameters must be non-negative");
    }
    if (frequencies_hz.empty()) {
        throw std::invalid_argument("at least one frequency required");
    }

    std::sort(frequencies_hz.begin(), frequencies_hz.end());
    ComplexGaussian gauss(seed);

    std::vector<MeasurementRecord> records;
    records.reserve(frequencies_hz.size() * static_cast<std::size_t>(repeats));
    for (double f : frequencies_hz) {
        const double omega = 2.0 * std::numbers::pi * f;
        const std::complex<double> clean =
            forward::mutual_impedance_delta(probe, plate, omega);
        for (int r = 1; r <= repeats; ++r) {
            const std::complex<double> gm = gauss();
            const std::complex<double> ga = gauss();
            MeasurementRecord rec;
            rec.omega = omega;
            rec.dz = clean * (1.0 + noise.rho * gm) + noise.abs_sigma * ga;
            rec.repeat_index = r;
            rec.plate_id = plate_id;
            records.push_back(std::move(rec));
        }
    }
    return records;
}

void save_measurements_csv(const std::vector<MeasurementRecord>& records,
                           const std::string& path) {
    csv::Writer w;
    w.row({"frequency_hz", "re_ohm", "im_ohm", "repeat", "plate_id"});
    for (const auto& r : records) {
        w.row({csv::format_double(r.omega / (2.0 * std::numbers::pi)),
               csv::format_double(r.dz.real()), csv::format_double(r.dz.imag()),
               std::to_string(r.repeat_index), r.plate_id});
    }
    w.save(path);
}

std::vector<MeasurementRecord> load_measurements_csv(const std::string& path) {
    const csv::Table table = csv::read_table(path);
    const std::size_t c_f = table.column("frequency_hz");
    const std::size_t c_re = table.column("re_ohm");
    const std::size_t c_im = table.column("im_ohm");
    const std::size_t c_rep = table.column("repeat");
    const std::size_t c_id = table.column("plate_id");

    std::vector<MeasurementRecord> records;
    records.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        if (row.size() < 4) {
            throw std::invalid_argument("measurement CSV row with too few cells");
        }
        MeasurementRecord rec;
        const double f = csv::parse_double(row.at(c_f));
        if (!(f > 0.0)) throw std::invalid_argument("non-positive frequency in CSV");
        rec.omega = 2.0 * std::numbers::pi * f;
        rec.dz = {csv::parse_double(row.at(c_re)), csv::parse_double(row.at(c_im))};
        rec.repeat_index = static_cast<int>(csv::parse_double(row.at(c_rep)));
        if (rec.repeat_index < 1) {
            throw std::invalid_argument("repeat index must be >= 1");
        }
        rec.plate_id = row.size() > c_id ? row.at(c_id) : std::string{};
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace ectdim::pipeline
