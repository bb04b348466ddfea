#include "ectdim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "ectdim/csv.hpp"
#include "ectdim/forward.hpp"

namespace ectdim::pipeline {

CalibrationTable::CalibrationTable(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw std::invalid_argument("calibration table needs at least one entry");
    }
    for (std::size_t i = 0; i + 1 < entries_.size(); ++i) {
        if (!(entries_[i].omega < entries_[i + 1].omega)) {
            throw std::invalid_argument("calibration frequencies must be strictly increasing");
        }
    }
}

CalibrationTable::Evaluation CalibrationTable::evaluate(double omega) const {
    if (entries_.empty()) return {std::complex<double>(1.0, 0.0), false};
    if (omega <= entries_.front().omega) {
        return {entries_.front().c, omega < entries_.front().omega};
    }
    if (omega >= entries_.back().omega) {
        return {entries_.back().c, omega > entries_.back().omega};
    }
    const auto it = std::upper_bound(
        entries_.begin(), entries_.end(), omega,
        [](double w, const Entry& e) { return w < e.omega; });
    const Entry& hi = *it;
    const Entry& lo = *(it - 1);
    const double t = (omega - lo.omega) / (hi.omega - lo.omega);
    const std::complex<double> c{
        lo.c.real() + t * (hi.c.real() - lo.c.real()),
        lo.c.imag() + t * (hi.c.imag() - lo.c.imag()),
    };
    return {c, false};
}

MeasurementRecord apply_calibration(const CalibrationTable& table,
                                    const MeasurementRecord& m) {
    MeasurementRecord out = m;
    out.dz = m.dz * table.evaluate(m.omega).c;
    return out;
}

CalibrationTable fit_calibration(const std::vector<ReferencePlate>& references,
                                 const forward::ProbeGeometry& probe,
                                 const forward::FGrid& grid) {
    if (references.empty()) {
        throw std::invalid_argument("fit_calibration needs at least one reference plate");
    }
    probe.validate();
    if (grid.probe_tag != forward::probe_shape_tag(probe)) {
        throw std::invalid_argument("calibration grid does not match the probe shape");
    }

    std::vector<std::string> notes;

    // Per plate: omega -> mean ratio model/measured over that plate's repeats.
    std::vector<std::map<double, std::complex<double>>> per_plate;
    for (const auto& ref : references) {
        ref.plate.validate();
        std::map<double, std::complex<double>> sums;
        std::map<double, int> counts;
        std::map<double, std::complex<double>> model_cache;
        for (const auto& m : ref.measurements) {
            auto model_it = model_cache.find(m.omega);
            if (model_it == model_cache.end()) {
                model_it = model_cache
                               .emplace(m.omega, forward::mutual_impedance_delta(
                                                     probe, ref.plate, m.omega))
                               .first;
            }
            const double floor = 1e-12 * std::abs(model_it->second);
            if (std::abs(m.dz) <= floor) {
                notes.push_back(
                    "excluded near-zero measurement at f=" +
                    csv::format_double(m.omega / (2.0 * std::numbers::pi)) + " Hz" +
                    (m.plate_id.empty() ? std::string{} : " (plate " + m.plate_id + ")"));
                continue;
            }
            sums[m.omega] += model_it->second / m.dz;
            counts[m.omega] += 1;
        }
        std::map<double, std::complex<double>> means;
        for (const auto& [omega, sum] : sums) {
            means[omega] = sum / static_cast<double>(counts[omega]);
        }
        per_plate.push_back(std::move(means));
    }

    // Shared frequency set: present in every plate's surviving measurements.
    std::vector<CalibrationTable::Entry> entries;
    for (const auto& [omega, first_ratio] : per_plate.front()) {
        std::complex<double> sum = first_ratio;
        std::size_t n = 1;
        bool shared = true;
        for (std::size_t p = 1; p < per_plate.size(); ++p) {
            auto it = per_plate[p].find(omega);
            if (it == per_plate[p].end()) {
                shared = false;
                break;
            }
            sum += it->second;
            ++n;
        }
        if (shared) {
            entries.push_back({omega, sum / static_cast<double>(n)});
        }
    }
    if (entries.empty()) {
        throw std::invalid_argument(
            "reference plates share no usable frequency; cannot fit calibration");
    }

    CalibrationTable table(std::move(entries));
    for (auto& note : notes) table.add_note(std::move(note));
    return table;
}

void save_calibration_csv(const CalibrationTable& table, const std::string& path) {
    csv::Writer w;
    w.row({"frequency_hz", "re_c", "im_c"});
    for (const auto& e : table.entries()) {
        w.row_values({e.omega / (2.0 * std::numbers::pi), e.c.real(), e.c.imag()});
    }
    w.save(path);
}

CalibrationTable load_calibration_csv(const std::string& path) {
    const csv::Table table = csv::read_table(path);
    const std::size_t c_f = table.column("frequency_hz");
    const std::size_t c_re = table.column("re_c");
    const std::size_t c_im = table.column("im_c");
    std::vector<CalibrationTable::Entry> entries;
    for (const auto& row : table.rows) {
        CalibrationTable::Entry e;
        e.omega = 2.0 * std::numbers::pi * csv::parse_double(row.at(c_f));
        e.c = {csv::parse_double(row.at(c_re)), csv::parse_double(row.at(c_im))};
        entries.push_back(e);
    }
    return CalibrationTable(std::move(entries));
}

}  // namespace ectdim::pipeline
