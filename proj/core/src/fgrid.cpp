#include "ectdim/fgrid.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ectdim/csv.hpp"

namespace ectdim::forward {

static_assert(std::endian::native == std::endian::little,
              "grid file format assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'E', 'C', 'T', 'F', 'G', 'R', 'I', 'D'};
constexpr std::uint32_t kVersion = 1;

double fractional_index(const std::vector<double>& axis, double v) {
    const std::size_t n = axis.size();
    if (v <= axis.front()) {
        return (v - axis.front()) / (axis[1] - axis[0]);
    }
    if (v >= axis.back()) {
        return static_cast<double>(n - 1) +
               (v - axis.back()) / (axis[n - 1] - axis[n - 2]);
    }
    const auto it = std::upper_bound(axis.begin(), axis.end(), v);
    const std::size_t hi = static_cast<std::size_t>(it - axis.begin());
    const std::size_t lo = hi - 1;
    return static_cast<double>(lo) + (v - axis[lo]) / (axis[hi] - axis[lo]);
}

double value_at_index(const std::vector<double>& axis, double x) {
    const std::size_t n = axis.size();
    if (x <= 0.0) return axis.front() + x * (axis[1] - axis[0]);
    if (x >= static_cast<double>(n - 1)) {
        return axis.back() + (x - static_cast<double>(n - 1)) * (axis[n - 1] - axis[n - 2]);
    }
    const auto lo = static_cast<std::size_t>(x);
    const double t = x - static_cast<double>(lo);
    return axis[lo] + t * (axis[lo + 1] - axis[lo]);
}

std::vector<double> build_axis(double lo, double hi, std::size_t n, GridSpacing spacing) {
    std::vector<double> axis(n);
    if (spacing == GridSpacing::log) {
        const double la = std::log(lo);
        const double lb = std::log(hi);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(n - 1);
            axis[i] = std::exp(la + t * (lb - la));
        }
        axis.front() = lo;
        axis.back() = hi;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(n - 1);
            axis[i] = lo + t * (hi - lo);
        }
    }
    return axis;
}

}  // namespace

double FGrid::x_of_pi2(double pi2) const { return fractional_index(pi2_axis, pi2); }
double FGrid::y_of_pi3(double pi3) const { return fractional_index(pi3_axis, pi3); }
double FGrid::pi2_at(double x) const { return value_at_index(pi2_axis, x); }
double FGrid::pi3_at(double y) const { return value_at_index(pi3_axis, y); }

void FGrid::validate() const {
    if (n2() < 2 || n3() < 2) {
        throw std::invalid_argument("grid needs at least 2 samples per axis");
    }
    for (const auto* axis : {&pi2_axis, &pi3_axis}) {
        for (std::size_t i = 0; i + 1 < axis->size(); ++i) {
            if (!((*axis)[i] < (*axis)[i + 1])) {
                throw std::invalid_argument("grid axis not strictly increasing");
            }
        }
        if (!(axis->front() > 0.0)) {
            throw std::invalid_argument("grid axes must be positive");
        }
    }
    if (values.size() != n2() * n3()) {
        throw std::invalid_argument("grid value count does not match axes");
    }
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument("grid contains non-finite values");
        }
    }
}

FGrid compute_f_grid(const ProbeGeometry& probe, const GridBuildParams& params) {
    probe.validate();
    if (!(params.pi2_min > 0.0 && params.pi3_min > 0.0)) {
        throw std::invalid_argument("grid ranges must be positive");
    }
    if (!(params.pi2_min < params.pi2_max && params.pi3_min < params.pi3_max)) {
        throw std::invalid_argument("grid ranges must be non-empty");
    }
    if (params.n2 < 2 || params.n3 < 2) {
        throw std::invalid_argument("grid needs at least 2 samples per axis");
    }
    if (!(params.sigma_ref > 0.0)) {
        throw std::invalid_argument("sigma_ref must be positive");
    }

    FGrid grid;
    grid.pi2_axis = build_axis(params.pi2_min, params.pi2_max, params.n2, params.spacing);
    grid.pi3_axis = build_axis(params.pi3_min, params.pi3_max, params.n3, params.spacing);
    grid.values.assign(params.n2 * params.n3, {});
    grid.probe_tag = probe_shape_tag(probe);

    const auto shape = probe.normalized_shape();
    const double D = probe.characteristic_length();
    IntegrationOptions opts{params.rel_tol};

    unsigned threads = params.threads;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(params.n2));

    std::atomic<std::size_t> next_row{0};
    std::mutex failure_mutex;
    std::string failure;

    auto worker = [&]() {
        detail::CoilKernelCache cache;
        for (;;) {
            const std::size_t i = next_row.fetch_add(1);
            if (i >= grid.n2()) return;
            const double pi2 = grid.pi2_axis[i];
            const double omega = 2.0 * PhysicalConstants::nu0 * pi2 * pi2 /
                                 (params.sigma_ref * D * D);
            for (std::size_t j = 0; j < grid.n3(); ++j) {
                const double pi3 = grid.pi3_axis[j];
                try {
                    // Mirror mutual_impedance_delta + to_pi1 exactly, with a
                    // per-thread kernel cache; the numbers are bit-identical
                    // to the uncached path.
                    const auto pi1 =
                        detail::dimensionless_pi1(shape, pi2, pi3, opts, &cache);
                    const auto dz = from_pi1(pi1, omega, probe);
                    grid.at(i, j) = to_pi1(dz, omega, probe);
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (failure.empty()) {
                        failure = "grid build failed at lattice (" + std::to_string(i) +
                                  "," + std::to_string(j) + ") = (pi2=" +
                                  std::to_string(pi2) + ", pi3=" + std::to_string(pi3) +
                                  "): " + e.what();
                    }
                    return;
                }
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (!failure.empty()) throw std::runtime_error(failure);

    grid.validate();
    return grid;
}

bool monotone_frequency_response(const FGrid& grid) {
    for (std::size_t j = 0; j < grid.n3(); ++j) {
        double prev = -1.0;
        for (std::size_t i = 0; i < grid.n2(); ++i) {
            const double pi2 = grid.pi2_axis[i];
            const double mag = std::abs(grid.at(i, j)) * pi2 * pi2;
            if (mag <= prev) return false;
            prev = mag;
        }
    }
    return true;
}

void save_grid(const FGrid& grid, const std::string& path) {
    grid.validate();
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        auto write_raw = [&out](const void* p, std::size_t n) {
            out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
        };
        write_raw(kMagic, sizeof(kMagic));
        write_raw(&kVersion, sizeof(kVersion));
        write_raw(&grid.probe_tag, sizeof(grid.probe_tag));
        const std::uint32_t n2 = static_cast<std::uint32_t>(grid.n2());
        const std::uint32_t n3 = static_cast<std::uint32_t>(grid.n3());
        write_raw(&n2, sizeof(n2));
        write_raw(&n3, sizeof(n3));
        write_raw(grid.pi2_axis.data(), n2 * sizeof(double));
        write_raw(grid.pi3_axis.data(), n3 * sizeof(double));
        write_raw(grid.values.data(), grid.values.size() * sizeof(std::complex<double>));
        if (!out) throw std::runtime_error("short write to '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

FGrid load_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open grid file '" + path + "'");
    auto read_raw = [&in, &path](void* p, std::size_t n) {
        in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (!in) throw std::runtime_error("truncated grid file '" + path + "'");
    };
    char magic[8];
    read_raw(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("'" + path + "' is not a grid file");
    }
    std::uint32_t version = 0;
    read_raw(&version, sizeof(version));
    if (version != kVersion) {
        throw std::runtime_error("unsupported grid file version " + std::to_string(version));
    }
    FGrid grid;
    read_raw(&grid.probe_tag, sizeof(grid.probe_tag));
    std::uint32_t n2 = 0;
    std::uint32_t n3 = 0;
    read_raw(&n2, sizeof(n2));
    read_raw(&n3, sizeof(n3));
    if (n2 < 2 || n3 < 2 || static_cast<std::uint64_t>(n2) * n3 > (1ull << 28)) {
        throw std::runtime_error("grid file with implausible dimensions");
    }
    grid.pi2_axis.resize(n2);
    grid.pi3_axis.resize(n3);
    grid.values.resize(static_cast<std::size_t>(n2) * n3);
    read_raw(grid.pi2_axis.data(), n2 * sizeof(double));
    read_raw(grid.pi3_axis.data(), n3 * sizeof(double));
    read_raw(grid.values.data(), grid.values.size() * sizeof(std::complex<double>));
    grid.validate();
    return grid;
}

void export_grid_csv(const FGrid& grid, const std::string& path) {
    grid.validate();
    csv::Writer w;
    w.row({"pi2", "pi3", "re_f", "im_f"});
    for (std::size_t i = 0; i < grid.n2(); ++i) {
        for (std::size_t j = 0; j < grid.n3(); ++j) {
            w.row_values({grid.pi2_axis[i], grid.pi3_axis[j], grid.at(i, j).real(),
                          grid.at(i, j).imag()});
        }
    }
    w.save(path);
}

}  // namespace ectdim::forward
