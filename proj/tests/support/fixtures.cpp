#include "support/fixtures.hpp"

#include <filesystem>
#include <mutex>

namespace fixtures {

using namespace ectdim;

forward::ProbeGeometry bench_probe() {
    forward::ProbeGeometry probe;
    probe.r1 = 23.60e-3;
    probe.r2 = 23.95e-3;
    probe.h1 = 6.0e-3;
    probe.h2 = 6.0e-3;
    probe.d = 2.20e-3;
    probe.l0 = 1.0e-3;
    probe.n1 = 17;
    probe.n2 = 17;
    return probe;
}

dims::DimensionalSystem rlc_system() {
    using dims::Rational;
    dims::DimensionalSystem sys;
    sys.basis = {"A", "V", "T"};
    auto quantity = [&sys](const std::string& name, int a, int v, int t,
                           dims::Role role = dims::Role::independent) {
        dims::QuantitySpec q;
        q.name = name;
        q.dimension.exponents = {Rational(a), Rational(v), Rational(t)};
        q.role = role;
        sys.quantities.push_back(std::move(q));
    };
    quantity("omega", 0, 0, -1);
    quantity("E", 0, 1, 0);
    quantity("R", -1, 1, 0);
    quantity("I", 1, 0, 0, dims::Role::dependent);
    quantity("L", -1, 1, 1);
    quantity("C", 1, -1, 1);
    sys.repeating = {"R", "E", "omega"};
    return sys;
}

dims::DimensionalSystem ect_system() {
    using dims::Rational;
    dims::DimensionalSystem sys;
    sys.basis = {"L", "T", "Ohm"};
    auto quantity = [&sys](const std::string& name, int l, int t, int ohm,
                           dims::Role role = dims::Role::independent) {
        dims::QuantitySpec q;
        q.name = name;
        q.dimension.exponents = {Rational(l), Rational(t), Rational(ohm)};
        q.role = role;
        sys.quantities.push_back(std::move(q));
    };
    quantity("dZm", 0, 0, 1, dims::Role::dependent);
    quantity("sigma", -1, 0, -1);
    quantity("nu0", 1, -1, -1);
    quantity("omega", 0, -1, 0);
    quantity("dh", 1, 0, 0);
    quantity("l0", 1, 0, 0);
    quantity("D", 1, 0, 0);
    quantity("t", 0, 0, 0);
    quantity("theta", 0, 0, 0);
    sys.repeating = {"nu0", "omega", "D"};
    sys.transforms["sigma"] = dims::PresentationTransform::sqrt_half;
    return sys;
}

namespace {

std::string grid_cache_path() {
    const auto probe = bench_probe();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(forward::probe_shape_tag(probe)));
    return "test_grid_default_" + std::string(buf) + "_200x200.bin";
}

std::shared_ptr<const forward::FGrid> build_or_load() {
    const std::string path = grid_cache_path();
    if (std::filesystem::exists(path)) {
        return std::make_shared<const forward::FGrid>(forward::load_grid(path));
    }
    auto grid = std::make_shared<forward::FGrid>(
        forward::compute_f_grid(bench_probe(), forward::GridBuildParams{}));
    forward::save_grid(*grid, path);
    return grid;
}

}  // namespace

std::shared_ptr<const forward::FGrid> default_grid() {
    static std::shared_ptr<const forward::FGrid> grid = [] { return build_or_load(); }();
    return grid;
}

std::string default_grid_path() {
    default_grid();
    return grid_cache_path();
}

}  // namespace fixtures
