#include "ectdim/config.hpp"

#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ectdim/csv.hpp"

namespace ectdim::config {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> values;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) values.push_back(csv::parse_double(tok));
    return values;
}

}  // namespace

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    return s != sections.end() && s->second.count(key) > 0;
}

const std::string& ConfigFile::get(const std::string& section,
                                   const std::string& key) const {
    auto s = sections.find(section);
    if (s == sections.end()) {
        throw std::invalid_argument("config is missing section [" + section + "]");
    }
    auto k = s->second.find(key);
    if (k == s->second.end()) {
        throw std::invalid_argument("config is missing key '" + key + "' in [" +
                                    section + "]");
    }
    return k->second;
}

std::string ConfigFile::get_or(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

double ConfigFile::number(const std::string& section, const std::string& key) const {
    return csv::parse_double(get(section, key));
}

double ConfigFile::number_or(const std::string& section, const std::string& key,
                             double fallback) const {
    return has(section, key) ? number(section, key) : fallback;
}

ConfigFile parse_config(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            cfg.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": key outside any section");
        }
        if (!cfg.sections[section].emplace(key, value).second) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": duplicate key '" + key + "'");
        }
    }
    return cfg;
}

ConfigFile load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

forward::ProbeGeometry probe_from_config(const ConfigFile& cfg) {
    forward::ProbeGeometry probe;
    probe.r1 = cfg.number("probe", "r1_mm") * 1e-3;
    probe.r2 = cfg.number("probe", "r2_mm") * 1e-3;
    probe.h1 = cfg.number("probe", "h1_mm") * 1e-3;
    probe.h2 = cfg.number("probe", "h2_mm") * 1e-3;
    probe.d = cfg.number("probe", "d_mm") * 1e-3;
    probe.l0 = cfg.number("probe", "l0_mm") * 1e-3;
    probe.n1 = static_cast<int>(cfg.number("probe", "n1"));
    probe.n2 = static_cast<int>(cfg.number("probe", "n2"));
    probe.theta = cfg.number_or("probe", "theta_deg", 0.0) * std::numbers::pi / 180.0;
    probe.validate();
    return probe;
}

forward::GridBuildParams grid_params_from_config(const ConfigFile& cfg) {
    forward::GridBuildParams p;
    p.pi2_min = cfg.number_or("grid", "pi2_min", p.pi2_min);
    p.pi2_max = cfg.number_or("grid", "pi2_max", p.pi2_max);
    p.pi3_min = cfg.number_or("grid", "pi3_min", p.pi3_min);
    p.pi3_max = cfg.number_or("grid", "pi3_max", p.pi3_max);
    p.n2 = static_cast<std::size_t>(cfg.number_or("grid", "n2", static_cast<double>(p.n2)));
    p.n3 = static_cast<std::size_t>(cfg.number_or("grid", "n3", static_cast<double>(p.n3)));
    const std::string spacing = cfg.get_or("grid", "spacing", "log");
    if (spacing == "log") {
        p.spacing = forward::GridSpacing::log;
    } else if (spacing == "linear") {
        p.spacing = forward::GridSpacing::linear;
    } else {
        throw std::invalid_argument("unknown grid spacing '" + spacing + "'");
    }
    p.sigma_ref = cfg.number_or("grid", "sigma_ref_ms_per_m", 35.0) * 1e6;
    p.rel_tol = cfg.number_or("grid", "rel_tol", p.rel_tol);
    p.threads = static_cast<unsigned>(cfg.number_or("grid", "threads", 0.0));
    return p;
}

pipeline::NoiseModel noise_from_config(const ConfigFile& cfg) {
    pipeline::NoiseModel noise;
    noise.rho = cfg.number_or("noise", "rho", 0.005);
    noise.abs_sigma = cfg.number_or("noise", "abs_ohm", 1e-6);
    return noise;
}

std::vector<NamedPlate> plates_from_config(const ConfigFile& cfg) {
    std::vector<NamedPlate> plates;
    auto s = cfg.sections.find("plates");
    if (s == cfg.sections.end()) return plates;
    for (const auto& [name, value] : s->second) {
        const auto nums = parse_number_list(value);
        if (nums.size() != 2) {
            throw std::invalid_argument("plate '" + name +
                                        "' needs: sigma_ms_per_m thickness_mm");
        }
        NamedPlate p;
        p.name = name;
        p.plate.sigma = nums[0] * 1e6;
        p.plate.dh = nums[1] * 1e-3;
        p.plate.validate();
        plates.push_back(std::move(p));
    }
    return plates;
}

std::vector<double> frequency_preset(const std::string& name) {
    if (name == "fig4") return {1650.0};
    if (name == "fig5") return {650.0, 1150.0, 1650.0, 2150.0, 2650.0};
    if (name == "sweep") {
        std::vector<double> f;
        for (double hz = 300.0; hz <= 3000.0 + 0.5; hz += 50.0) f.push_back(hz);
        return f;
    }
    throw std::invalid_argument("unknown frequency preset '" + name +
                                "' (known: fig4, fig5, sweep)");
}

pipeline::ProcedureConfig procedure_from_config(const ConfigFile& cfg) {
    pipeline::ProcedureConfig pc;
    pc.probe = probe_from_config(cfg);

    if (cfg.has("procedure", "grid_file")) {
        pc.grid_path = cfg.get("procedure", "grid_file");
    } else {
        pc.grid_build = grid_params_from_config(cfg);
    }

    if (cfg.has("procedure", "calibration_file")) {
        const std::string value = cfg.get("procedure", "calibration_file");
        if (value != "identity") pc.calibration_path = value;
    }

    if (cfg.has("procedure", "measurements_file")) {
        pc.measurements_path = cfg.get("procedure", "measurements_file");
    } else if (cfg.has("procedure", "plate")) {
        const std::string plate_name = cfg.get("procedure", "plate");
        const auto plates = plates_from_config(cfg);
        const NamedPlate* found = nullptr;
        for (const auto& p : plates) {
            if (p.name == plate_name) found = &p;
        }
        if (found == nullptr) {
            throw std::invalid_argument("procedure plate '" + plate_name +
                                        "' not defined in [plates]");
        }
        pipeline::SynthSpec synth;
        synth.plate = found->plate;
        synth.plate_id = found->name;
        if (cfg.has("procedure", "frequencies_hz")) {
            synth.frequencies_hz = parse_number_list(cfg.get("procedure", "frequencies_hz"));
        } else {
            synth.frequencies_hz = frequency_preset(cfg.get_or("procedure", "preset", "fig5"));
        }
        synth.repeats = static_cast<int>(cfg.number_or("procedure", "repeats", 1.0));
        synth.seed = static_cast<std::uint64_t>(cfg.number_or("procedure", "seed", 1.0));
        synth.noise = noise_from_config(cfg);
        pc.synth = synth;
    } else {
        throw std::invalid_argument(
            "[procedure] needs either measurements_file or a plate to synthesize");
    }

    if (cfg.has("procedure", "truth_sigma_ms_per_m") &&
        cfg.has("procedure", "truth_dh_mm")) {
        pipeline::TruthSpec truth;
        truth.sigma = cfg.number("procedure", "truth_sigma_ms_per_m") * 1e6;
        truth.dh = cfg.number("procedure", "truth_dh_mm") * 1e-3;
        pc.truth = truth;
    }

    pc.estimate.region_k = cfg.number_or("procedure", "region_k", pc.estimate.region_k);
    pc.estimate.blind_boundary =
        cfg.number_or("procedure", "blind_boundary", pc.estimate.blind_boundary);
    return pc;
}

}  // namespace ectdim::config
