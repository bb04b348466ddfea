#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ectdim/fgrid.hpp"
#include "ectdim/probe.hpp"
#include "ectdim/procedure.hpp"

namespace ectdim::config {

/// Sectioned key-value text:
///
///   [probe]
///   r1_mm = 23.60
///   ...
///
/// '#' starts a comment; keys are unique within a section. All lengths in
/// the file are millimetres and are converted to SI on load.
struct ConfigFile {
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& section, const std::string& key) const;
    const std::string& get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double number(const std::string& section, const std::string& key) const;
    double number_or(const std::string& section, const std::string& key,
                     double fallback) const;
};

ConfigFile parse_config(const std::string& text);
ConfigFile load_config(const std::string& path);

/// [probe]: r1_mm r2_mm h1_mm h2_mm d_mm l0_mm n1 n2 [theta_deg]
forward::ProbeGeometry probe_from_config(const ConfigFile& cfg);

/// [grid]: pi2_min pi2_max pi3_min pi3_max n2 n3 spacing sigma_ref_ms_per_m
/// [rel_tol threads]; every key optional, defaults reproduce the standard
/// grid.
forward::GridBuildParams grid_params_from_config(const ConfigFile& cfg);

/// [noise]: rho abs_ohm
pipeline::NoiseModel noise_from_config(const ConfigFile& cfg);

struct NamedPlate {
    std::string name;
    forward::PlateSpec plate;
};

/// [plates]: <name> = <sigma_ms_per_m> <thickness_mm>
std::vector<NamedPlate> plates_from_config(const ConfigFile& cfg);

/// Frequency presets: fig4 (1650 Hz), fig5 (650..2650 Hz step 500),
/// sweep (300..3000 Hz step 50). Throws on unknown names.
std::vector<double> frequency_preset(const std::string& name);

/// [procedure]: assembles a full ProcedureConfig. Recognized keys:
///   grid_file | (grid built from [grid])
///   calibration_file | calibration = identity
///   measurements_file | plate = <name from [plates]> (synthetic source)
///   frequencies_hz = <list> | preset = fig4|fig5|sweep
///   repeats, seed, truth_sigma_ms_per_m, truth_dh_mm
///   region_k, blind_boundary
pipeline::ProcedureConfig procedure_from_config(const ConfigFile& cfg);

}  // namespace ectdim::config
