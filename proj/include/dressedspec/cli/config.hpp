// config.hpp: run configuration schema and parser

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dressedspec/dynamics.hpp"
#include "dressedspec/errors.hpp"
#include "dressedspec/geometry.hpp"
#include "dressedspec/peaks.hpp"
#include "dressedspec/spectrum.hpp"

namespace dressedspec::cli {

// Parse or validation failure; the message carries "source:line:column: ...".
class ConfigError : public DomainError {
public:
    using DomainError::DomainError;
};

struct SpectrumSettings {
    SpectrumMethod method{SpectrumMethod::WindowedFourier};
    double tau_step{2.5e-4};
    double tau_length{40.0};
    double omega_max{700.0};
    double omega_step{0.05};
    std::optional<Vec3> direction;  // defaults to an axis orthogonal to the dipole
};

struct PeakSettings {
    double min_prominence{0.1};
    double min_separation{2.0};
    double tolerance{1.0};  // peak-to-transition assignment window
};

struct OutputSettings {
    std::string directory{"out"};
    bool csv{true};
    bool json{false};
    bool plot{true};
};

struct RunConfig {
    std::string name;
    EmitterLayout layout;
    DriveParameters drive;
    double lab_frequency{1000.0};  // atomic frequency for the lab-frame basis, Gamma units
    SpectrumSettings spectrum;
    PeakSettings peaks;
    OutputSettings output;

    Vec3 observation_direction() const;
};

// Parses a YAML document. Unknown keys are errors.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");

// Reads `name_or_path` from disk, or from the bundled presets when no such file exists.
RunConfig load_config(const std::string& name_or_path);

// Cross-field checks shared by the parser and by scans that mutate a config.
void validate_config(const RunConfig& config);

inline const std::vector<std::string>& scan_axes()
{
    static const std::vector<std::string> axes{"rabi", "detuning", "kr_scale", "theta"};
    return axes;
}

// Copy of `config` with one scan parameter set. theta (radians) applies to
// every pair and needs a pairwise layout; kr_scale multiplies all distances.
RunConfig with_scan_value(const RunConfig& config, const std::string& axis, double value);

} // namespace dressedspec::cli
