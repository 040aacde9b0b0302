// config.cpp: YAML run configuration

#include "dressedspec/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "dressedspec/cli/presets.hpp"
#include "dressedspec/qops.hpp"

namespace dressedspec::cli {

namespace {

// Liouvillian storage grows as 16^N; seven atoms already needs ~4 GB.
constexpr Index kMaxAtoms = 6;

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const
    {
        fail_at(node.Mark(), message);
    }

    [[noreturn]] void fail_at(const YAML::Mark& mark, const std::string& message) const
    {
        std::ostringstream os;
        os << source_;
        if (!mark.is_null()) os << ":" << mark.line + 1 << ":" << mark.column + 1;
        os << ": " << message;
        throw ConfigError(os.str());
    }

    void require_map(const YAML::Node& node, const std::string& what) const
    {
        if (!node.IsMap()) fail(node, what + " must be a mapping");
    }

    void allow_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& section) const
    {
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            if (!allowed.count(key)) {
                std::string list;
                for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
                fail(kv.first, "unknown key '" + key + "' in " + section + " (expected one of: " + list + ")");
            }
        }
    }

    double number(const YAML::Node& node, const std::string& what) const
    {
        if (!node.IsScalar()) fail(node, what + " must be a number");
        double v = 0.0;
        try {
            v = node.as<double>();
        } catch (const YAML::Exception&) {
            fail(node, what + " must be a number, got '" + node.Scalar() + "'");
        }
        if (!std::isfinite(v)) fail(node, what + " must be finite");
        return v;
    }

    bool boolean(const YAML::Node& node, const std::string& what) const
    {
        try {
            return node.as<bool>();
        } catch (const YAML::Exception&) {
            fail(node, what + " must be true or false");
        }
    }

    std::string text(const YAML::Node& node, const std::string& what) const
    {
        if (!node.IsScalar()) fail(node, what + " must be a string");
        return node.Scalar();
    }

    Vec3 vector3(const YAML::Node& node, const std::string& what) const
    {
        if (!node.IsSequence() || node.size() != 3) fail(node, what + " must be a list of three numbers");
        return {number(node[0], what), number(node[1], what), number(node[2], what)};
    }

    Vec3 direction(const YAML::Node& node, const std::string& what) const
    {
        const Vec3 v = vector3(node, what);
        if (!(v.norm() > 0.0)) fail(node, what + " must be non-zero");
        return v.normalized();
    }

    // A scalar fills every off-diagonal entry; a list of lists is taken as is.
    RealMatrix pair_matrix(const YAML::Node& node, Index atoms, const std::string& what,
                           double (*scalar)(const Reader&, const YAML::Node&, const std::string&)) const
    {
        if (node.IsScalar()) {
            if (atoms < 1) fail(node, what + " given as a scalar needs layout.atoms");
            RealMatrix m = RealMatrix::Constant(atoms, atoms, scalar(*this, node, what));
            m.diagonal().setZero();
            return m;
        }
        if (!node.IsSequence()) fail(node, what + " must be a number or a square matrix");
        const auto n = static_cast<Index>(node.size());
        if (atoms >= 1 && n != atoms) fail(node, what + " must have layout.atoms rows");
        RealMatrix m(n, n);
        for (Index i = 0; i < n; ++i) {
            const YAML::Node row = node[static_cast<std::size_t>(i)];
            if (!row.IsSequence() || static_cast<Index>(row.size()) != n) {
                fail(row, what + " row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
            }
            for (Index j = 0; j < n; ++j) {
                m(i, j) = i == j ? 0.0 : scalar(*this, row[static_cast<std::size_t>(j)], what);
            }
        }
        return m;
    }

private:
    std::string source_;
};

double plain_number(const Reader& r, const YAML::Node& n, const std::string& what)
{
    return r.number(n, what);
}

// Accepts "magic" for the angle where 3 cos^2 = 1.
double cosine_entry(const Reader& r, const YAML::Node& n, const std::string& what)
{
    if (n.IsScalar() && n.Scalar() == "magic") return 1.0 / std::sqrt(3.0);
    return r.number(n, what);
}

double angle_entry(const Reader& r, const YAML::Node& n, const std::string& what)
{
    if (n.IsScalar() && n.Scalar() == "magic") return std::acos(1.0 / std::sqrt(3.0));
    return r.number(n, what);
}

void run_check(const Reader& r, const YAML::Node& node, const std::function<void()>& check)
{
    try {
        check();
    } catch (const DomainError& e) {
        r.fail(node, e.what());
    }
}

EmitterLayout parse_layout(const Reader& r, const YAML::Node& node)
{
    r.require_map(node, "layout");
    if (!node["mode"]) r.fail(node, "layout.mode is required (pairwise or geometric)");
    const std::string mode = r.text(node["mode"], "layout.mode");

    std::vector<Vec3> positions;
    if (const auto p = node["positions"]) {
        if (!p.IsSequence()) r.fail(p, "layout.positions must be a list of [x, y, z]");
        for (const auto& row : p) positions.push_back(r.vector3(row, "layout.positions entry"));
    }

    EmitterLayout layout;
    if (mode == "geometric") {
        r.allow_keys(node, {"mode", "positions", "dipole"}, "layout (geometric)");
        if (positions.empty()) r.fail(node, "geometric layout needs at least one position");
        layout.mode = LayoutMode::Geometric;
        layout.positions = std::move(positions);
        if (const auto d = node["dipole"]) layout.dipole_direction = r.direction(d, "layout.dipole");
    } else if (mode == "pairwise") {
        r.allow_keys(node, {"mode", "atoms", "kr", "cos_theta", "theta", "positions"}, "layout (pairwise)");
        Index atoms = 0;
        if (const auto a = node["atoms"]) {
            const double v = r.number(a, "layout.atoms");
            if (v != std::floor(v) || v < 1) r.fail(a, "layout.atoms must be a positive integer");
            atoms = static_cast<Index>(v);
        }
        if (!node["kr"]) r.fail(node, "pairwise layout needs kr");
        if (node["cos_theta"] && node["theta"]) r.fail(node["theta"], "give either cos_theta or theta, not both");
        if (!node["cos_theta"] && !node["theta"]) r.fail(node, "pairwise layout needs cos_theta or theta");
        layout.mode = LayoutMode::Pairwise;
        layout.pair_kr = r.pair_matrix(node["kr"], atoms, "layout.kr", plain_number);
        const Index n = layout.pair_kr.rows();
        if (node["cos_theta"]) {
            layout.pair_cos_theta = r.pair_matrix(node["cos_theta"], n, "layout.cos_theta", cosine_entry);
        } else {
            layout.pair_cos_theta = r.pair_matrix(node["theta"], n, "layout.theta", angle_entry)
                                        .unaryExpr([](double t) { return std::cos(t); });
            layout.pair_cos_theta.diagonal().setZero();
        }
        layout.positions = std::move(positions);
    } else {
        r.fail(node["mode"], "layout.mode must be 'pairwise' or 'geometric', got '" + mode + "'");
    }

    if (layout.size() > kMaxAtoms) {
        r.fail(node, "at most " + std::to_string(kMaxAtoms) + " atoms are supported (the Liouvillian has 16^N entries)");
    }
    run_check(r, node, [&] {
        validate_layout(layout);
        validate_couplings(build_couplings(layout));
    });
    return layout;
}

DriveParameters parse_drive(const Reader& r, const YAML::Node& node, double& lab_frequency)
{
    r.require_map(node, "drive");
    r.allow_keys(node, {"rabi", "detuning", "k_direction", "lab_frequency"}, "drive");
    DriveParameters d;
    if (!node["rabi"]) r.fail(node, "drive.rabi is required");
    d.rabi = r.number(node["rabi"], "drive.rabi");
    run_check(r, node["rabi"], [&] {
        if (d.rabi < 0.0) throw DomainError("drive.rabi must be non-negative, got " + node["rabi"].Scalar());
    });
    if (const auto n = node["detuning"]) d.detuning = r.number(n, "drive.detuning");
    if (const auto n = node["k_direction"]) d.wave_vector_direction = r.direction(n, "drive.k_direction");
    if (const auto n = node["lab_frequency"]) {
        lab_frequency = r.number(n, "drive.lab_frequency");
        if (!(lab_frequency > 0.0)) r.fail(n, "drive.lab_frequency must be positive");
    }
    run_check(r, node, [&] { validate_drive(d); });
    return d;
}

SpectrumSettings parse_spectrum(const Reader& r, const YAML::Node& node)
{
    r.require_map(node, "spectrum");
    r.allow_keys(node, {"method", "tau_step", "tau_length", "omega_max", "omega_step", "direction"}, "spectrum");
    SpectrumSettings s;
    if (const auto n = node["method"]) {
        const auto m = r.text(n, "spectrum.method");
        if (m == "fourier") s.method = SpectrumMethod::WindowedFourier;
        else if (m == "eigen") s.method = SpectrumMethod::EigenDecomposition;
        else r.fail(n, "spectrum.method must be 'fourier' or 'eigen', got '" + m + "'");
    }
    const auto positive = [&](const char* key, double& field) {
        if (const auto n = node[key]) {
            field = r.number(n, std::string("spectrum.") + key);
            if (!(field > 0.0)) r.fail(n, std::string("spectrum.") + key + " must be positive");
        }
    };
    positive("tau_step", s.tau_step);
    positive("tau_length", s.tau_length);
    positive("omega_max", s.omega_max);
    positive("omega_step", s.omega_step);
    if (const auto n = node["direction"]) s.direction = r.direction(n, "spectrum.direction");

    if (s.tau_length <= s.tau_step) r.fail(node, "spectrum.tau_length must exceed spectrum.tau_step");
    if (s.omega_max >= std::numbers::pi / s.tau_step) {
        r.fail(node, "spectrum.omega_max must stay below the Nyquist limit pi / tau_step");
    }
    if (s.omega_step >= s.omega_max) r.fail(node, "spectrum.omega_step must be smaller than omega_max");
    return s;
}

PeakSettings parse_peaks(const Reader& r, const YAML::Node& node)
{
    r.require_map(node, "peaks");
    r.allow_keys(node, {"min_prominence", "min_separation", "tolerance"}, "peaks");
    PeakSettings p;
    const auto read = [&](const char* key, double& field, bool strict) {
        if (const auto n = node[key]) {
            field = r.number(n, std::string("peaks.") + key);
            if (strict ? !(field > 0.0) : field < 0.0) {
                r.fail(n, std::string("peaks.") + key + (strict ? " must be positive" : " must be non-negative"));
            }
        }
    };
    read("min_prominence", p.min_prominence, false);
    read("min_separation", p.min_separation, false);
    read("tolerance", p.tolerance, true);
    return p;
}

OutputSettings parse_output(const Reader& r, const YAML::Node& node)
{
    r.require_map(node, "output");
    r.allow_keys(node, {"directory", "formats", "plot"}, "output");
    OutputSettings o;
    if (const auto n = node["directory"]) o.directory = r.text(n, "output.directory");
    if (const auto n = node["plot"]) o.plot = r.boolean(n, "output.plot");
    if (const auto n = node["formats"]) {
        if (!n.IsSequence() || n.size() == 0) r.fail(n, "output.formats must be a non-empty list of csv/json");
        o.csv = o.json = false;
        for (const auto& f : n) {
            const auto v = r.text(f, "output.formats entry");
            if (v == "csv") o.csv = true;
            else if (v == "json") o.json = true;
            else r.fail(f, "output.formats entries must be 'csv' or 'json', got '" + v + "'");
        }
    }
    return o;
}

} // namespace

Vec3 RunConfig::observation_direction() const
{
    return spectrum.direction ? *spectrum.direction : default_observation_direction(layout);
}

void validate_config(const RunConfig& c)
{
    if (c.layout.size() > kMaxAtoms) {
        throw DomainError("at most " + std::to_string(kMaxAtoms) + " atoms are supported");
    }
    validate_layout(c.layout);
    validate_couplings(build_couplings(c.layout));
    validate_drive(c.drive);
    if (!(c.lab_frequency > 0.0)) throw DomainError("drive.lab_frequency must be positive");
    if (c.peaks.tolerance < c.spectrum.omega_step) {
        throw DomainError("peaks.tolerance must be at least spectrum.omega_step");
    }
}

RunConfig parse_config(const std::string& text, const std::string& source)
{
    const Reader r(source);
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        r.fail_at(e.mark, "parse error: " + e.msg);
    }
    if (!root.IsMap()) r.fail(root, "configuration must be a mapping");
    r.allow_keys(root, {"name", "layout", "drive", "spectrum", "peaks", "output"}, "top level");

    RunConfig c;
    if (const auto n = root["name"]) c.name = r.text(n, "name");
    if (!root["layout"]) r.fail(root, "layout section is required");
    if (!root["drive"]) r.fail(root, "drive section is required");
    c.layout = parse_layout(r, root["layout"]);
    c.drive = parse_drive(r, root["drive"], c.lab_frequency);
    if (const auto n = root["spectrum"]) c.spectrum = parse_spectrum(r, n);
    if (const auto n = root["peaks"]) c.peaks = parse_peaks(r, n);
    if (const auto n = root["output"]) c.output = parse_output(r, n);

    if (c.peaks.tolerance < c.spectrum.omega_step) {
        r.fail(root["peaks"] ? root["peaks"] : root, "peaks.tolerance must be at least spectrum.omega_step");
    }
    if (c.spectrum.direction && c.layout.mode == LayoutMode::Geometric &&
        std::abs(c.spectrum.direction->dot(c.layout.dipole_direction)) > 1.0 - 1e-12) {
        r.fail(root["spectrum"]["direction"], "spectrum.direction is parallel to the dipole, no light is emitted there");
    }
    return c;
}

RunConfig load_config(const std::string& name_or_path)
{
    std::ifstream in(name_or_path);
    if (in) {
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_config(buf.str(), name_or_path);
    }
    if (const auto p = find_preset(name_or_path)) {
        return parse_config(p->yaml, "preset:" + p->name);
    }
    throw ConfigError(name_or_path + ": no such file or bundled preset");
}

RunConfig with_scan_value(const RunConfig& config, const std::string& axis, double value)
{
    if (!std::isfinite(value)) throw DomainError("scan: values must be finite");
    RunConfig c = config;
    if (axis == "rabi") {
        c.drive.rabi = value;
    } else if (axis == "detuning") {
        c.drive.detuning = value;
    } else if (axis == "kr_scale") {
        if (!(value > 0.0)) throw DomainError("scan: kr_scale must be positive");
        c.layout.pair_kr *= value;
        for (auto& p : c.layout.positions) p *= value;
    } else if (axis == "theta") {
        if (c.layout.mode != LayoutMode::Pairwise) {
            throw DomainError("scan: the theta axis needs a pairwise layout");
        }
        const Index n = c.layout.size();
        c.layout.pair_cos_theta = RealMatrix::Constant(n, n, std::cos(value));
        c.layout.pair_cos_theta.diagonal().setZero();
    } else {
        throw DomainError("scan: unknown axis '" + axis + "' (expected rabi, detuning, kr_scale or theta)");
    }
    validate_config(c);
    return c;
}

} // namespace dressedspec::cli
