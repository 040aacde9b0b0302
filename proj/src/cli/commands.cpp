// commands.cpp: command implementations and argument dispatch

#include "dressedspec/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dressedspec/cli/plot.hpp"
#include "dressedspec/cli/presets.hpp"
#include "dressedspec/cli/serialize.hpp"

namespace dressedspec::cli {

namespace fs = std::filesystem;

namespace {

fs::path output_dir(const RunConfig& c, const CommandOptions& o)
{
    return o.out ? fs::path(*o.out) : fs::path(c.output.directory);
}

std::string display_name(const RunConfig& c) { return c.name.empty() ? "dressedspec run" : c.name; }

std::string format_value(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int status_of(const std::exception_ptr& e, std::string& message)
{
    try {
        std::rethrow_exception(e);
    } catch (const DomainError& ex) {
        message = ex.what();
        return 1;
    } catch (const std::exception& ex) {
        message = ex.what();
        return 2;
    }
}

} // namespace

SpectrumRun run_spectrum(const RunConfig& config)
{
    validate_config(config);
    SpectrumRun run;
    run.config = config;

    const PairCouplings couplings = build_couplings(config.layout);
    const Liouvillian l = build_liouvillian(config.layout, couplings, config.drive);
    const SteadyState steady = steady_state(l);
    run.steady_residual = steady.residual;
    const FieldOperator field = field_operator(config.layout, config.observation_direction());

    const auto& s = config.spectrum;
    if (s.method == SpectrumMethod::WindowedFourier) {
        const CorrelationTrace trace = g1_correlation(l, steady, field, make_tau_grid(s.tau_step, s.tau_length));
        run.spectrum = spectrum_fourier(trace, s.omega_max, s.omega_step);
    } else {
        run.spectrum = spectrum_eigen(l, steady, field, uniform_omega_grid(s.omega_max, s.omega_step));
    }
    run.peaks = detect_peaks(run.spectrum, config.peaks.min_prominence, config.peaks.min_separation);

    const DressedLevels levels = dressed_levels(build_hamiltonian_rotating(config.layout, couplings, config.drive));
    const TransitionTable table = transition_table(levels, field);
    const double tolerance = std::max(config.peaks.tolerance, run.spectrum.spacing());
    run.assignment = assign_peaks(run.peaks, table, tolerance);
    if (config.drive.rabi > 0.0) run.regime = validate_strong_regime(couplings, config.drive.rabi);
    return run;
}

DressedRun run_dressed(const RunConfig& config)
{
    validate_config(config);
    DressedRun run;
    run.config = config;
    const PairCouplings couplings = build_couplings(config.layout);
    run.levels = dressed_levels(build_hamiltonian_rotating(config.layout, couplings, config.drive));
    run.table = transition_table(run.levels, field_operator(config.layout, config.observation_direction()));
    run.blocks = coupling_blocks(run.table);
    run.basis = collective_basis_lab(build_hamiltonian_lab(couplings, config.lab_frequency));
    run.manifold = manifold_report(run.basis, config.drive, config.lab_frequency);
    return run;
}

std::vector<fs::path> write_spectrum_outputs(const SpectrumRun& run, const fs::path& dir,
                                             const CommandOptions& options)
{
    std::vector<fs::path> files;
    const auto emit = [&](const std::string& name, const std::string& content) {
        write_atomic(dir / name, content);
        files.push_back(dir / name);
    };
    const auto& out = run.config.output;
    const bool csv = options.format ? *options.format == "csv" : out.csv;
    const bool js = options.format ? *options.format == "json" : out.json;
    if (csv) emit("spectrum.csv", spectrum_csv(run.spectrum));
    if (js) emit("spectrum.json", dump(spectrum_json(run.spectrum)));
    emit("peaks.json", dump(peaks_json(run.peaks, run.spectrum)));
    emit("assignment.json", dump(assignment_json(run.assignment)));
    if (run.regime) {
        emit("strong_regime.json", dump(strong_regime_json(*run.regime)));
    } else {
        emit("strong_regime.json", dump(json{{"schema_version", kSchemaVersion}, {"rabi", 0.0}, {"pairs", json::array()}}));
    }
    if (out.plot && !options.no_plot) {
        emit("spectrum.svg", spectrum_svg(run.spectrum, run.assignment, display_name(run.config)));
    }
    return files;
}

std::vector<fs::path> write_dressed_outputs(const DressedRun& run, const fs::path& dir, const CommandOptions& options)
{
    std::vector<fs::path> files;
    const auto emit = [&](const std::string& name, const std::string& content) {
        write_atomic(dir / name, content);
        files.push_back(dir / name);
    };
    emit("dressed_levels.json", dump(dressed_levels_json(run.levels)));
    emit("transitions.json", dump(transitions_json(run.table)));
    emit("coupling_blocks.json", dump(coupling_blocks_json(run.blocks)));
    emit("collective_basis.json", dump(collective_basis_json(run.basis, run.manifold)));
    emit("level_diagram.json", dump(level_diagram_json(run.levels, run.table, run.blocks, run.manifold)));
    if (run.config.output.plot && !options.no_plot) {
        emit("level_diagram.svg", level_diagram_svg(run.levels, run.table, run.blocks, display_name(run.config)));
    }
    return files;
}

std::vector<double> parse_value_list(const std::string& text)
{
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = item.find_last_not_of(" \t");
        const std::string token = item.substr(b, e - b + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size() || !std::isfinite(v)) {
            throw DomainError("scan: '" + token + "' is not a finite number");
        }
        values.push_back(v);
    }
    return values;
}

ScanResult run_scan(const RunConfig& config, const std::string& axis, const std::vector<double>& values,
                    const fs::path& dir, const CommandOptions& options)
{
    const auto& axes = scan_axes();
    if (std::find(axes.begin(), axes.end(), axis) == axes.end()) {
        throw DomainError("scan: unknown axis '" + axis + "' (expected rabi, detuning, kr_scale or theta)");
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw DomainError("scan: values must be finite");
    }

    ScanResult result;
    result.axis = axis;
    result.rows.resize(values.size());

    // Each worker owns whole points; no state is shared besides the claim counter.
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t k = next++; k < values.size(); k = next++) {
            ScanRow& row = result.rows[k];
            row.value = values[k];
            try {
                const SpectrumRun run = run_spectrum(with_scan_value(config, axis, values[k]));
                write_spectrum_outputs(run, dir / ("point_" + std::to_string(k)), options);
                row.peak_count = run.peaks.size();
                for (const auto& p : sidebands(run.peaks, run.config.peaks.tolerance)) row.sidebands.push_back(p.center);
            } catch (...) {
                row.status = status_of(std::current_exception(), row.error);
            }
        }
    };
    const std::size_t threads =
        std::min<std::size_t>(values.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    if (threads > 0) worker();
    for (auto& t : pool) t.join();

    json rows = json::array();
    std::string csv = "value,status,peak_count,sideband_centers\n";
    for (std::size_t k = 0; k < result.rows.size(); ++k) {
        const auto& r = result.rows[k];
        rows.push_back({{"value", r.value},
                        {"status", r.status == 0 ? "ok" : "error"},
                        {"error", r.error},
                        {"directory", "point_" + std::to_string(k)},
                        {"peak_count", r.peak_count},
                        {"sideband_centers", r.sidebands}});
        std::string centers;
        for (double c : r.sidebands) centers += (centers.empty() ? "" : ";") + format_value(c);
        csv += format_value(r.value) + "," + (r.status == 0 ? "ok" : "error") + "," +
               std::to_string(r.peak_count) + "," + centers + "\n";
    }
    write_atomic(dir / "scan_summary.json",
                 dump({{"schema_version", kSchemaVersion}, {"axis", axis}, {"rows", std::move(rows)}}));
    write_atomic(dir / "scan_summary.csv", csv);
    return result;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Resonance fluorescence spectra and dressed states of dipole-coupled emitters", "dressedspec"};
    app.require_subcommand(1);

    std::string config_arg;
    CommandOptions options;
    std::string format;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_arg, "YAML configuration file or bundled preset name")->required();
        sub->add_option("--out", options.out, "Output directory (overrides output.directory)");
        sub->add_flag("--no-plot", options.no_plot, "Skip SVG output");
        sub->add_option("--format", format, "Spectrum curve format")->check(CLI::IsMember({"csv", "json"}));
    };
    auto* spectrum = app.add_subcommand("spectrum", "Compute the fluorescence spectrum, peaks and their assignment");
    add_common(spectrum);
    auto* dressed = app.add_subcommand("dressed", "Report dressed levels, transitions and coupling blocks");
    add_common(dressed);
    auto* scan = app.add_subcommand("scan", "Sweep one parameter and summarize sideband positions");
    add_common(scan);
    std::string axis;
    std::string values_text;
    scan->add_option("--axis", axis, "Parameter to sweep")->required()->check(CLI::IsMember(scan_axes()));
    scan->add_option("--values", values_text, "Comma-separated values")->required();
    auto* presets_cmd = app.add_subcommand("presets", "Bundled configurations");
    presets_cmd->require_subcommand(1);
    auto* list = presets_cmd->add_subcommand("list", "List bundled presets");
    auto* show = presets_cmd->add_subcommand("show", "Print a preset as YAML");
    std::string preset_name;
    show->add_option("name", preset_name)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }
    if (!format.empty()) options.format = format;

    try {
        if (list->parsed()) {
            for (const auto& p : presets()) out << p.name << "\t" << p.description << "\n";
            return 0;
        }
        if (show->parsed()) {
            const auto p = find_preset(preset_name);
            if (!p) throw DomainError("unknown preset '" + preset_name + "'");
            out << p->yaml;
            return 0;
        }

        const RunConfig config = load_config(config_arg);
        const fs::path dir = output_dir(config, options);
        if (spectrum->parsed()) {
            const SpectrumRun run = run_spectrum(config);
            for (const auto& f : write_spectrum_outputs(run, dir, options)) out << "wrote " << f.string() << "\n";
            out << run.peaks.size() << " peaks (" << sidebands(run.peaks, config.peaks.tolerance).size()
                << " sidebands), " << run.assignment.unmatched.size() << " unassigned\n";
            for (const auto& w : run.spectrum.warnings) err << "warning: " << w << "\n";
            return 0;
        }
        if (dressed->parsed()) {
            const DressedRun run = run_dressed(config);
            for (const auto& f : write_dressed_outputs(run, dir, options)) out << "wrote " << f.string() << "\n";
            out << run.levels.energies.size() << " levels in " << run.blocks.blocks.size() << " coupling blocks\n";
            return 0;
        }
        // scan
        const ScanResult result = run_scan(config, axis, parse_value_list(values_text), dir, options);
        int worst = 0;
        for (const auto& r : result.rows) {
            if (r.status != 0) err << "scan point " << format_value(r.value) << " failed: " << r.error << "\n";
            worst = std::max(worst, r.status);
        }
        out << "wrote " << (dir / "scan_summary.json").string() << " (" << result.rows.size() << " rows)\n";
        return worst;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}

} // namespace dressedspec::cli
