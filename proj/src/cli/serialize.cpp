// serialize.cpp: result encodings

#include "dressedspec/cli/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>

#include "dressedspec/errors.hpp"

namespace dressedspec::cli {

namespace {

json complex_pair(cplx z) { return json::array({z.real(), z.imag()}); }

json real_matrix(const RealMatrix& m)
{
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json match_json(const TransitionMatch& m)
{
    return {{"from", m.from}, {"to", m.to}, {"delta", m.delta}, {"amplitude", m.amplitude}};
}

std::string format12(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

std::string spectrum_csv(const Spectrum& s)
{
    std::string out = "omega,S\n";
    out.reserve(static_cast<std::size_t>(s.omega.size()) * 40);
    for (Index k = 0; k < s.omega.size(); ++k) {
        out += format12(s.omega(k));
        out += ',';
        out += format12(s.values(k));
        out += '\n';
    }
    return out;
}

json spectrum_json(const Spectrum& s)
{
    return {{"schema_version", kSchemaVersion},
            {"method", to_string(s.method)},
            {"coherent_weight", s.coherent_weight},
            {"imag_residual", s.imag_residual},
            {"warnings", s.warnings},
            {"omega", std::vector<double>(s.omega.data(), s.omega.data() + s.omega.size())},
            {"S", std::vector<double>(s.values.data(), s.values.data() + s.values.size())}};
}

json peaks_json(const PeakSet& peaks, const Spectrum& source)
{
    json list = json::array();
    for (const auto& p : peaks) {
        list.push_back({{"center", p.center},
                        {"height", p.height},
                        {"half_width", p.half_width},
                        {"prominence", p.prominence}});
    }
    return {{"schema_version", kSchemaVersion},
            {"method", to_string(source.method)},
            {"grid_spacing", source.spacing()},
            {"coherent_weight", source.coherent_weight},
            {"count", peaks.size()},
            {"peaks", std::move(list)}};
}

PeakSet peaks_from_json(const json& doc)
{
    try {
        if (doc.at("schema_version").get<int>() != kSchemaVersion) {
            throw DomainError("peaks JSON: unsupported schema_version");
        }
        PeakSet out;
        for (const auto& p : doc.at("peaks")) {
            out.push_back({p.at("center").get<double>(), p.at("height").get<double>(),
                           p.at("half_width").get<double>(), p.at("prominence").get<double>()});
        }
        return out;
    } catch (const json::exception& e) {
        throw DomainError(std::string("peaks JSON: ") + e.what());
    }
}

json assignment_json(const PeakAssignment& a)
{
    json peaks = json::array();
    for (const auto& ap : a.peaks) {
        json matches = json::array();
        for (const auto& m : ap.matches) matches.push_back(match_json(m));
        peaks.push_back({{"label", ap.label},
                         {"center", ap.peak.center},
                         {"height", ap.peak.height},
                         {"matches", std::move(matches)}});
    }
    json unrealized = json::array();
    for (const auto& m : a.unrealized) unrealized.push_back(match_json(m));
    return {{"schema_version", kSchemaVersion},
            {"tolerance", a.tolerance},
            {"amplitude_floor", a.amplitude_floor},
            {"all_matched", a.all_matched()},
            {"peaks", std::move(peaks)},
            {"unmatched", a.unmatched},
            {"unrealized", std::move(unrealized)}};
}

json strong_regime_json(const StrongRegimeReport& r)
{
    json pairs = json::array();
    for (const auto& p : r.pairs) {
        pairs.push_back({{"i", p.i},
                         {"j", p.j},
                         {"gamma", p.gamma},
                         {"omega", p.omega},
                         {"strong_interaction", p.strong_interaction},
                         {"gamma_near_unity", p.gamma_near_unity},
                         {"driving_ratio", p.driving_ratio},
                         {"strong_driving", p.strong_driving}});
    }
    return {{"schema_version", kSchemaVersion},
            {"rabi", r.rabi},
            {"thresholds",
             {{"interaction_factor", r.interaction_factor},
              {"gamma_window", r.gamma_window},
              {"driving_factor", r.driving_factor}}},
            {"pairs", std::move(pairs)}};
}

json dressed_levels_json(const DressedLevels& levels)
{
    json vecs = json::array();
    for (Index k = 0; k < levels.vectors.cols(); ++k) {
        json v = json::array();
        for (Index b = 0; b < levels.vectors.rows(); ++b) v.push_back(complex_pair(levels.vectors(b, k)));
        vecs.push_back(std::move(v));
    }
    return {{"schema_version", kSchemaVersion},
            {"basis", "computational, site 0 least significant"},
            {"energies", std::vector<double>(levels.energies.data(), levels.energies.data() + levels.energies.size())},
            {"eigenvectors", std::move(vecs)}};
}

json transitions_json(const TransitionTable& table)
{
    const Index n = table.size();
    json amp = json::array();
    for (Index i = 0; i < n; ++i) {
        json row = json::array();
        for (Index j = 0; j < n; ++j) row.push_back(complex_pair(table.amplitude(i, j)));
        amp.push_back(std::move(row));
    }
    return {{"schema_version", kSchemaVersion},
            {"convention", "delta[i][j] = E_i - E_j; amplitude[i][j] = <u_i|E^dagger|u_j> as [re, im]"},
            {"delta", real_matrix(table.delta)},
            {"amplitude_abs", real_matrix(table.amplitude.cwiseAbs())},
            {"amplitude", std::move(amp)}};
}

json coupling_blocks_json(const CouplingBlocks& blocks)
{
    return {{"schema_version", kSchemaVersion}, {"threshold", blocks.threshold}, {"blocks", blocks.blocks}};
}

json collective_basis_json(const CollectiveBasis& basis, const ManifoldReport& manifold)
{
    json transpositions = json::array();
    for (const auto& [a, b] : basis.symmetry_transpositions) transpositions.push_back({a, b});
    json states = json::array();
    for (const auto& s : basis.states) {
        json coeffs = json::array();
        for (Index b = 0; b < s.coefficients.size(); ++b) coeffs.push_back(complex_pair(s.coefficients(b)));
        states.push_back({{"excitation", s.excitation},
                          {"energy", s.energy},
                          {"symmetry", s.symmetry},
                          {"parities", s.parities},
                          {"coefficients", std::move(coeffs)}});
    }
    json entries = json::array();
    for (const auto& e : manifold.entries) {
        entries.push_back({{"state", e.state}, {"excitation", e.excitation}, {"photon_offset", e.photon_offset}});
    }
    return {{"schema_version", kSchemaVersion},
            {"atoms", basis.atoms},
            {"symmetry_transpositions", std::move(transpositions)},
            {"states", std::move(states)},
            {"manifold",
             {{"spacing", manifold.manifold_spacing},
              {"laser_frequency", manifold.laser_frequency},
              {"dimension", manifold.dimension},
              {"entries", std::move(entries)}}}};
}

json level_diagram_json(const DressedLevels& levels, const TransitionTable& table,
                        const CouplingBlocks& blocks, const ManifoldReport& manifold)
{
    json block_of = json::array();
    std::vector<std::size_t> owner(static_cast<std::size_t>(levels.energies.size()), 0);
    for (std::size_t b = 0; b < blocks.blocks.size(); ++b) {
        for (Index i : blocks.blocks[b]) owner[static_cast<std::size_t>(i)] = b;
    }
    json lv = json::array();
    for (Index i = 0; i < levels.energies.size(); ++i) {
        lv.push_back({{"index", i}, {"energy", levels.energies(i)}, {"block", owner[static_cast<std::size_t>(i)]}});
    }
    json transitions = json::array();
    for (Index j = 0; j < table.size(); ++j) {
        for (Index i = 0; i < table.size(); ++i) {
            const double a = std::abs(table.amplitude(i, j));
            if (a < blocks.threshold) continue;
            transitions.push_back({{"upper", j}, {"lower", i}, {"delta", table.delta(i, j)}, {"amplitude", a}});
        }
    }
    return {{"schema_version", kSchemaVersion},
            {"separation", manifold.manifold_spacing},
            {"manifolds", {{{"label", "N_T"}, {"levels", lv}}, {{"label", "N_T - 1"}, {"levels", lv}}}},
            {"transitions", std::move(transitions)}};
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

} // namespace dressedspec::cli
