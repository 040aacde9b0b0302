// plot.cpp: SVG output

#include "dressedspec/cli/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>

namespace dressedspec::cli {

namespace {

constexpr double kWidth = 1000;
constexpr double kHeight = 520;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 50;

const std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string header(const std::string& title)
{
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n"
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
           "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
           escape(title) + "</text>\n";
}

std::string tick_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-9 ? 0.0 : v);
    return buf;
}

double nice_step(double span, int target)
{
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) return m * mag;
    }
    return 10 * mag;
}

} // namespace

std::string spectrum_svg(const Spectrum& spectrum, const PeakAssignment& assignment, const std::string& title)
{
    const Index n = spectrum.omega.size();
    std::string svg = header(title);
    if (n < 2) return svg + "</svg>\n";

    const double x0 = spectrum.omega(0);
    const double x1 = spectrum.omega(n - 1);
    const double floor_value = 1e-300;
    double top = -300;
    for (Index k = 0; k < n; ++k) top = std::max(top, std::log10(std::max(spectrum.values(k), floor_value)));
    const double y1 = std::ceil(top);
    const double y0 = y1 - 10.0;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    const auto py = [&](double ly) { return kTop + (y1 - std::clamp(ly, y0, y1)) / (y1 - y0) * ph; };

    // Axes, decade grid and frequency ticks.
    svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double d = y0; d <= y1 + 1e-9; d += 2) {
        svg += "<line x1=\"" + num(kLeft) + "\" x2=\"" + num(kLeft + pw) + "\" y1=\"" + num(py(d)) + "\" y2=\"" +
               num(py(d)) + "\" stroke=\"#ddd\"/>\n";
        svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py(d) + 4) + "\" text-anchor=\"end\">1e" +
               std::to_string(static_cast<int>(d)) + "</text>\n";
    }
    const double step = nice_step(x1 - x0, 10);
    for (double t = std::ceil(x0 / step) * step; t <= x1 + 1e-9; t += step) {
        svg += "<text x=\"" + num(px(t)) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
               tick_label(t) + "</text>\n";
    }
    svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) +
           "\" text-anchor=\"middle\">(omega - omega_L) / Gamma</text>\n";
    svg += "<text x=\"16\" y=\"" + num(kTop + ph / 2) + "\" transform=\"rotate(-90 16 " + num(kTop + ph / 2) +
           ")\" text-anchor=\"middle\">S(omega)</text>\n";

    // Min/max per pixel column so narrow lines survive decimation.
    const int columns = static_cast<int>(pw);
    std::string path;
    Index k = 0;
    for (int c = 0; c < columns && k < n; ++c) {
        const double edge = x0 + (x1 - x0) * (c + 1) / columns;
        double lo = 1e9, hi = -1e9;
        Index lo_k = k, hi_k = k;
        const Index start = k;
        while (k < n && (spectrum.omega(k) <= edge || c == columns - 1)) {
            const double ly = std::log10(std::max(spectrum.values(k), floor_value));
            if (ly < lo) { lo = ly; lo_k = k; }
            if (ly > hi) { hi = ly; hi_k = k; }
            ++k;
        }
        if (k == start) continue;
        const Index first = std::min(lo_k, hi_k), second = std::max(lo_k, hi_k);
        for (Index idx : {first, second}) {
            const double ly = std::log10(std::max(spectrum.values(idx), floor_value));
            path += (path.empty() ? "M" : " L") + num(px(spectrum.omega(idx))) + "," + num(py(ly));
        }
    }
    svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\"/>\n";

    for (const auto& ap : assignment.peaks) {
        const double x = px(ap.peak.center);
        const double y = py(std::log10(std::max(ap.peak.height, floor_value))) - 6;
        svg += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"10\" transform=\"rotate(-90 " + num(x) +
               " " + num(y) + ")\" fill=\"#d62728\">" + escape(ap.label) + "</text>\n";
    }
    return svg + "</svg>\n";
}

std::string level_diagram_svg(const DressedLevels& levels, const TransitionTable& table,
                              const CouplingBlocks& blocks, const std::string& title)
{
    std::string svg = header(title);
    const Index n = levels.energies.size();
    if (n == 0) return svg + "</svg>\n";

    const double emin = levels.energies.minCoeff();
    const double emax = levels.energies.maxCoeff();
    const double span = std::max(emax - emin, 1.0);
    // Each manifold gets 40% of the plot height; the gap between them stands for the laser quantum.
    const double band = 0.4 * (kHeight - kTop - kBottom);
    const double upper_base = kTop + band;
    const double lower_base = kHeight - kBottom;
    const auto y_of = [&](double base, double e) { return base - (e - emin) / span * band; };

    std::vector<std::size_t> owner(static_cast<std::size_t>(n), 0);
    for (std::size_t b = 0; b < blocks.blocks.size(); ++b) {
        for (Index i : blocks.blocks[b]) owner[static_cast<std::size_t>(i)] = b;
    }
    const double line_x0 = kLeft + 40;
    const double line_x1 = kWidth - kRight - 60;
    for (Index i = 0; i < n; ++i) {
        const char* color = kPalette[owner[static_cast<std::size_t>(i)] % kPalette.size()];
        for (double base : {upper_base, lower_base}) {
            const double y = y_of(base, levels.energies(i));
            svg += "<line x1=\"" + num(line_x0) + "\" x2=\"" + num(line_x1) + "\" y1=\"" + num(y) + "\" y2=\"" +
                   num(y) + "\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
            svg += "<text x=\"" + num(line_x1 + 6) + "\" y=\"" + num(y + 4) + "\">u" + std::to_string(i + 1) +
                   "</text>\n";
        }
    }
    svg += "<text x=\"" + num(kLeft) + "\" y=\"" + num(upper_base - band - 6) + "\">manifold N_T</text>\n";
    svg += "<text x=\"" + num(kLeft) + "\" y=\"" + num(lower_base - band - 6) + "\">manifold N_T - 1</text>\n";
    svg += "<text x=\"" + num(kLeft) + "\" y=\"" + num((upper_base + lower_base - band) / 2) +
           "\" font-style=\"italic\">omega_L</text>\n";

    std::vector<std::pair<Index, Index>> allowed;
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            if (std::abs(table.amplitude(i, j)) >= blocks.threshold) allowed.emplace_back(j, i);
        }
    }
    const double slot = (line_x1 - line_x0 - 20) / std::max<double>(1.0, static_cast<double>(allowed.size()));
    for (std::size_t t = 0; t < allowed.size(); ++t) {
        const auto [j, i] = allowed[t];
        const double x = line_x0 + 10 + slot * (static_cast<double>(t) + 0.5);
        const char* color = kPalette[owner[static_cast<std::size_t>(j)] % kPalette.size()];
        svg += "<line x1=\"" + num(x) + "\" x2=\"" + num(x) + "\" y1=\"" + num(y_of(upper_base, levels.energies(j))) +
               "\" y2=\"" + num(y_of(lower_base, levels.energies(i))) + "\" stroke=\"" + color +
               "\" stroke-opacity=\"0.6\" stroke-width=\"1\"/>\n";
    }
    return svg + "</svg>\n";
}

} // namespace dressedspec::cli
