// peaks.hpp: sideband detection on log-scale spectra

#pragma once

#include <vector>

#include "dressedspec/spectrum.hpp"

namespace dressedspec {

struct Peak {
    double center{0.0};      // Gamma units, laser frame
    double height{0.0};      // S at the peak (linear)
    double half_width{0.0};  // half width at half prominence (linear units)
    double prominence{0.0};  // decades of log10 S above the higher bounding saddle
};

// Sorted by center, strictly increasing.
using PeakSet = std::vector<Peak>;

struct PeakOptions {
    double min_prominence{0.1};  // decades
    double min_separation{2.0};  // Gamma
};

PeakSet detect_peaks(const Spectrum& spectrum, double min_prominence, double min_separation);

inline PeakSet detect_peaks(const Spectrum& spectrum, const PeakOptions& options = {})
{
    return detect_peaks(spectrum, options.min_prominence, options.min_separation);
}

// Peaks with |center| > exclude_below, i.e. everything but the central line.
PeakSet sidebands(const PeakSet& peaks, double exclude_below);

} // namespace dressedspec
