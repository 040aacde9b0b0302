// plot.hpp: static SVG rendering of spectra and level diagrams

#pragma once

#include <string>

#include "dressedspec/dressed.hpp"
#include "dressedspec/spectrum.hpp"

namespace dressedspec::cli {

// Log-scale spectrum with each assigned peak annotated by its label.
std::string spectrum_svg(const Spectrum& spectrum, const PeakAssignment& assignment, const std::string& title);

// Two copies of the dressed levels separated by a symbolic laser quantum, with
// the allowed downward transitions colored by coupling block.
std::string level_diagram_svg(const DressedLevels& levels, const TransitionTable& table,
                              const CouplingBlocks& blocks, const std::string& title);

} // namespace dressedspec::cli
