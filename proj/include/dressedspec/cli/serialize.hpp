// serialize.hpp: CSV/JSON encodings of results and atomic file output

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dressedspec/dressed.hpp"
#include "dressedspec/geometry.hpp"
#include "dressedspec/peaks.hpp"
#include "dressedspec/spectrum.hpp"

namespace dressedspec::cli {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Header "omega,S"; 12 significant digits.
std::string spectrum_csv(const Spectrum& s);
json spectrum_json(const Spectrum& s);

json peaks_json(const PeakSet& peaks, const Spectrum& source);
// Inverse of peaks_json; throws DomainError on schema mismatch.
PeakSet peaks_from_json(const json& doc);

json assignment_json(const PeakAssignment& a);
json strong_regime_json(const StrongRegimeReport& r);

json dressed_levels_json(const DressedLevels& levels);
json transitions_json(const TransitionTable& table);
json coupling_blocks_json(const CouplingBlocks& blocks);
json collective_basis_json(const CollectiveBasis& basis, const ManifoldReport& manifold);

// Two adjacent manifolds, N_T (upper) and N_T - 1 (lower), and every transition
// u_j (upper) -> u_i (lower) whose amplitude clears the coupling threshold.
json level_diagram_json(const DressedLevels& levels, const TransitionTable& table,
                        const CouplingBlocks& blocks, const ManifoldReport& manifold);

// Pretty-printed with a trailing newline.
std::string dump(const json& doc);

// Writes via a sibling temporary file and rename, so readers never see a partial file.
void write_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace dressedspec::cli
