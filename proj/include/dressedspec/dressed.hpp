// dressed.hpp: collective dressed levels, transition structure and peak assignment

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dressedspec/dynamics.hpp"
#include "dressedspec/peaks.hpp"
#include "dressedspec/spectrum.hpp"
#include "dressedspec/types.hpp"

namespace dressedspec {

// Eigenpairs of the rotating-frame Hamiltonian, energies ascending. Each
// eigenvector is phase-fixed so its largest component is real and positive
// (ties go to the highest basis index).
struct DressedLevels {
    RealVector energies;
    ComplexMatrix vectors;  // columns
};

DressedLevels dressed_levels(const QuantumOperator& hamiltonian_rotating);

// Orthogonal projector onto the eigenspace of energy `energy` (within tol).
ComplexMatrix degenerate_projector(const DressedLevels& levels, double energy, double tol);

struct TransitionTable {
    RealMatrix delta;         // E_i - E_j
    ComplexMatrix amplitude;  // <u_i| E^dagger(n) |u_j>

    Index size() const { return delta.rows(); }
    double max_amplitude() const { return amplitude.cwiseAbs().maxCoeff(); }
};

TransitionTable transition_table(const DressedLevels& levels, const FieldOperator& field);

struct CouplingBlocks {
    std::vector<std::vector<Index>> blocks;  // each sorted; ordered by first element
    double threshold{0.0};
};

// Connected components of the graph with an edge wherever |M_ij| or |M_ji| >= threshold.
CouplingBlocks coupling_blocks(const TransitionTable& table, double threshold);
// Threshold 1e-6 * max |M|.
CouplingBlocks coupling_blocks(const TransitionTable& table);

struct TransitionMatch {
    Index from{0};  // j: emission u_j -> u_i shows up at Delta_ij
    Index to{0};    // i
    double delta{0.0};
    double amplitude{0.0};
};

struct AssignedPeak {
    Peak peak;
    std::string label;  // "C" for the central line, T1.. / T'1.. for sidebands
    std::vector<TransitionMatch> matches;
};

struct PeakAssignment {
    double tolerance{0.0};
    double amplitude_floor{0.0};
    std::vector<AssignedPeak> peaks;
    std::vector<std::size_t> unmatched;          // indices into peaks
    std::vector<TransitionMatch> unrealized;     // coupled i != j pairs with no detected peak

    bool all_matched() const { return unmatched.empty(); }
};

// Matches every peak center to the (i, j) with |center - Delta_ij| <= tolerance and
// |M_ij| >= relative_floor * max |M|.
PeakAssignment assign_peaks(const PeakSet& peaks,
                            const TransitionTable& table,
                            double tolerance,
                            double relative_floor = 1e-6);

// Lab-frame collective eigenstates, diagonalized sector by sector in the total
// excitation number. Degenerate subspaces are rotated onto eigenvectors of the
// site-exchange symmetries of the Hamiltonian, lowest transposition first.
struct CollectiveState {
    int excitation{0};
    double energy{0.0};
    ComplexVector coefficients;  // in the full 2^N basis
    std::vector<int> parities;   // +1 / -1 / 0 (not an eigenstate) per symmetry transposition
    std::string symmetry;        // "symmetric", "antisymmetric" or "mixed"
};

struct CollectiveBasis {
    Index atoms{0};
    std::vector<std::pair<Index, Index>> symmetry_transpositions;
    std::vector<CollectiveState> states;  // by excitation, then energy
};

CollectiveBasis collective_basis_lab(const QuantumOperator& hamiltonian_lab);

// Site permutation acting on kets: site i of the input lands on site perm[i].
ComplexMatrix site_permutation(const std::vector<Index>& perm);

struct ManifoldEntry {
    Index state{0};          // index into CollectiveBasis::states
    int excitation{0};
    int photon_offset{0};    // paired with the photon state |n + photon_offset>
};

// Bookkeeping for the atom-photon manifold with fixed N_T = N_photon + excitation.
struct ManifoldReport {
    std::string manifold_spacing{"omega_L"};
    double laser_frequency{0.0};  // lab_frequency - detuning, Gamma units
    Index dimension{0};           // 2^N states per manifold
    std::vector<ManifoldEntry> entries;
};

ManifoldReport manifold_report(const CollectiveBasis& basis, const DriveParameters& drive, double lab_frequency);

} // namespace dressedspec
