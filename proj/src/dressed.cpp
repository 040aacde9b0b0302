// dressed.cpp: dressed-state analysis

#include "dressedspec/dressed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dressedspec/qops.hpp"

namespace dressedspec {

namespace {

constexpr double kHermitianTolerance = 1e-12;
constexpr double kConservationTolerance = 1e-10;
constexpr double kSymmetryTolerance = 1e-10;
constexpr double kDegeneracyTolerance = 1e-9;

double max_abs(const ComplexMatrix& m)
{
    return m.size() > 0 ? m.cwiseAbs().maxCoeff() : 0.0;
}

void require_hermitian(const ComplexMatrix& h, const char* who)
{
    if (h.rows() != h.cols() || h.rows() == 0) {
        throw DomainError(std::string(who) + ": operator must be square and non-empty");
    }
    if (max_abs(h - h.adjoint()) > kHermitianTolerance * std::max(1.0, max_abs(h))) {
        throw DomainError(std::string(who) + ": operator is not Hermitian");
    }
}

Index atoms_for_dim(Index dim)
{
    Index n = 0;
    while ((Index{1} << n) < dim) ++n;
    if ((Index{1} << n) != dim) {
        throw DomainError("dimension " + std::to_string(dim) + " is not a power of two");
    }
    return n;
}

// Largest component real positive; among near-equal maxima the highest index wins.
void fix_phase(Eigen::Ref<ComplexVector> v)
{
    const double top = v.cwiseAbs().maxCoeff();
    Index pick = 0;
    for (Index k = 0; k < v.size(); ++k) {
        if (std::abs(v(k)) >= top * (1.0 - 1e-9)) pick = k;
    }
    const cplx c = v(pick);
    if (std::abs(c) > 0.0) {
        v *= std::conj(c) / std::abs(c);
        v(pick) = std::abs(v(pick));
    }
}

int parity_of(const ComplexVector& v, const ComplexMatrix& p)
{
    const double e = v.dot(p * v).real();
    if (std::abs(e - 1.0) < 1e-8) return 1;
    if (std::abs(e + 1.0) < 1e-8) return -1;
    return 0;
}

// Rotates the columns of v (spanning an invariant degenerate subspace) onto
// joint eigenvectors of the symmetry operators, +1 parity first.
ComplexMatrix refine(const ComplexMatrix& v, const std::vector<ComplexMatrix>& symmetries, std::size_t t)
{
    if (v.cols() <= 1 || t >= symmetries.size()) {
        return v;
    }
    const ComplexMatrix q = v.adjoint() * symmetries[t] * v;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (q + q.adjoint()));
    // Eigen sorts ascending; reverse so +1 comes first.
    const ComplexMatrix rotated = v * es.eigenvectors().rowwise().reverse();
    const RealVector vals = es.eigenvalues().reverse();

    ComplexMatrix out(v.rows(), v.cols());
    Index col = 0;
    Index start = 0;
    while (start < vals.size()) {
        Index end = start + 1;
        while (end < vals.size() && std::abs(vals(end) - vals(start)) < 1e-8) ++end;
        const ComplexMatrix group = refine(rotated.middleCols(start, end - start), symmetries, t + 1);
        out.middleCols(col, group.cols()) = group;
        col += group.cols();
        start = end;
    }
    return out;
}

} // namespace

DressedLevels dressed_levels(const QuantumOperator& h)
{
    require_hermitian(h, "dressed_levels");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
    if (es.info() != Eigen::Success) {
        throw NumericalError("dressed_levels: eigensolve failed");
    }
    DressedLevels levels{es.eigenvalues(), es.eigenvectors()};
    for (Index k = 0; k < levels.vectors.cols(); ++k) {
        fix_phase(levels.vectors.col(k));
    }
    return levels;
}

ComplexMatrix degenerate_projector(const DressedLevels& levels, double energy, double tol)
{
    const Index dim = levels.vectors.rows();
    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    for (Index k = 0; k < levels.energies.size(); ++k) {
        if (std::abs(levels.energies(k) - energy) <= tol) {
            p += levels.vectors.col(k) * levels.vectors.col(k).adjoint();
        }
    }
    return p;
}

TransitionTable transition_table(const DressedLevels& levels, const FieldOperator& field)
{
    const Index dim = levels.energies.size();
    if (field.op.rows() != dim || levels.vectors.rows() != dim) {
        throw DomainError("transition_table: dimension mismatch between levels and field");
    }
    TransitionTable t;
    t.delta.resize(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) {
            t.delta(i, j) = levels.energies(i) - levels.energies(j);
        }
    }
    t.amplitude = levels.vectors.adjoint() * field.op * levels.vectors;
    return t;
}

CouplingBlocks coupling_blocks(const TransitionTable& table, double threshold)
{
    if (!(threshold > 0.0)) {
        throw DomainError("coupling_blocks: threshold must be positive");
    }
    const Index n = table.size();
    std::vector<Index> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), Index{0});
    auto find = [&](Index a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            a = parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
        }
        return a;
    };
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            if (std::abs(table.amplitude(i, j)) >= threshold || std::abs(table.amplitude(j, i)) >= threshold) {
                const Index a = find(i);
                const Index b = find(j);
                parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
            }
        }
    }
    CouplingBlocks out;
    out.threshold = threshold;
    std::vector<Index> slot(static_cast<std::size_t>(n), -1);
    for (Index i = 0; i < n; ++i) {
        const Index root = find(i);
        auto& s = slot[static_cast<std::size_t>(root)];
        if (s < 0) {
            s = static_cast<Index>(out.blocks.size());
            out.blocks.emplace_back();
        }
        out.blocks[static_cast<std::size_t>(s)].push_back(i);
    }
    return out;
}

CouplingBlocks coupling_blocks(const TransitionTable& table)
{
    return coupling_blocks(table, 1e-6 * table.max_amplitude());
}

PeakAssignment assign_peaks(const PeakSet& peaks, const TransitionTable& table, double tolerance, double relative_floor)
{
    if (!(tolerance > 0.0)) {
        throw DomainError("assign_peaks: tolerance must be positive");
    }
    PeakAssignment out;
    out.tolerance = tolerance;
    out.amplitude_floor = relative_floor * table.max_amplitude();
    const Index n = table.size();

    std::vector<std::size_t> positive;
    std::vector<std::size_t> negative;
    for (const Peak& p : peaks) {
        AssignedPeak a;
        a.peak = p;
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) {
                const double amp = std::abs(table.amplitude(i, j));
                if (amp < out.amplitude_floor) continue;
                if (std::abs(p.center - table.delta(i, j)) <= tolerance) {
                    a.matches.push_back({j, i, table.delta(i, j), amp});
                }
            }
        }
        const std::size_t idx = out.peaks.size();
        if (a.matches.empty()) out.unmatched.push_back(idx);
        if (std::abs(p.center) <= tolerance) {
            a.label = "C";
        } else if (p.center > 0.0) {
            positive.push_back(idx);
        } else {
            negative.push_back(idx);
        }
        out.peaks.push_back(std::move(a));
    }
    // Peaks arrive sorted by center: positives ascend, negatives ascend in |center| from the back.
    for (std::size_t k = 0; k < positive.size(); ++k) {
        out.peaks[positive[k]].label = "T" + std::to_string(k + 1);
    }
    for (std::size_t k = 0; k < negative.size(); ++k) {
        out.peaks[negative[negative.size() - 1 - k]].label = "T'" + std::to_string(k + 1);
    }

    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const double amp = std::abs(table.amplitude(i, j));
            if (amp < out.amplitude_floor) continue;
            const double d = table.delta(i, j);
            const bool seen = std::any_of(peaks.begin(), peaks.end(),
                                          [&](const Peak& p) { return std::abs(p.center - d) <= tolerance; });
            if (!seen) out.unrealized.push_back({j, i, d, amp});
        }
    }
    return out;
}

ComplexMatrix site_permutation(const std::vector<Index>& perm)
{
    const Index n = static_cast<Index>(perm.size());
    const Index dim = hilbert_dim(n);
    std::vector<bool> used(perm.size(), false);
    for (Index target : perm) {
        if (target < 0 || target >= n || used[static_cast<std::size_t>(target)]) {
            throw DomainError("site_permutation: not a permutation");
        }
        used[static_cast<std::size_t>(target)] = true;
    }
    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    for (Index b = 0; b < dim; ++b) {
        Index image = 0;
        for (Index i = 0; i < n; ++i) {
            if (b & (Index{1} << i)) image |= Index{1} << perm[static_cast<std::size_t>(i)];
        }
        p(image, b) = 1.0;
    }
    return p;
}

CollectiveBasis collective_basis_lab(const QuantumOperator& h)
{
    require_hermitian(h, "collective_basis_lab");
    const Index dim = h.rows();
    const Index atoms = atoms_for_dim(dim);
    const ComplexMatrix number = total_number(atoms);
    if (max_abs(h * number - number * h) > kConservationTolerance) {
        throw DomainError("collective_basis_lab: Hamiltonian does not conserve total excitation");
    }

    CollectiveBasis basis;
    basis.atoms = atoms;
    const double scale = std::max(1.0, max_abs(h));
    std::vector<ComplexMatrix> symmetries;
    for (Index i = 0; i < atoms; ++i) {
        for (Index j = i + 1; j < atoms; ++j) {
            std::vector<Index> perm(static_cast<std::size_t>(atoms));
            std::iota(perm.begin(), perm.end(), Index{0});
            std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
            const ComplexMatrix p = site_permutation(perm);
            if (max_abs(p * h * p.transpose() - h) <= kSymmetryTolerance * scale) {
                basis.symmetry_transpositions.emplace_back(i, j);
                symmetries.push_back(p);
            }
        }
    }

    for (int m = 0; m <= atoms; ++m) {
        std::vector<Index> sector;
        for (Index b = 0; b < dim; ++b) {
            if (excitation_count(b) == m) sector.push_back(b);
        }
        const Index k = static_cast<Index>(sector.size());
        const ComplexMatrix block = h(sector, sector);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (block + block.adjoint()));
        ComplexMatrix vectors = ComplexMatrix::Zero(dim, k);
        vectors(sector, Eigen::all) = es.eigenvectors();
        const RealVector& energies = es.eigenvalues();

        Index start = 0;
        while (start < k) {
            Index end = start + 1;
            while (end < k && std::abs(energies(end) - energies(start)) <=
                                  kDegeneracyTolerance * std::max(1.0, std::abs(energies(start)))) {
                ++end;
            }
            const ComplexMatrix group = refine(vectors.middleCols(start, end - start), symmetries, 0);
            for (Index c = 0; c < group.cols(); ++c) {
                CollectiveState st;
                st.excitation = m;
                st.energy = energies(start + c);
                st.coefficients = group.col(c);
                fix_phase(st.coefficients);
                for (const auto& p : symmetries) st.parities.push_back(parity_of(st.coefficients, p));
                if (st.parities.empty()) {
                    st.symmetry = "none";
                } else if (std::all_of(st.parities.begin(), st.parities.end(), [](int x) { return x == 1; })) {
                    st.symmetry = "symmetric";
                } else if (std::all_of(st.parities.begin(), st.parities.end(), [](int x) { return x == -1; })) {
                    st.symmetry = "antisymmetric";
                } else {
                    st.symmetry = "mixed";
                }
                basis.states.push_back(std::move(st));
            }
            start = end;
        }
    }
    return basis;
}

ManifoldReport manifold_report(const CollectiveBasis& basis, const DriveParameters& drive, double lab_frequency)
{
    ManifoldReport r;
    r.laser_frequency = lab_frequency - drive.detuning;
    r.dimension = static_cast<Index>(basis.states.size());
    for (std::size_t k = 0; k < basis.states.size(); ++k) {
        const int m = basis.states[k].excitation;
        r.entries.push_back({static_cast<Index>(k), m, -m});
    }
    return r;
}

} // namespace dressedspec
