// geometry.cpp: layout validation, pair geometry and coupling matrices

#include "dressedspec/geometry.hpp"

#include <cmath>
#include <string>

namespace dressedspec {

namespace {

constexpr double kUnitTolerance = 1e-12;

void require_symmetric_zero_diagonal(const RealMatrix& m, const char* name)
{
    for (Index i = 0; i < m.rows(); ++i) {
        if (m(i, i) != 0.0) {
            throw DomainError(std::string(name) + ": diagonal must be zero");
        }
        for (Index j = i + 1; j < m.cols(); ++j) {
            if (m(i, j) != m(j, i)) {
                throw DomainError(std::string(name) + ": matrix must be symmetric");
            }
        }
    }
}

} // namespace

Index EmitterLayout::size() const
{
    return mode == LayoutMode::Geometric ? static_cast<Index>(positions.size()) : pair_kr.rows();
}

Vec3 EmitterLayout::position(Index i) const
{
    if (positions.empty()) {
        return Vec3::Zero();
    }
    return positions.at(static_cast<std::size_t>(i));
}

EmitterLayout make_geometric_layout(std::vector<Vec3> positions, const Vec3& dipole_direction)
{
    EmitterLayout layout;
    layout.mode = LayoutMode::Geometric;
    layout.positions = std::move(positions);
    layout.dipole_direction = dipole_direction;
    validate_layout(layout);
    return layout;
}

EmitterLayout make_pairwise_layout(RealMatrix pair_kr, RealMatrix pair_cos_theta)
{
    EmitterLayout layout;
    layout.mode = LayoutMode::Pairwise;
    layout.pair_kr = std::move(pair_kr);
    layout.pair_cos_theta = std::move(pair_cos_theta);
    validate_layout(layout);
    return layout;
}

EmitterLayout make_uniform_pairwise_layout(Index atoms, double kr, double cos_theta)
{
    RealMatrix k = RealMatrix::Constant(atoms, atoms, kr);
    RealMatrix c = RealMatrix::Constant(atoms, atoms, cos_theta);
    k.diagonal().setZero();
    c.diagonal().setZero();
    return make_pairwise_layout(std::move(k), std::move(c));
}

void validate_layout(const EmitterLayout& layout)
{
    if (layout.size() < 1) {
        throw DomainError("layout: at least one emitter is required");
    }
    for (const auto& p : layout.positions) {
        if (!p.allFinite()) {
            throw DomainError("layout: positions must be finite");
        }
    }
    if (layout.mode == LayoutMode::Geometric) {
        if (std::abs(layout.dipole_direction.norm() - 1.0) > kUnitTolerance) {
            throw DomainError("layout: dipole_direction must have unit norm");
        }
        return;
    }

    const Index n = layout.pair_kr.rows();
    if (layout.pair_kr.cols() != n || layout.pair_cos_theta.rows() != n || layout.pair_cos_theta.cols() != n) {
        throw DomainError("layout: pair_kr and pair_cos_theta must both be N x N");
    }
    if (!layout.positions.empty() && static_cast<Index>(layout.positions.size()) != n) {
        throw DomainError("layout: positions must be empty or list one entry per atom");
    }
    require_symmetric_zero_diagonal(layout.pair_kr, "pair_kr");
    require_symmetric_zero_diagonal(layout.pair_cos_theta, "pair_cos_theta");
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (i == j) continue;
            if (!(layout.pair_kr(i, j) > 0.0) || !std::isfinite(layout.pair_kr(i, j))) {
                throw DomainError("pair_kr: off-diagonal entries must be positive and finite");
            }
            const double c = layout.pair_cos_theta(i, j);
            if (!(c >= -1.0 && c <= 1.0)) {
                throw DomainError("pair_cos_theta: entries must lie in [-1, 1]");
            }
        }
    }
}

PairGeometry derive_pair_geometry(const EmitterLayout& layout)
{
    validate_layout(layout);
    if (layout.mode == LayoutMode::Pairwise) {
        return {layout.pair_kr, layout.pair_cos_theta};
    }

    const Index n = layout.size();
    PairGeometry g{RealMatrix::Zero(n, n), RealMatrix::Zero(n, n)};
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const Vec3 d = layout.positions[static_cast<std::size_t>(i)] - layout.positions[static_cast<std::size_t>(j)];
            const double r = d.norm();
            if (!(r > 0.0)) {
                throw DomainError("degenerate geometry: atoms " + std::to_string(i) + " and " +
                                  std::to_string(j) + " coincide");
            }
            // cos^2 is all the kernels use, so the sign convention of d is irrelevant.
            const double c = layout.dipole_direction.dot(d) / r;
            g.kr(i, j) = g.kr(j, i) = r;
            g.cos_theta(i, j) = g.cos_theta(j, i) = c;
        }
    }
    return g;
}

PairCouplings build_couplings(const EmitterLayout& layout)
{
    const PairGeometry g = derive_pair_geometry(layout);
    const Index n = g.kr.rows();
    PairCouplings c{RealMatrix::Identity(n, n), RealMatrix::Zero(n, n)};
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const double gij = coupling_gamma(g.kr(i, j), g.cos_theta(i, j));
            const double oij = coupling_omega(g.kr(i, j), g.cos_theta(i, j));
            c.gamma(i, j) = c.gamma(j, i) = gij;
            c.omega(i, j) = c.omega(j, i) = oij;
        }
    }
    return c;
}

void validate_couplings(const PairCouplings& c)
{
    const Index n = c.gamma.rows();
    if (n < 1 || c.gamma.cols() != n || c.omega.rows() != n || c.omega.cols() != n) {
        throw DomainError("couplings: gamma and omega must both be N x N with N >= 1");
    }
    if (!c.gamma.allFinite() || !c.omega.allFinite()) {
        throw DomainError("couplings: entries must be finite");
    }
    for (Index i = 0; i < n; ++i) {
        if (c.gamma(i, i) != 1.0 || c.omega(i, i) != 0.0) {
            throw DomainError("couplings: gamma diagonal must be 1 and omega diagonal 0");
        }
        for (Index j = 0; j < n; ++j) {
            if (c.gamma(i, j) != c.gamma(j, i) || c.omega(i, j) != c.omega(j, i)) {
                throw DomainError("couplings: matrices must be exactly symmetric");
            }
            if (std::abs(c.gamma(i, j)) > 1.0) {
                throw DomainError("couplings: gamma entries must lie in [-1, 1]");
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(c.gamma, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) {
        throw DomainError("couplings: gamma matrix is not positive semidefinite");
    }
}

StrongRegimeReport validate_strong_regime(const PairCouplings& couplings, double rabi)
{
    if (!(rabi > 0.0)) {
        throw DomainError("validate_strong_regime: rabi must be positive");
    }
    StrongRegimeReport report;
    report.rabi = rabi;
    const Index n = couplings.size();
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            PairRegime p;
            p.i = i;
            p.j = j;
            p.gamma = couplings.gamma(i, j);
            p.omega = couplings.omega(i, j);
            p.strong_interaction = std::abs(p.omega) > report.interaction_factor;
            p.gamma_near_unity = std::abs(1.0 - p.gamma) < report.gamma_window;
            p.driving_ratio = rabi * rabi / (1.0 + 4.0 * p.omega * p.omega);
            p.strong_driving = p.driving_ratio > report.driving_factor;
            report.pairs.push_back(p);
        }
    }
    return report;
}

} // namespace dressedspec
