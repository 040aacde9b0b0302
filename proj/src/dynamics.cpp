// dynamics.cpp: master-equation assembly and solution

#include "dressedspec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "dressedspec/qops.hpp"

namespace dressedspec {

namespace {

constexpr double kUnitTolerance = 1e-12;
constexpr double kResidualLimit = 1e-9;
constexpr double kKernelTolerance = 1e-10;

Index checked_atoms(const EmitterLayout& layout, const PairCouplings& couplings)
{
    const Index n = layout.size();
    if (couplings.gamma.rows() != n || couplings.gamma.cols() != n ||
        couplings.omega.rows() != n || couplings.omega.cols() != n) {
        throw DomainError("atom count mismatch between layout (" + std::to_string(n) +
                          ") and couplings (" + std::to_string(couplings.gamma.rows()) + ")");
    }
    return n;
}

double one_norm(const ComplexMatrix& m)
{
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

} // namespace

void validate_drive(const DriveParameters& drive)
{
    if (!std::isfinite(drive.rabi) || drive.rabi < 0.0) {
        throw DomainError("drive: rabi must be finite and non-negative");
    }
    if (!std::isfinite(drive.detuning)) {
        throw DomainError("drive: detuning must be finite");
    }
    if (std::abs(drive.wave_vector_direction.norm() - 1.0) > kUnitTolerance) {
        throw DomainError("drive: wave_vector_direction must have unit norm");
    }
}

ComplexVector vectorize(const ComplexMatrix& x)
{
    return Eigen::Map<const ComplexVector>(x.data(), x.size());
}

ComplexMatrix unvectorize(const ComplexVector& v, Index dim)
{
    if (v.size() != dim * dim) {
        throw DomainError("unvectorize: length is not dim^2");
    }
    return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

ComplexMatrix left_multiplication(const ComplexMatrix& a)
{
    return Eigen::kroneckerProduct(ComplexMatrix::Identity(a.rows(), a.rows()), a);
}

ComplexMatrix right_multiplication(const ComplexMatrix& b)
{
    return Eigen::kroneckerProduct(b.transpose(), ComplexMatrix::Identity(b.rows(), b.rows()));
}

QuantumOperator build_hamiltonian_rotating(const EmitterLayout& layout,
                                           const PairCouplings& couplings,
                                           const DriveParameters& drive)
{
    validate_drive(drive);
    const Index n = checked_atoms(layout, couplings);
    const Index dim = hilbert_dim(n);

    QuantumOperator h = QuantumOperator::Zero(dim, dim);
    for (Index i = 0; i < n; ++i) {
        const double phase = drive.wave_vector_direction.dot(layout.position(i));
        const cplx drive_amp = 0.5 * drive.rabi * std::exp(cplx(0.0, -phase));
        const ComplexMatrix lower = site_lowering(i, n);
        h += drive_amp * lower + std::conj(drive_amp) * lower.adjoint();
        h += drive.detuning * site_number(i, n);
    }
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (i == j || couplings.omega(i, j) == 0.0) continue;
            h += couplings.omega(i, j) * (site_raising(i, n) * site_lowering(j, n));
        }
    }
    return h;
}

QuantumOperator build_hamiltonian_lab(const PairCouplings& couplings, double omega_a)
{
    if (!(omega_a > 0.0) || !std::isfinite(omega_a)) {
        throw DomainError("build_hamiltonian_lab: omega_a must be positive");
    }
    const Index n = couplings.size();
    QuantumOperator h = omega_a * total_number(n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (i == j || couplings.omega(i, j) == 0.0) continue;
            h += couplings.omega(i, j) * (site_raising(i, n) * site_lowering(j, n));
        }
    }
    return h;
}

ComplexMatrix build_dissipator(const PairCouplings& couplings)
{
    const Index n = couplings.size();
    const Index dim = hilbert_dim(n);
    const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);

    ComplexMatrix d = ComplexMatrix::Zero(dim * dim, dim * dim);
    for (Index i = 0; i < n; ++i) {
        const ComplexMatrix raise_i = site_raising(i, n);
        for (Index j = 0; j < n; ++j) {
            const double g = couplings.gamma(i, j);
            if (g == 0.0) continue;
            const ComplexMatrix lower_j = site_lowering(j, n);
            const ComplexMatrix hop = raise_i * lower_j;
            // sigma_j^- rho sigma_i^+  ->  (sigma_i^+)^T (x) sigma_j^-
            d += g * ComplexMatrix(Eigen::kroneckerProduct(raise_i.transpose(), lower_j));
            d -= 0.5 * g * ComplexMatrix(Eigen::kroneckerProduct(id, hop));
            d -= 0.5 * g * ComplexMatrix(Eigen::kroneckerProduct(hop.transpose(), id));
        }
    }
    return d;
}

Liouvillian build_liouvillian(const EmitterLayout& layout,
                              const PairCouplings& couplings,
                              const DriveParameters& drive)
{
    const QuantumOperator h = build_hamiltonian_rotating(layout, couplings, drive);
    Liouvillian l;
    l.atoms = couplings.size();
    l.dim = h.rows();
    // i [rho, H] = i rho H - i H rho
    l.matrix = cplx(0.0, 1.0) * (right_multiplication(h) - left_multiplication(h));
    l.matrix += build_dissipator(couplings);
    return l;
}

ComplexMatrix apply_liouvillian(const Liouvillian& l, const ComplexMatrix& x)
{
    if (x.rows() != l.dim || x.cols() != l.dim) {
        throw DomainError("apply_liouvillian: operator dimension does not match Liouvillian");
    }
    return unvectorize(l.matrix * vectorize(x), l.dim);
}

SteadyState steady_state(const Liouvillian& l)
{
    const Index dim = l.dim;
    const Index sdim = dim * dim;
    if (l.matrix.rows() != sdim || l.matrix.cols() != sdim) {
        throw DomainError("steady_state: Liouvillian has inconsistent shape");
    }

    SteadyState ss;
    Eigen::ComplexEigenSolver<ComplexMatrix> es(l.matrix, false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("steady_state: Liouvillian eigensolve failed");
    }
    ss.eigenvalues = es.eigenvalues();
    std::vector<Index> order(static_cast<std::size_t>(sdim));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return std::abs(ss.eigenvalues(a)) < std::abs(ss.eigenvalues(b));
    });
    ss.eigenvalues = ComplexVector(ss.eigenvalues(order));

    const double norm = one_norm(l.matrix);
    if (sdim > 1 && std::abs(ss.eigenvalues(1)) < kKernelTolerance * norm) {
        throw NumericalError("steady_state: non-unique steady state (second eigenvalue magnitude " +
                             std::to_string(std::abs(ss.eigenvalues(1))) + ")");
    }
    ss.spectral_gap = sdim > 1 ? -ss.eigenvalues.tail(sdim - 1).real().maxCoeff() : 0.0;

    // The trace functional is a left null vector of L, so row 0 (a diagonal
    // entry) is redundant and can carry the normalization instead.
    ComplexMatrix a = l.matrix;
    ComplexVector rhs = ComplexVector::Zero(sdim);
    a.row(0).setZero();
    for (Index k = 0; k < dim; ++k) {
        a(0, k * (dim + 1)) = 1.0;
    }
    rhs(0) = 1.0;
    const ComplexVector x = a.partialPivLu().solve(rhs);

    ComplexMatrix rho = unvectorize(x, dim);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace();
    ss.rho = rho;

    const ComplexMatrix lr = apply_liouvillian(l, ss.rho);
    ss.residual = Eigen::JacobiSVD<ComplexMatrix>(lr).singularValues()(0);
    if (!(ss.residual < kResidualLimit)) {
        throw NumericalError("steady_state: residual " + std::to_string(ss.residual) + " exceeds 1e-9");
    }
    const DensityCheck check = check_density(ss.rho);
    if (!check.valid(1e-10)) {
        throw NumericalError("steady_state: solution is not a valid density matrix (min eigenvalue " +
                             std::to_string(check.min_eigenvalue) + ")");
    }
    return ss;
}

DensityMatrix propagate(const Liouvillian& l, const DensityMatrix& rho0, double t)
{
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError("propagate: time must be finite and non-negative");
    }
    if (rho0.rows() != l.dim || rho0.cols() != l.dim) {
        throw DomainError("propagate: state dimension does not match Liouvillian");
    }
    if (t == 0.0) {
        return rho0;
    }
    const ComplexMatrix map = (l.matrix * cplx(t, 0.0)).exp();
    return unvectorize(map * vectorize(rho0), l.dim);
}

Propagator::Propagator(const Liouvillian& l, double dt) : dt_(dt)
{
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw DomainError("Propagator: step must be positive");
    }
    map_ = (l.matrix * cplx(dt, 0.0)).exp();
}

} // namespace dressedspec
