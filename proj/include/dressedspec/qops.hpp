// qops.hpp: site operators on the 2^N-dimensional space of N two-level emitters

#pragma once

#include <string>

#include "dressedspec/errors.hpp"
#include "dressedspec/types.hpp"

namespace dressedspec {

inline Index hilbert_dim(Index atoms)
{
    if (atoms < 1 || atoms > 12) {
        throw DomainError("atom count must lie in [1, 12], got " + std::to_string(atoms));
    }
    return Index{1} << atoms;
}

inline int excitation_count(Index basis_index)
{
    return __builtin_popcountll(static_cast<unsigned long long>(basis_index));
}

inline void require_site(Index site, Index atoms)
{
    if (site < 0 || site >= atoms) {
        throw DomainError("site index " + std::to_string(site) + " out of range for " +
                          std::to_string(atoms) + " atoms");
    }
}

// sigma_i^-: maps a ket with site i excited to the same ket with site i in the
// ground state. Built directly from bit arithmetic on the basis index.
template <typename Real = double>
ComplexMatrixT<Real> site_lowering(Index site, Index atoms)
{
    require_site(site, atoms);
    const Index dim = hilbert_dim(atoms);
    const Index bit = Index{1} << site;
    ComplexMatrixT<Real> op = ComplexMatrixT<Real>::Zero(dim, dim);
    for (Index b = 0; b < dim; ++b) {
        if (b & bit) {
            op(b ^ bit, b) = Real(1);
        }
    }
    return op;
}

template <typename Real = double>
ComplexMatrixT<Real> site_raising(Index site, Index atoms)
{
    return site_lowering<Real>(site, atoms).adjoint();
}

// sigma_i^+ sigma_i^-, the excitation projector of site i.
template <typename Real = double>
ComplexMatrixT<Real> site_number(Index site, Index atoms)
{
    require_site(site, atoms);
    const Index dim = hilbert_dim(atoms);
    const Index bit = Index{1} << site;
    ComplexMatrixT<Real> op = ComplexMatrixT<Real>::Zero(dim, dim);
    for (Index b = 0; b < dim; ++b) {
        if (b & bit) {
            op(b, b) = Real(1);
        }
    }
    return op;
}

// Total excitation number sum_i sigma_i^+ sigma_i^-.
template <typename Real = double>
ComplexMatrixT<Real> total_number(Index atoms)
{
    const Index dim = hilbert_dim(atoms);
    ComplexMatrixT<Real> op = ComplexMatrixT<Real>::Zero(dim, dim);
    for (Index b = 0; b < dim; ++b) {
        op(b, b) = Real(excitation_count(b));
    }
    return op;
}

// Tr(op * rho).
cplx expectation(const QuantumOperator& op, const DensityMatrix& rho);

struct DensityCheck {
    double hermiticity_error{0.0};  // max |rho - rho^dagger|
    double trace_error{0.0};        // |Tr rho - 1|
    double min_eigenvalue{0.0};

    bool valid(double tolerance = 1e-10) const
    {
        return hermiticity_error <= tolerance && trace_error <= tolerance && min_eigenvalue >= -tolerance;
    }
};

DensityCheck check_density(const DensityMatrix& rho);

// Pure state |psi><psi| from a normalized ket.
DensityMatrix pure_state(const ComplexVector& psi);

// Basis ket |b> of dimension dim.
ComplexVector basis_ket(Index dim, Index index);

} // namespace dressedspec
