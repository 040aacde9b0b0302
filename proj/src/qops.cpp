// qops.cpp: expectation values and density-matrix checks

#include "dressedspec/qops.hpp"

#include <cmath>

namespace dressedspec {

cplx expectation(const QuantumOperator& op, const DensityMatrix& rho)
{
    if (op.rows() != op.cols() || rho.rows() != rho.cols() || op.rows() != rho.rows()) {
        throw DomainError("expectation: dimension mismatch");
    }
    // Tr(A B) = sum_ij A_ij B_ji without forming the product.
    return op.cwiseProduct(rho.transpose()).sum();
}

DensityCheck check_density(const DensityMatrix& rho)
{
    if (rho.rows() != rho.cols() || rho.rows() == 0) {
        throw DomainError("check_density: matrix must be square and non-empty");
    }
    DensityCheck c;
    c.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    c.trace_error = std::abs(rho.trace() - cplx(1.0, 0.0));
    const ComplexMatrix h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    c.min_eigenvalue = es.eigenvalues().minCoeff();
    return c;
}

DensityMatrix pure_state(const ComplexVector& psi)
{
    return psi * psi.adjoint();
}

ComplexVector basis_ket(Index dim, Index index)
{
    if (index < 0 || index >= dim) {
        throw DomainError("basis_ket: index out of range");
    }
    ComplexVector v = ComplexVector::Zero(dim);
    v(index) = 1.0;
    return v;
}

} // namespace dressedspec
