// dynamics.hpp: Hamiltonians, Liouvillian superoperator, steady state, propagation

#pragma once

#include <vector>

#include "dressedspec/geometry.hpp"
#include "dressedspec/types.hpp"

namespace dressedspec {

// Drive in units of the single-atom decay rate. detuning = omega_atom - omega_laser.
struct DriveParameters {
    double rabi{0.0};
    double detuning{0.0};
    Vec3 wave_vector_direction{Vec3::UnitZ()};
};

void validate_drive(const DriveParameters& drive);

// Generator of d rho/dt = L[rho] acting on column-stacked density matrices.
struct Liouvillian {
    ComplexMatrix matrix;  // dim^2 x dim^2
    Index atoms{0};
    Index dim{0};          // Hilbert-space dimension 2^atoms
};

// Column stacking: vec(X)(r + c * dim) = X(r, c).
ComplexVector vectorize(const ComplexMatrix& x);
ComplexMatrix unvectorize(const ComplexVector& v, Index dim);

// vec(A X) = (I (x) A) vec(X),  vec(X B) = (B^T (x) I) vec(X).
ComplexMatrix left_multiplication(const ComplexMatrix& a);
ComplexMatrix right_multiplication(const ComplexMatrix& b);

// Rotating-frame Hamiltonian of the driven, dipole-coupled ensemble.
QuantumOperator build_hamiltonian_rotating(const EmitterLayout& layout,
                                           const PairCouplings& couplings,
                                           const DriveParameters& drive);

// Lab-frame Hamiltonian omega_a sum_i n_i + sum_{i != j} omega_ij s_i^+ s_j^-
// (number-operator convention; conserves total excitation).
QuantumOperator build_hamiltonian_lab(const PairCouplings& couplings, double omega_a);

// Collective dissipator alone: 1/2 sum_ij gamma_ij (2 s_j^- rho s_i^+ - {s_i^+ s_j^-, rho}).
ComplexMatrix build_dissipator(const PairCouplings& couplings);

Liouvillian build_liouvillian(const EmitterLayout& layout,
                              const PairCouplings& couplings,
                              const DriveParameters& drive);

// L[x] for an operator x.
ComplexMatrix apply_liouvillian(const Liouvillian& l, const ComplexMatrix& x);

struct SteadyState {
    DensityMatrix rho;
    double residual{0.0};      // operator norm of L[rho]
    double spectral_gap{0.0};  // -Re of the slowest decaying non-zero mode
    ComplexVector eigenvalues; // Liouvillian spectrum sorted by magnitude
};

// Unique fixed point of L with trace one. Throws NumericalError when the
// kernel is degenerate or the residual certificate fails.
SteadyState steady_state(const Liouvillian& l);

// e^{L t}[rho0].
DensityMatrix propagate(const Liouvillian& l, const DensityMatrix& rho0, double t);

// Cached one-step map e^{L dt} for repeated propagation on a uniform grid.
class Propagator {
public:
    Propagator(const Liouvillian& l, double dt);

    double step() const { return dt_; }
    const ComplexMatrix& map() const { return map_; }
    ComplexVector advance(const ComplexVector& x) const { return map_ * x; }

private:
    double dt_;
    ComplexMatrix map_;
};

} // namespace dressedspec
