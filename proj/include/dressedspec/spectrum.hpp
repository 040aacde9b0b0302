// spectrum.hpp: first-order field correlation and the one-photon spectrum

#pragma once

#include <string>
#include <vector>

#include "dressedspec/dynamics.hpp"
#include "dressedspec/geometry.hpp"
#include "dressedspec/types.hpp"

namespace dressedspec {

// Far-field lowering operator sum_j s_j^- exp(-i n.r_j) for observation direction n.
struct FieldOperator {
    Vec3 direction{Vec3::UnitX()};
    QuantumOperator op;
};

FieldOperator field_operator(const EmitterLayout& layout, const Vec3& direction);

// A unit vector orthogonal to the layout's dipole direction.
Vec3 default_observation_direction(const EmitterLayout& layout);

// Uniform delay grid tau_n = n * step, n = 0 .. count-1.
struct TauGrid {
    double step{2.5e-4};
    Index count{160001};

    double length() const { return step * static_cast<double>(count - 1); }
};

// Make a grid of the given spacing that reaches at least `length`.
TauGrid make_tau_grid(double step, double length);

struct CorrelationTrace {
    TauGrid grid;
    ComplexVector values;     // g1(tau_n), normalized so values[0] = 1
    double denominator{0.0};  // <E E^dagger> at steady state
    double plateau{0.0};      // lim_{tau -> inf} g1 (coherent part), real by construction
    double spectral_gap{0.0};
    DensityMatrix steady_rho; // the steady state the trace was started from
};

// g1(tau) = Tr[E^dag e^{L tau}(rho E)] / Tr[rho E E^dag] by the quantum regression theorem.
CorrelationTrace g1_correlation(const Liouvillian& l,
                                const SteadyState& steady,
                                const FieldOperator& field,
                                const TauGrid& grid);

// |<E>|^2 / <E E^dagger>, the elastic fraction of the emission.
double coherent_fraction(const SteadyState& steady, const FieldOperator& field);

enum class SpectrumMethod { WindowedFourier, EigenDecomposition };

const char* to_string(SpectrumMethod m);

struct Spectrum {
    RealVector omega;              // laser frame, symmetric about zero
    RealVector values;             // incoherent S(omega)
    double coherent_weight{0.0};   // elastic component reported separately
    SpectrumMethod method{SpectrumMethod::WindowedFourier};
    double imag_residual{0.0};     // max |Im| of the transform before taking the real part
    std::vector<std::string> warnings;

    double spacing() const { return omega.size() > 1 ? omega(1) - omega(0) : 0.0; }
};

// omega_k = k * step for |omega_k| <= omega_max.
RealVector uniform_omega_grid(double omega_max, double step);

// Trapezoid transform of the plateau-subtracted trace extended to negative
// delays by g1(-tau) = conj(g1(tau)). The output grid spacing is
// 2 pi / (M step) with M the FFT length, never coarser than omega_step.
Spectrum spectrum_fourier(const CorrelationTrace& trace, double omega_max, double omega_step);

// Closed-form Lorentzian sum over Liouvillian eigenmodes. Falls back to
// spectrum_resolvent (with a warning) when the eigenvector basis is ill-conditioned.
Spectrum spectrum_eigen(const Liouvillian& l,
                        const SteadyState& steady,
                        const FieldOperator& field,
                        const RealVector& omega_grid);

// S(omega) = 2 Re Tr[E^dag (i omega - L)^{-1} (rho E - <E> rho)] / <E E^dag>,
// solved on a Hessenberg reduction of L; needs no diagonalizability.
Spectrum spectrum_resolvent(const Liouvillian& l,
                            const SteadyState& steady,
                            const FieldOperator& field,
                            const RealVector& omega_grid);

// Relative L2 distance of b from a on points where |omega| > exclude_below.
double relative_l2(const Spectrum& a, const Spectrum& b, double exclude_below);

} // namespace dressedspec
