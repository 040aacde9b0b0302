// geometry.hpp: emitter layouts and light-mediated dipole-dipole kernels

#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "dressedspec/errors.hpp"
#include "dressedspec/types.hpp"

namespace dressedspec {

enum class LayoutMode { Geometric, Pairwise };

// Emitter ensemble. Lengths are in units of 1/k.
// Geometric: positions + dipole_direction define every pair.
// Pairwise: pair_kr / pair_cos_theta are given directly; positions are
// optional and only feed drive/field phases (empty means all at the origin).
struct EmitterLayout {
    LayoutMode mode{LayoutMode::Pairwise};
    std::vector<Vec3> positions;
    Vec3 dipole_direction{Vec3::UnitZ()};
    RealMatrix pair_kr;
    RealMatrix pair_cos_theta;

    Index size() const;
    // Position of atom i, the origin when none are stored.
    Vec3 position(Index i) const;
};

struct PairGeometry {
    RealMatrix kr;
    RealMatrix cos_theta;
};

// Collective decay (gamma, diagonal 1) and coherent exchange (omega, diagonal 0)
// in units of the single-atom decay rate.
struct PairCouplings {
    RealMatrix gamma;
    RealMatrix omega;

    Index size() const { return gamma.rows(); }
};

EmitterLayout make_geometric_layout(std::vector<Vec3> positions, const Vec3& dipole_direction);
EmitterLayout make_pairwise_layout(RealMatrix pair_kr, RealMatrix pair_cos_theta);
// Uniform pairwise layout: every pair at the same kr and cos(theta).
EmitterLayout make_uniform_pairwise_layout(Index atoms, double kr, double cos_theta);

// Throws DomainError when the layout breaks its invariants.
void validate_layout(const EmitterLayout& layout);

PairGeometry derive_pair_geometry(const EmitterLayout& layout);

namespace detail {

// cos(x)/x^2 - sin(x)/x^3. The direct form cancels catastrophically for small x,
// so below x = 0.2 the Taylor series sum_n (-1)^n 2n x^(2n-2) / (2n+1)! is used.
template <typename Real>
Real near_field_sine_term(Real x)
{
    using std::cos;
    using std::sin;
    if (x < Real(0.2)) {
        const Real x2 = x * x;
        return Real(-1) / Real(3)
             + x2 * (Real(1) / Real(30)
             + x2 * (Real(-1) / Real(840)
             + x2 * (Real(1) / Real(45360)
             + x2 * (Real(-1) / Real(3991680)
             + x2 / Real(518918400)))));
    }
    return cos(x) / (x * x) - sin(x) / (x * x * x);
}

// 1 - 3 cos^2(theta), snapped to zero within a few ulps. No double equals
// 1/sqrt(3), and at small kr the (kr)^-3 term would otherwise turn that last
// ulp into a visible offset from the magic-angle closed forms. The snap is far
// below the kernel's own sensitivity to a one-ulp change of cos_theta.
template <typename Real>
Real near_field_angular(Real cos_theta)
{
    const Real a = Real(1) - Real(3) * cos_theta * cos_theta;
    return std::abs(a) <= Real(4) * std::numeric_limits<Real>::epsilon() ? Real(0) : a;
}

} // namespace detail

// Gamma_ij for a pair at distance kr with dipole angle cos_theta.
template <typename Real>
Real coupling_gamma(Real kr, Real cos_theta)
{
    using std::sin;
    if (!(kr > Real(0))) {
        throw DomainError("coupling_gamma: kr must be positive");
    }
    const Real c2 = cos_theta * cos_theta;
    const Real sinc = kr < Real(1e-4) ? Real(1) - kr * kr / Real(6) : sin(kr) / kr;
    return Real(1.5) * (Real(1) - c2) * sinc
         + Real(1.5) * detail::near_field_angular(cos_theta) * detail::near_field_sine_term(kr);
}

// Omega_ij (coherent dipole-dipole shift); diverges like kr^-3 off the magic angle.
template <typename Real>
Real coupling_omega(Real kr, Real cos_theta)
{
    using std::cos;
    using std::sin;
    if (!(kr > Real(0))) {
        throw DomainError("coupling_omega: kr must be positive");
    }
    const Real c2 = cos_theta * cos_theta;
    const Real k2 = kr * kr;
    return Real(-0.75) * (Real(1) - c2) * cos(kr) / kr
         + Real(0.75) * detail::near_field_angular(cos_theta) * (sin(kr) / k2 + cos(kr) / (k2 * kr));
}

PairCouplings build_couplings(const EmitterLayout& layout);

// Checks symmetry, diagonals, gamma range and positive semidefiniteness.
void validate_couplings(const PairCouplings& couplings);

struct PairRegime {
    Index i{0};
    Index j{0};
    double gamma{0.0};
    double omega{0.0};
    bool strong_interaction{false};  // |omega_ij| > interaction_factor
    bool gamma_near_unity{false};    // |1 - gamma_ij| < gamma_window
    double driving_ratio{0.0};       // rabi^2 / (1 + 4 omega_ij^2)
    bool strong_driving{false};      // driving_ratio > driving_factor
};

struct StrongRegimeReport {
    double rabi{0.0};
    double interaction_factor{10.0};
    double gamma_window{0.01};
    double driving_factor{10.0};
    std::vector<PairRegime> pairs;  // i < j
};

// Annotates each pair against the strong-interaction / strong-driving regime.
StrongRegimeReport validate_strong_regime(const PairCouplings& couplings, double rabi);

} // namespace dressedspec
