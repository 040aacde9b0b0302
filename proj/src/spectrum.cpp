// spectrum.cpp: quantum-regression correlation and spectral transforms

#include "dressedspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "dressedspec/qops.hpp"

namespace dressedspec {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPlateauTolerance = 1e-4;
constexpr double kConditionLimit = 1e8;
constexpr double kDarkThreshold = 1e-14;

// Row vector r with r * vec(X) = Tr[A X].
Eigen::RowVectorXcd trace_functional(const ComplexMatrix& a)
{
    const ComplexMatrix at = a.transpose();
    return Eigen::Map<const Eigen::RowVectorXcd>(at.data(), at.size());
}

double emission_denominator(const DensityMatrix& rho, const FieldOperator& field)
{
    const ComplexMatrix raise = field.op.adjoint();
    const double den = expectation(raise * field.op, rho).real();
    if (!(den > kDarkThreshold)) {
        throw NumericalError("g1: steady state does not emit (<E E^dagger> = " + std::to_string(den) + ")");
    }
    return den;
}

void check_dims(const Liouvillian& l, const SteadyState& s, const FieldOperator& f)
{
    if (s.rho.rows() != l.dim || f.op.rows() != l.dim) {
        throw DomainError("spectrum: dimension mismatch between Liouvillian, steady state and field");
    }
}

// Solves (shift I - h) u = b for upper-Hessenberg h by Gaussian elimination
// with adjacent-row pivoting, O(n^2).
ComplexVector solve_shifted_hessenberg(const ComplexMatrix& h, cplx shift, ComplexVector b)
{
    const Index n = h.rows();
    ComplexMatrix a = -h;
    a.diagonal().array() += shift;
    for (Index k = 0; k + 1 < n; ++k) {
        if (std::abs(a(k + 1, k)) > std::abs(a(k, k))) {
            a.row(k).tail(n - k).swap(a.row(k + 1).tail(n - k));
            std::swap(b(k), b(k + 1));
        }
        if (a(k + 1, k) == cplx(0.0)) continue;
        const cplx m = a(k + 1, k) / a(k, k);
        a.row(k + 1).tail(n - k) -= m * a.row(k).tail(n - k);
        b(k + 1) -= m * b(k);
    }
    for (Index k = n - 1; k >= 0; --k) {
        cplx acc = b(k);
        for (Index j = k + 1; j < n; ++j) acc -= a(k, j) * b(j);
        b(k) = acc / a(k, k);
    }
    return b;
}

} // namespace

FieldOperator field_operator(const EmitterLayout& layout, const Vec3& direction)
{
    if (std::abs(direction.norm() - 1.0) > 1e-12) {
        throw DomainError("field_operator: direction must have unit norm");
    }
    const Index n = layout.size();
    const Index dim = hilbert_dim(n);
    FieldOperator f;
    f.direction = direction;
    f.op = QuantumOperator::Zero(dim, dim);
    for (Index j = 0; j < n; ++j) {
        const double phase = direction.dot(layout.position(j));
        f.op += std::exp(cplx(0.0, -phase)) * site_lowering(j, n);
    }
    return f;
}

Vec3 default_observation_direction(const EmitterLayout& layout)
{
    const Vec3 d = layout.dipole_direction.normalized();
    // Cross with the coordinate axis least aligned with the dipole.
    Index axis = 0;
    d.cwiseAbs().minCoeff(&axis);
    return d.cross(Vec3::Unit(axis)).normalized();
}

TauGrid make_tau_grid(double step, double length)
{
    if (!(step > 0.0) || !(length > 0.0) || !std::isfinite(step) || !std::isfinite(length)) {
        throw DomainError("tau grid: step and length must be positive");
    }
    TauGrid g;
    g.step = step;
    g.count = static_cast<Index>(std::ceil(length / step - 1e-9)) + 1;
    return g;
}

double coherent_fraction(const SteadyState& steady, const FieldOperator& field)
{
    const double den = emission_denominator(steady.rho, field);
    return std::norm(expectation(field.op, steady.rho)) / den;
}

CorrelationTrace g1_correlation(const Liouvillian& l,
                                const SteadyState& steady,
                                const FieldOperator& field,
                                const TauGrid& grid)
{
    check_dims(l, steady, field);
    if (grid.count < 2 || !(grid.step > 0.0)) {
        throw DomainError("g1_correlation: tau grid needs at least two points and a positive step");
    }
    CorrelationTrace trace;
    trace.grid = grid;
    trace.steady_rho = steady.rho;
    trace.spectral_gap = steady.spectral_gap;
    trace.denominator = emission_denominator(steady.rho, field);
    trace.plateau = std::norm(expectation(field.op, steady.rho)) / trace.denominator;

    const ComplexMatrix raise = field.op.adjoint();
    const Eigen::RowVectorXcd observe = trace_functional(field.op);
    const Propagator step(l, grid.step);

    ComplexVector x = vectorize(steady.rho * raise);
    ComplexVector next(x.size());
    trace.values.resize(grid.count);
    for (Index n = 0; n < grid.count; ++n) {
        trace.values(n) = (observe * x)(0) / trace.denominator;
        next.noalias() = step.map() * x;
        x.swap(next);
    }
    return trace;
}

const char* to_string(SpectrumMethod m)
{
    return m == SpectrumMethod::WindowedFourier ? "WindowedFourier" : "EigenDecomposition";
}

RealVector uniform_omega_grid(double omega_max, double step)
{
    if (!(omega_max > 0.0) || !(step > 0.0) || step > omega_max) {
        throw DomainError("omega grid: need 0 < step <= omega_max");
    }
    const Index k = static_cast<Index>(std::floor(omega_max / step + 1e-9));
    RealVector w(2 * k + 1);
    for (Index i = -k; i <= k; ++i) {
        w(i + k) = static_cast<double>(i) * step;
    }
    return w;
}

Spectrum spectrum_fourier(const CorrelationTrace& trace, double omega_max, double omega_step)
{
    const Index count = trace.values.size();
    const double dt = trace.grid.step;
    if (count < 2 || !(omega_max > 0.0) || !(omega_step > 0.0)) {
        throw DomainError("spectrum_fourier: invalid trace or frequency window");
    }
    const double tail = std::abs(trace.values(count - 1) - trace.plateau);
    if (!(tail < kPlateauTolerance)) {
        std::ostringstream msg;
        msg << "spectrum_fourier: trace of length " << trace.grid.length()
            << " has not reached its plateau (|g1(T) - g_inf| = " << tail << ")";
        if (trace.spectral_gap > 0.0) {
            msg << "; estimated required length "
                << trace.grid.length() + std::log(tail / kPlateauTolerance) / trace.spectral_gap;
        }
        throw DomainError(msg.str());
    }
    if (omega_max >= kPi / dt) {
        throw DomainError("spectrum_fourier: omega window exceeds the Nyquist frequency of the tau grid");
    }

    const std::size_t min_len = static_cast<std::size_t>(2 * count - 1);
    const std::size_t res_len = static_cast<std::size_t>(std::ceil(2.0 * kPi / (omega_step * dt)));
    std::size_t len = 1;
    while (len < std::max(min_len, res_len)) len <<= 1;

    // Trapezoid weights on [-T, T]: only the two end points carry 1/2.
    std::vector<cplx> samples(len, cplx(0.0));
    for (Index n = 0; n < count; ++n) {
        const double w = (n == count - 1) ? 0.5 : 1.0;
        const cplx f = w * (trace.values(n) - trace.plateau);
        samples[static_cast<std::size_t>(n)] = f;
        if (n > 0) samples[len - static_cast<std::size_t>(n)] = std::conj(f);
    }
    Eigen::FFT<double> fft;
    std::vector<cplx> out;
    fft.fwd(out, samples);

    const double dw = 2.0 * kPi / (static_cast<double>(len) * dt);
    const Index k = static_cast<Index>(std::floor(omega_max / dw));
    Spectrum s;
    s.method = SpectrumMethod::WindowedFourier;
    s.coherent_weight = std::abs(trace.plateau);
    s.omega.resize(2 * k + 1);
    s.values.resize(2 * k + 1);
    for (Index i = -k; i <= k; ++i) {
        const std::size_t bin = i >= 0 ? static_cast<std::size_t>(i) : len - static_cast<std::size_t>(-i);
        const cplx v = dt * out[bin];
        s.omega(i + k) = static_cast<double>(i) * dw;
        s.values(i + k) = v.real();
        s.imag_residual = std::max(s.imag_residual, std::abs(v.imag()));
    }
    return s;
}

Spectrum spectrum_eigen(const Liouvillian& l,
                        const SteadyState& steady,
                        const FieldOperator& field,
                        const RealVector& omega_grid)
{
    check_dims(l, steady, field);
    const double den = emission_denominator(steady.rho, field);

    Eigen::ComplexEigenSolver<ComplexMatrix> es(l.matrix, true);
    double condition = std::numeric_limits<double>::infinity();
    if (es.info() == Eigen::Success) {
        const RealVector sv = Eigen::BDCSVD<ComplexMatrix>(es.eigenvectors()).singularValues();
        condition = sv(0) / sv(sv.size() - 1);
    }
    if (!(condition < kConditionLimit)) {
        Spectrum s = spectrum_resolvent(l, steady, field, omega_grid);
        std::ostringstream msg;
        msg << "Liouvillian eigenvector condition number " << condition
            << " >= 1e8; used the resolvent route instead of the eigenmode expansion";
        s.warnings.push_back(msg.str());
        return s;
    }

    const ComplexVector& lambda = es.eigenvalues();
    const ComplexMatrix& modes = es.eigenvectors();
    const ComplexVector start = vectorize(steady.rho * field.op.adjoint());
    const ComplexVector coeff = modes.partialPivLu().solve(start);
    const Eigen::RowVectorXcd observe = trace_functional(field.op);
    const ComplexVector weights = ((observe * modes).transpose().array() * coeff.array() / den).matrix();

    Index zero_mode = 0;
    lambda.cwiseAbs().minCoeff(&zero_mode);

    Spectrum s;
    s.method = SpectrumMethod::EigenDecomposition;
    s.coherent_weight = coherent_fraction(steady, field);
    s.omega = omega_grid;
    s.values.resize(omega_grid.size());
    for (Index w = 0; w < omega_grid.size(); ++w) {
        const cplx iw(0.0, omega_grid(w));
        cplx acc(0.0);
        for (Index k = 0; k < lambda.size(); ++k) {
            if (k == zero_mode) continue;
            acc += weights(k) / (iw - lambda(k));
        }
        s.values(w) = 2.0 * acc.real();
    }
    return s;
}

Spectrum spectrum_resolvent(const Liouvillian& l,
                            const SteadyState& steady,
                            const FieldOperator& field,
                            const RealVector& omega_grid)
{
    check_dims(l, steady, field);
    const double den = emission_denominator(steady.rho, field);

    // Remove the stationary component so the resolvent is regular at omega = 0.
    const ComplexMatrix start = steady.rho * field.op.adjoint();
    const ComplexVector y = vectorize(start - start.trace() * steady.rho);

    Eigen::HessenbergDecomposition<ComplexMatrix> hd(l.matrix);
    const ComplexMatrix q = hd.matrixQ();
    const ComplexMatrix h = hd.matrixH();
    const ComplexVector qy = q.adjoint() * y;
    const Eigen::RowVectorXcd observe = trace_functional(field.op) * q;

    Spectrum s;
    s.method = SpectrumMethod::EigenDecomposition;
    s.coherent_weight = coherent_fraction(steady, field);
    s.omega = omega_grid;
    s.values.resize(omega_grid.size());
    for (Index w = 0; w < omega_grid.size(); ++w) {
        const ComplexVector u = solve_shifted_hessenberg(h, cplx(0.0, omega_grid(w)), qy);
        s.values(w) = 2.0 * (observe * u)(0).real() / den;
    }
    return s;
}

double relative_l2(const Spectrum& a, const Spectrum& b, double exclude_below)
{
    if (a.omega.size() != b.omega.size() || (a.omega - b.omega).cwiseAbs().maxCoeff() > 1e-9) {
        throw DomainError("relative_l2: spectra must share a frequency grid");
    }
    double num = 0.0;
    double ref = 0.0;
    for (Index i = 0; i < a.omega.size(); ++i) {
        if (std::abs(a.omega(i)) <= exclude_below) continue;
        const double d = a.values(i) - b.values(i);
        num += d * d;
        ref += a.values(i) * a.values(i);
    }
    return ref > 0.0 ? std::sqrt(num / ref) : std::sqrt(num);
}

} // namespace dressedspec
