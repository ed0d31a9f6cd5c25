#include "ptqho/reference.hpp"

#include <cmath>
#include <stdexcept>

#include "ptqho/errors.hpp"
#include "ptqho/units.hpp"

namespace ptqho::ref {

namespace {

using cvec = std::vector<std::complex<double>>;

cplx kernel_prefactor_collins(double b_elem, double lambda) {
    // sqrt(i / (lambda B)), principal branch
    return std::sqrt(cplx(0.0, 1.0) / cplx(lambda * b_elem, 0.0));
}

struct MehlerSetup {
    double beta;     // m Omega / (2 hbar sin)
    double coswt;
    cplx pref;       // sqrt(beta / (i pi))
};

MehlerSetup mehler_setup(double t, const OscillatorParams& p) {
    const double w = p.frequency * t;
    const double s = std::sin(w);
    if (std::abs(s) < 1e-12)
        throw SingularTimeError("oscillator_quadrature: focal time, |sin(Omega t)| ~ 0");
    MehlerSetup ms;
    ms.beta = p.mass * p.frequency / (2.0 * p.hbar * s);
    ms.coswt = std::cos(w);
    ms.pref = std::sqrt(cplx(ms.beta, 0.0) / cplx(0.0, std::numbers::pi));
    return ms;
}

} // namespace

namespace serial {

cvec collins_direct(const SpatialGrid& grid, const cvec& in, const ABCDMatrix& m,
                    double lambda) {
    if (in.size() != grid.n) throw std::invalid_argument("collins_direct: size mismatch");
    if (m.B == 0.0) throw std::invalid_argument("collins_direct: B = 0");
    const double k = units::two_pi / lambda;
    const double c0 = k / (2.0 * m.B);
    const cplx pref = kernel_prefactor_collins(m.B, lambda) * grid.dx();
    cvec out(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < grid.n; ++j) {
            const double xi = grid.x(j);
            const double phase = -c0 * (m.D * x * x + m.A * xi * xi - 2.0 * xi * x);
            acc += in[j] * std::exp(cplx(0.0, phase));
        }
        out[i] = pref * acc;
    }
    return out;
}

cvec oscillator_quadrature(const SpatialGrid& in_grid, const cvec& psi0,
                           const SpatialGrid& out_grid, double t,
                           const OscillatorParams& p) {
    if (psi0.size() != in_grid.n)
        throw std::invalid_argument("oscillator_quadrature: size mismatch");
    const MehlerSetup ms = mehler_setup(t, p);
    const cplx i1(0.0, 1.0);
    const cplx d_shift(0.0, -p.displacement);  // x - i delta
    const cplx pref = ms.pref * in_grid.dx();
    cvec out(out_grid.n);
    for (std::size_t i = 0; i < out_grid.n; ++i) {
        const cplx x = out_grid.x(i) + d_shift;
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < in_grid.n; ++j) {
            const cplx xi = in_grid.x(j) + d_shift;
            const cplx expo = i1 * ms.beta * ((x * x + xi * xi) * ms.coswt - 2.0 * x * xi);
            acc += psi0[j] * std::exp(expo);
        }
        out[i] = pref * acc;
    }
    return out;
}

} // namespace serial

cvec collins_direct(const SpatialGrid& grid, const cvec& in, const ABCDMatrix& m,
                    double lambda) {
    if (in.size() != grid.n) throw std::invalid_argument("collins_direct: size mismatch");
    if (m.B == 0.0) throw std::invalid_argument("collins_direct: B = 0");
    const double k = units::two_pi / lambda;
    const double c0 = k / (2.0 * m.B);
    const double dxi = grid.dx();
    const cplx pref = kernel_prefactor_collins(m.B, lambda) * dxi;
    const std::size_t n = grid.n;

    // xi-only factor exp(-i c0 A xi^2) psi(xi), shared by all output points
    cvec w(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double xi = grid.x(j);
        w[j] = in[j] * std::exp(cplx(0.0, -c0 * m.A * xi * xi));
    }

    cvec out(n);
#pragma omp parallel for schedule(static) if (n * n >= parallel_min_work)
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double x = grid.x(i);
        // remaining phase: exp(+2 i c0 x xi), advanced by a unit rotation per j
        const double step_phase = 2.0 * c0 * x * dxi;
        const cplx step = std::exp(cplx(0.0, step_phase));
        cplx rot = std::exp(cplx(0.0, 2.0 * c0 * x * grid.x(0)));
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j % resync_stride == 0 && j > 0)
                rot = std::exp(cplx(0.0, 2.0 * c0 * x * grid.x(j)));
            acc += w[j] * rot;
            rot *= step;
        }
        out[i] = pref * acc * std::exp(cplx(0.0, -c0 * m.D * x * x));
    }
    return out;
}

cvec oscillator_quadrature(const SpatialGrid& in_grid, const cvec& psi0,
                           const SpatialGrid& out_grid, double t,
                           const OscillatorParams& p) {
    if (psi0.size() != in_grid.n)
        throw std::invalid_argument("oscillator_quadrature: size mismatch");
    const MehlerSetup ms = mehler_setup(t, p);
    const double beta = ms.beta;
    const double cw = ms.coswt;
    const double d = p.displacement;
    const cplx i1(0.0, 1.0);
    const double dxi = in_grid.dx();
    const cplx pref = ms.pref * dxi;
    const std::size_t n_in = in_grid.n;
    const std::size_t n_out = out_grid.n;

    // Split the exponent i beta [(x~^2 + xi~^2) cos - 2 x~ xi] with
    // x~ = x - i d, xi~ = xi - i d into xi-only, x-only and a pure phase
    // rotation exp(-2 i beta x xi) handled by recurrence.
    cvec w(n_in);
    for (std::size_t j = 0; j < n_in; ++j) {
        const double xi = in_grid.x(j);
        const cplx xit = cplx(xi, -d);
        w[j] = psi0[j] * std::exp(i1 * beta * cw * xit * xit - 2.0 * beta * d * xi);
    }

    cvec out(n_out);
#pragma omp parallel for schedule(static) if (n_out * n_in >= parallel_min_work)
    for (long long ii = 0; ii < static_cast<long long>(n_out); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double x = out_grid.x(i);
        const cplx xt = cplx(x, -d);
        const cplx xfac = std::exp(i1 * beta * cw * xt * xt - 2.0 * beta * d * xt);
        const cplx step = std::exp(cplx(0.0, -2.0 * beta * x * dxi));
        cplx rot = std::exp(cplx(0.0, -2.0 * beta * x * in_grid.x(0)));
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < n_in; ++j) {
            if (j % resync_stride == 0 && j > 0)
                rot = std::exp(cplx(0.0, -2.0 * beta * x * in_grid.x(j)));
            acc += w[j] * rot;
            rot *= step;
        }
        out[i] = pref * acc * xfac;
    }
    return out;
}

} // namespace ptqho::ref
