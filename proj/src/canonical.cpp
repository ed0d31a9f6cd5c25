#include "ptqho/canonical.hpp"

#include <cmath>
#include <stdexcept>

#include "ptqho/errors.hpp"

namespace ptqho {

namespace {

CovarianceState axpy(const CovarianceState& s, double h, const CovarianceState& d) {
    return {s.q + h * d.q, s.p + h * d.p, s.sqq + h * d.sqq,
            s.spp + h * d.spp, s.spq + h * d.spq};
}

} // namespace

CovarianceState canonical_rhs(const CovarianceState& s, const OscillatorParams& p) {
    const double m = p.mass;
    const double mo2 = m * p.frequency * p.frequency;
    const double d = p.displacement;
    CovarianceState out;
    out.q = s.p / m - mo2 * d * s.sqq;
    out.p = -mo2 * s.q - mo2 * d * s.spq;
    out.sqq = 2.0 / m * s.spq;
    out.spp = -2.0 * mo2 * s.spq;
    out.spq = s.spp / m - mo2 * s.sqq;
    return out;
}

CovarianceState init_from_packet(double sigma, double q0, double p0,
                                 const OscillatorParams& params) {
    if (sigma <= 0.0) throw std::invalid_argument("init_from_packet: sigma must be > 0");
    CovarianceState s;
    s.q = q0;
    s.p = p0;
    s.sqq = 1.0 / (2.0 * sigma * params.hbar);
    s.spp = 2.0 * sigma * params.hbar;
    s.spq = 0.0;
    return s;
}

std::vector<TrajectoryPoint> integrate(const CovarianceState& state0, double t_end, double dt,
                                       const OscillatorParams& params, std::size_t stride,
                                       double purity_tol) {
    if (dt <= 0.0 || t_end < 0.0)
        throw std::invalid_argument("integrate: need dt > 0 and t_end >= 0");
    if (stride == 0) stride = 1;

    const auto n_steps = static_cast<std::size_t>(std::llround(t_end / dt));
    const double purity0 = state0.purity();

    std::vector<TrajectoryPoint> traj;
    traj.reserve(n_steps / stride + 2);
    CovarianceState s = state0;
    traj.push_back({0.0, s});
    for (std::size_t i = 0; i < n_steps; ++i) {
        const CovarianceState k1 = canonical_rhs(s, params);
        const CovarianceState k2 = canonical_rhs(axpy(s, 0.5 * dt, k1), params);
        const CovarianceState k3 = canonical_rhs(axpy(s, 0.5 * dt, k2), params);
        const CovarianceState k4 = canonical_rhs(axpy(s, dt, k3), params);
        s.q += dt / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
        s.p += dt / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
        s.sqq += dt / 6.0 * (k1.sqq + 2.0 * k2.sqq + 2.0 * k3.sqq + k4.sqq);
        s.spp += dt / 6.0 * (k1.spp + 2.0 * k2.spp + 2.0 * k3.spp + k4.spp);
        s.spq += dt / 6.0 * (k1.spq + 2.0 * k2.spq + 2.0 * k3.spq + k4.spq);
        if ((i + 1) % stride == 0 || i + 1 == n_steps)
            traj.push_back({(i + 1) * dt, s});
        // inverted predicate so a NaN state also trips the failure path
        if (!(std::abs(s.purity() - purity0) <= purity_tol * std::max(1.0, purity0)))
            throw NumericalError("integrate: covariance purity drifted at t = " +
                                 std::to_string((i + 1) * dt));
    }
    return traj;
}

} // namespace ptqho
