#ifndef PTQHO_CANONICAL_HPP
#define PTQHO_CANONICAL_HPP

#include <vector>

#include "ptqho/oscillator.hpp"

namespace ptqho {

/// Mean position/momentum plus the symmetric covariance block.
///
/// Covariances are stored in hbar/2 units: sqq = (2/hbar) <dx^2>,
/// spp = (2/hbar) <dp^2>, spq = (2/hbar) <sym dx dp>.  In these units a pure
/// Gaussian state has sqq*spp - spq^2 = 1, and the mean-value equations
/// reproduce the closed-form trajectory with no extra scale factors.
struct CovarianceState {
    double q = 0.0;
    double p = 0.0;
    double sqq = 1.0;
    double spp = 1.0;
    double spq = 0.0;

    double purity() const { return sqq * spp - spq * spq; }
    bool physical() const { return sqq > 0.0 && spp > 0.0 && purity() >= 1.0 - 1e-9; }
};

/// Time derivative of the five state components.  The covariance block is
/// closed in itself and independent of the displacement; only the mean
/// values couple to delta.
CovarianceState canonical_rhs(const CovarianceState& state, const OscillatorParams& params);

/// Map the initial packet exp[-sigma (x-q0)^2 + i p0 x / hbar] to its
/// phase-space state: sqq = 1/(2 sigma hbar), spp = 2 sigma hbar, spq = 0.
CovarianceState init_from_packet(double sigma, double q0, double p0,
                                 const OscillatorParams& params);

struct TrajectoryPoint {
    double t;
    CovarianceState state;
};

/// Fixed-step classical RK4 over [0, t_end], sampled every `stride` steps
/// (the final state is always included).  Throws NumericalError if the
/// purity invariant drifts beyond purity_tol.
std::vector<TrajectoryPoint> integrate(const CovarianceState& state0, double t_end, double dt,
                                       const OscillatorParams& params, std::size_t stride = 1,
                                       double purity_tol = 1e-6);

} // namespace ptqho

#endif
