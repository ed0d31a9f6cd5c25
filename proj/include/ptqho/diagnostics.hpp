#ifndef PTQHO_DIAGNOSTICS_HPP
#define PTQHO_DIAGNOSTICS_HPP

#include <complex>
#include <optional>
#include <vector>

#include "ptqho/cavity.hpp"
#include "ptqho/grid.hpp"
#include "ptqho/oscillator.hpp"

namespace ptqho {

/// Integrated beam power on the grid (Riemann sum of |psi|^2).
double power(const TransverseField& field);

/// Power-weighted mean transverse position; empty when the power is at or
/// below `power_floor` (undefined-observable marker, not an error).
std::optional<double> center_of_mass(const TransverseField& field, double power_floor = 0.0);

/// Mean transverse momentum Re< psi | -i hbar d/dx | psi > / P by central
/// differences; empty below the floor.
std::optional<double> momentum_expectation(const TransverseField& field, double hbar,
                                           double power_floor = 0.0);

/// Per-round-trip observable record.  q/p carry the undefined marker while
/// the cavity is still empty.
struct ObservableSample {
    long n = 0;
    double power = 0.0;
    bool defined = false;   // q (and p) meaningful at this sample
    double q = 0.0;
    double p = 0.0;
};

struct ObservableSeries {
    std::vector<ObservableSample> samples;

    double peak_power() const;
    /// first index with defined q in [n_lo, n_hi], -1 if none
    long first_defined(long n_lo, long n_hi) const;
};

/// Least-squares slope of ln P(n) over n in [n_lo, n_hi].  Throws
/// NumericalError on non-positive power inside the window.
double fit_decay_rate(const ObservableSeries& series, long n_lo, long n_hi);

/// Least-squares sinusoid amplitudes of q(n) at omega and 2 omega over the
/// window (model: offset + two sinusoids; q is a power-normalized ratio, so
/// the per-trip exponential decay of the field cancels and needs no
/// compensation beyond this normalization).  Requires >= 3 periods of
/// defined samples.
struct SpectralAmplitudes {
    double at_omega;
    double at_2omega;
    double ratio() const { return at_omega > 0.0 ? at_2omega / at_omega : 0.0; }
};
SpectralAmplitudes trajectory_fourier(const ObservableSeries& series, double omega,
                                      long n_lo, long n_hi);

/// Scan+refine the oscillation frequency of q(n) by minimizing the residual
/// of the two-sinusoid fit; used to measure the period.
double fit_oscillation_frequency(const ObservableSeries& series, long n_lo, long n_hi,
                                 double omega_lo, double omega_hi);

/// Effective closed-form overlay for a map-driven run: the pulsed injection
/// builds a packet of the closed-form family, with an effective width
/// parameter and time origin set by the coherent pulse buildup.  Calibrated
/// by minimizing the max deviation over the window; scale_h rescales the
/// (q0, p0) harmonic part (zero when q0 = p0 = 0).
struct OverlayCalibration {
    double sigma_eff;
    double t0;
    double scale_h;
    double max_deviation;
    double q0, p0;   // nominal launch values the harmonic part refers to

    double theory_h(double n, const OscillatorParams& params) const;
    double theory_nh(double n, const OscillatorParams& params) const;
};
OverlayCalibration calibrate_overlay(const ObservableSeries& series, long n_lo, long n_hi,
                                     const OscillatorParams& params, double sigma_nominal,
                                     double q0, double p0);

/// Dominant eigenpair of the no-injection round-trip operator by power
/// iteration with per-step normalization, started from the analytic
/// fundamental mode of the derived oscillator.  The eigenvalue estimate is
/// the transpose-free quotient (psi, T psi)/(psi, psi) (no conjugation),
/// which is stationary at eigenvectors of this complex-symmetric operator.
/// Converged when successive estimates differ by < tol.
struct EigenpairResult {
    TransverseField mode;
    std::complex<double> eigenvalue;
    long iterations;
};
EigenpairResult round_trip_eigenpair(const CavityConfig& config, double tol = 1e-10,
                                     long max_iterations = 400000);

/// Pump level at which the dominant eigenvalue modulus crosses 1, found by
/// secant iteration on log|eigenvalue| as a function of peak gain.
struct ThresholdResult {
    double peak_gain;       // g_p at crossing
    double g0;              // linearized on-axis gain at crossing
    long eigensolves;
};
ThresholdResult find_threshold(const CavityConfig& config, double g_p_lo, double g_p_hi,
                               double log_tol = 1e-6, int max_secant = 12);

/// Emission tilt of the displaced fundamental mode (Gaussian-beam angles).
double tilt_angle(double delta, double w0, double lambda = 1.0);
double divergence_angle(double w0, double lambda = 1.0);
double tilt_ratio(double delta, double w0);

/// TEM00 waist at the reference plane from the round-trip matrix.
double mode_waist(const ABCDMatrix& m, double lambda = 1.0);

/// Propagate a mode through free space in steps of dz and fit the drift of
/// its center.  slope is d<x>/dz; in the kernel's orientation convention the
/// emulated transverse velocity per round trip is -slope/m, which equals
/// Omega*delta for the fundamental mode.
struct FreeDriftResult {
    double slope;
    double velocity;   // -slope / m
};
FreeDriftResult free_drift_check(const TransverseField& mode, const OscillatorParams& params,
                                 int steps, double dz);

/// Excess-noise factor of the displaced fundamental mode.
double petermann(double delta, double w0);
/// Overlap-integral form K = <u,u><v,v>/|<u,v>|^2 with v the adjoint mode
/// (displacement reversed); throws NumericalError on degenerate overlap.
double petermann_numeric(const TransverseField& mode, const TransverseField& adjoint_mode);

/// Sample a Gaussian packet on a grid.
TransverseField packet_on_grid(const GaussianPacket& packet, const SpatialGrid& grid);

/// |<a,b>| / (|a| |b|) on the grid.
double mode_overlap(const TransverseField& a, const TransverseField& b);

} // namespace ptqho

#endif
