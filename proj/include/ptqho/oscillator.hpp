#ifndef PTQHO_OSCILLATOR_HPP
#define PTQHO_OSCILLATOR_HPP

#include <complex>

#include "ptqho/units.hpp"

namespace ptqho {

using cplx = std::complex<double>;

/// Parameters of the imaginary-displaced harmonic oscillator
///   H = -hbar^2/(2m) d^2/dx^2 + (1/2) m Omega^2 (x - i delta)^2.
/// delta = 0 is the ordinary (Hermitian) oscillator.
struct OscillatorParams {
    double mass = 1.0;              // inverse length x time^2
    double frequency = 1.0;         // rad per round trip
    double displacement = 0.0;      // length; imaginary shift of x
    double hbar = units::hbar;      // length; quantum scale analog 1/k

    bool valid() const {
        return mass > 0.0 && frequency > 0.0 && hbar > 0.0;
    }
    // width parameter of the fundamental mode, rho = m Omega / (2 hbar)
    double ground_width_param() const { return mass * frequency / (2.0 * hbar); }
};

/// Complex-Gaussian wavepacket psi(x) = exp(-a x^2 + b x + c), stored by its
/// exponent coefficients.  Normalizable iff Re(a) > 0.  The log-amplitude c
/// carries normalization and global phase; observables never depend on it.
struct GaussianPacket {
    cplx quad;      // a
    cplx lin;       // b
    cplx log_amp;   // c

    static GaussianPacket from_initial(double q0, double p0, double sigma, double hbar);

    bool normalizable() const { return quad.real() > 0.0; }
    double center() const { return lin.real() / (2.0 * quad.real()); }
    double momentum(double hbar) const {
        return hbar * (lin.imag() - 2.0 * quad.imag() * center());
    }
    double position_variance() const { return 1.0 / (4.0 * quad.real()); }
    cplx evaluate(double x) const {
        return std::exp(-quad * (x * x) + lin * x + log_amp);
    }
};

/// Harmonic-oscillator propagator kernel U(x,xi,t).  Principal square-root
/// branch, continuous in t on (0, pi/Omega).  Throws SingularTimeError when
/// |sin(Omega t)| < sin_tol.
cplx mehler_kernel(double x, double xi, double t, const OscillatorParams& params,
                   double sin_tol = 1e-12);

/// Exact evolution of a Gaussian packet for time t, valid for all t
/// (including the kernel's focal times) via the closed-form parameter flow.
GaussianPacket propagate_packet(const GaussianPacket& packet, double t,
                                const OscillatorParams& params);

/// Closed-form center of mass, split into the harmonic part and the
/// displacement-driven part; the full trajectory is the sum.
struct CenterOfMassSplit {
    double harmonic;
    double non_hermitian;
    double total() const { return harmonic + non_hermitian; }
};
CenterOfMassSplit center_of_mass_closed_form(double t, double q0, double p0,
                                             double sigma, const OscillatorParams& params);

/// Coefficients of the displacement-driven trajectory
///   q_nh(t) = coef_2omega * sin(2 Omega t) + coef_omega * sin(Omega t).
struct TrajectoryCoefficients {
    double coef_2omega;
    double coef_omega;
};
TrajectoryCoefficients non_hermitian_coefficients(double sigma, const OscillatorParams& params);

/// Stationary fundamental mode exp[-rho (x - i delta)^2]: centered at 0 with
/// width parameter rho and mean momentum m Omega delta.
GaussianPacket fundamental_mode(const OscillatorParams& params);

/// Drift speed of the fundamental mode once the potential is switched off.
inline double free_drift_velocity(const OscillatorParams& params) {
    return params.frequency * params.displacement;
}

} // namespace ptqho

#endif
