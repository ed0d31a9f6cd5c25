#include "ptqho/oscillator.hpp"

#include <cmath>
#include <stdexcept>

#include "ptqho/errors.hpp"

namespace ptqho {

GaussianPacket GaussianPacket::from_initial(double q0, double p0, double sigma, double hbar) {
    // exp[-sigma (x - q0)^2 + i p0 x / hbar]
    if (sigma <= 0.0) throw std::invalid_argument("GaussianPacket: sigma must be > 0");
    GaussianPacket p;
    p.quad = cplx(sigma, 0.0);
    p.lin = cplx(2.0 * sigma * q0, p0 / hbar);
    p.log_amp = cplx(-sigma * q0 * q0, 0.0);
    return p;
}

cplx mehler_kernel(double x, double xi, double t, const OscillatorParams& params,
                   double sin_tol) {
    const double w = params.frequency * t;
    const double s = std::sin(w);
    const double c = std::cos(w);
    if (std::abs(s) < sin_tol)
        throw SingularTimeError("mehler_kernel: sin(Omega t) below tolerance at t = " +
                                std::to_string(t));
    const double beta = params.mass * params.frequency / (2.0 * params.hbar * s);
    // prefactor sqrt(m Omega / (2 pi i hbar sin)) = sqrt(beta / (i pi));
    // the principal branch is continuous on (0, pi/Omega) where beta > 0
    const cplx pref = std::sqrt(cplx(beta, 0.0) / cplx(0.0, std::numbers::pi));
    const cplx phase = cplx(0.0, beta) * ((x * x + xi * xi) * c - 2.0 * x * xi);
    return pref * std::exp(phase);
}

namespace {

// Exponent-coefficient flow of the Hermitian oscillator over time t:
// regular for all t, Mobius in the quadratic coefficient.
void evolve_hermitian(cplx& a, cplx& b, cplx& c, double t, const OscillatorParams& p) {
    const double rho = p.ground_width_param();
    const double cc = std::cos(p.frequency * t);
    const double ss = std::sin(p.frequency * t);
    const cplx G = rho * cc + cplx(0.0, 1.0) * a * ss;
    const cplx a_t = rho * (a * cc + cplx(0.0, 1.0) * rho * ss) / G;
    const cplx b_t = rho * b / G;
    const cplx c_t = c + cplx(0.0, 1.0) * ss * b * b / (4.0 * G) + 0.5 * std::log(rho / G);
    a = a_t;
    b = b_t;
    c = c_t;
}

} // namespace

GaussianPacket propagate_packet(const GaussianPacket& packet, double t,
                                const OscillatorParams& params) {
    if (!packet.normalizable())
        throw std::invalid_argument("propagate_packet: packet not normalizable");
    const cplx i(0.0, 1.0);
    const double d = params.displacement;

    // shift into the displaced frame y = x - i delta, evolve, shift back
    cplx a = packet.quad;
    cplx b = packet.lin - 2.0 * i * packet.quad * d;
    cplx c = packet.log_amp + packet.quad * d * d + i * packet.lin * d;
    evolve_hermitian(a, b, c, t, params);
    GaussianPacket out;
    out.quad = a;
    out.lin = b + 2.0 * i * a * d;
    out.log_amp = c + a * d * d - i * b * d;
    return out;
}

TrajectoryCoefficients non_hermitian_coefficients(double sigma, const OscillatorParams& params) {
    if (sigma <= 0.0) throw std::invalid_argument("non_hermitian_coefficients: sigma must be > 0");
    const double mo = params.mass * params.frequency;
    const double sh = sigma * params.hbar;
    return {params.displacement * (sh / mo - mo / (4.0 * sh)),
            -2.0 * params.displacement * sh / mo};
}

CenterOfMassSplit center_of_mass_closed_form(double t, double q0, double p0,
                                             double sigma, const OscillatorParams& params) {
    const double w = params.frequency * t;
    const auto nh = non_hermitian_coefficients(sigma, params);
    CenterOfMassSplit out;
    out.harmonic = q0 * std::cos(w) + p0 / (params.mass * params.frequency) * std::sin(w);
    out.non_hermitian = nh.coef_2omega * std::sin(2.0 * w) + nh.coef_omega * std::sin(w);
    return out;
}

GaussianPacket fundamental_mode(const OscillatorParams& params) {
    // exp[-rho (x - i delta)^2] = exp[-rho x^2 + 2 i rho delta x + rho delta^2]
    const double rho = params.ground_width_param();
    const double d = params.displacement;
    GaussianPacket p;
    p.quad = cplx(rho, 0.0);
    p.lin = cplx(0.0, 2.0 * rho * d);
    p.log_amp = cplx(rho * d * d, 0.0);
    return p;
}

} // namespace ptqho
