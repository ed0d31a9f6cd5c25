#include "ptqho/cavity.hpp"

#include <cmath>
#include <stdexcept>

#include "ptqho/errors.hpp"
#include "ptqho/kernels.hpp"

namespace ptqho {

ABCDMatrix round_trip_matrix_fig1b(double focal_length, double arm_length) {
    if (focal_length <= 0.0 || arm_length <= 0.0)
        throw std::invalid_argument("round_trip_matrix_fig1b: lengths must be > 0");
    const double r = arm_length / focal_length;
    return {2.0 * r - 1.0, 2.0 * arm_length * (r - 1.0), 2.0 / focal_length, 2.0 * r - 1.0};
}

double stability_angle(const ABCDMatrix& m) {
    const double half_trace = 0.5 * (m.A + m.D);
    if (std::abs(half_trace) >= 1.0)
        throw UnstableCavityError("stability_angle: |(A+D)/2| >= 1, resonator not stable");
    return std::acos(half_trace);
}

std::complex<double> abcd_transform_q(std::complex<double> q, const ABCDMatrix& m) {
    return (m.A * q + m.B) / (m.C * q + m.D);
}

double GainProfile::at(double x) const {
    const double u = (x - offset) / waist;
    return peak * std::exp(-2.0 * u * u);
}

GainLinearization linearize(const GainProfile& gain) {
    const double g0 = gain.at(0.0);
    const double alpha = 4.0 * gain.offset / (gain.waist * gain.waist) * g0;
    return {g0, alpha};
}

double excitation_envelope(double n, const CavityConfig& config) {
    const double u = (n - config.excitation.pulse_center) / config.excitation.pulse_width;
    return config.excitation.amplitude * std::exp(-u * u);
}

OscillatorParams derive_oscillator_params(const ABCDMatrix& m, double alpha, double lambda) {
    const double theta = stability_angle(m);
    if (m.C == 0.0)
        throw std::invalid_argument("derive_oscillator_params: C = 0");
    const double k = units::two_pi / lambda;
    OscillatorParams p;
    p.frequency = theta;
    p.mass = -std::sin(theta) / (theta * m.B);
    p.displacement = -alpha * (1.0 + m.A) / (2.0 * k * m.C);
    p.hbar = 1.0 / k;
    return p;
}

CollinsPropagator::CollinsPropagator(const SpatialGrid& grid, const ABCDMatrix& m,
                                     double lambda)
    : grid_(grid), matrix_(m) {
    if (grid.n == 0 || grid.window <= 0.0)
        throw std::invalid_argument("CollinsPropagator: empty grid");
    if (m.B == 0.0)
        throw std::invalid_argument("CollinsPropagator: B = 0 (imaging condition)");
    const double k = units::two_pi / lambda;
    const std::size_t n = grid.n;
    chirp_in_.resize(n);
    chirp_out_.resize(n);
    transfer_.resize(n);
    const cplx mi(0.0, -1.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = grid.x(j);
        chirp_in_[j] = std::exp(mi * (k * (m.A - 1.0) / (2.0 * m.B)) * x * x);
        chirp_out_[j] = std::exp(mi * (k * (m.D - 1.0) / (2.0 * m.B)) * x * x);
    }
    // analytic transfer of the pure transport factor [1 B; 0 1]:
    // multiply the spectrum by exp(+i B kx^2 / (2k)), kx on the wrapped grid
    const double dkx = units::two_pi / grid.window;
    for (std::size_t j = 0; j < n; ++j) {
        const double m_wrapped = (j < n / 2) ? static_cast<double>(j)
                                             : static_cast<double>(j) - static_cast<double>(n);
        const double kx = m_wrapped * dkx;
        transfer_[j] = std::exp(cplx(0.0, m.B * kx * kx / (2.0 * k)));
    }
    fft_ = std::make_unique<Fft>(n);
}

void CollinsPropagator::propagate_in_place(TransverseField& field) const {
    if (field.grid != grid_)
        throw std::invalid_argument("CollinsPropagator: field grid mismatch");
    auto v = std::span<cplx>(field.samples);
    kernels::multiply_complex(v, chirp_in_);
    fft_->forward(v);
    kernels::multiply_complex(v, transfer_);
    fft_->inverse(v);
    kernels::multiply_complex(v, chirp_out_);
}

TransverseField CollinsPropagator::propagate(const TransverseField& field) const {
    TransverseField out = field;
    propagate_in_place(out);
    return out;
}

CavityPropagator::CavityPropagator(const CavityConfig& config)
    : config_(config),
      collins_(config.grid(), config.round_trip_matrix()),
      loss_factor_(std::exp(-config.loss)) {
    const SpatialGrid g = config.grid();
    if ((g.n & (g.n - 1)) != 0)
        throw ConfigError("CavityPropagator: grid point count must be a power of two");
    if (!config.stable())
        throw UnstableCavityError("CavityPropagator: L >= f");
    half_gain_.resize(g.n);
    injection_.resize(g.n);
    const double we = config.excitation.waist;
    for (std::size_t j = 0; j < g.n; ++j) {
        const double x = g.x(j);
        half_gain_[j] = std::exp(0.5 * config.gain.at(x));
        const double u = (x - config.excitation.center) / we;
        injection_[j] = std::exp(-u * u);
    }
}

bool CavityPropagator::edge_magnitude_ok(const TransverseField& field) const {
    const double peak = kernels::max_abs(field.samples);
    if (peak <= 0.0) return true;
    const double edge = std::max(std::abs(field.samples.front()),
                                 std::abs(field.samples.back()));
    return edge <= 1e-6 * peak;
}

void CavityPropagator::round_trip(TransverseField& field,
                                  std::complex<double> injected_amplitude) const {
    auto v = std::span<cplx>(field.samples);
    kernels::multiply_real(v, half_gain_);
    collins_.propagate_in_place(field);
    kernels::multiply_real(v, half_gain_);
    const cplx scale(loss_factor_, 0.0);
    for (auto& z : field.samples) z *= scale;
    if (injected_amplitude != cplx(0.0, 0.0)) {
        const cplx s = std::sqrt(config_.mirror_transmittance) * injected_amplitude;
        kernels::axpy(v, s, injection_);
    }
    field.trip_index += 1;
    if (!edge_magnitude_ok(field)) ++edge_violations_;
}

void CavityPropagator::round_trip_auto(TransverseField& field) const {
    const double n = static_cast<double>(field.trip_index);
    const double env = excitation_envelope(n, config_);
    const cplx phase = std::exp(cplx(0.0, n * config_.detuning));
    round_trip(field, env * phase);
}

TransverseField round_trip(const TransverseField& field, const CavityConfig& config,
                           std::complex<double> injected_amplitude) {
    CavityPropagator prop(config);
    TransverseField out = field;
    prop.round_trip(out, injected_amplitude);
    return out;
}

} // namespace ptqho
