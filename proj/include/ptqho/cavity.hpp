#ifndef PTQHO_CAVITY_HPP
#define PTQHO_CAVITY_HPP

#include <complex>
#include <memory>
#include <vector>

#include "ptqho/fft.hpp"
#include "ptqho/grid.hpp"
#include "ptqho/oscillator.hpp"
#include "ptqho/units.hpp"

namespace ptqho {

/// Ray-transfer matrix of a paraxial optical sequence; B is an effective
/// length, C an inverse length.  Unimodular (AD - BC = 1); round-trip
/// matrices of a Fabry-Perot resonator additionally have A = D.
struct ABCDMatrix {
    double A = 1.0, B = 0.0, C = 0.0, D = 1.0;

    double determinant() const { return A * D - B * C; }
    ABCDMatrix operator*(const ABCDMatrix& r) const {
        return {A * r.A + B * r.C, A * r.B + B * r.D,
                C * r.A + D * r.C, C * r.B + D * r.D};
    }
};

/// Round-trip matrix of the two-lens folded resonator referenced to the
/// flat-mirror plane: A = D = 2L/f - 1, B = 2L(L/f - 1), C = 2/f.
/// Stable for L < f; the second lens f1 does not enter.
ABCDMatrix round_trip_matrix_fig1b(double focal_length, double arm_length);

/// theta = arccos((A+D)/2) = arccos(A); throws UnstableCavityError for |A| >= 1.
double stability_angle(const ABCDMatrix& m);

/// Gaussian beam parameter law q' = (Aq + B)/(Cq + D) for the kernel
/// convention psi = exp(-i k x^2 / (2q)); confined beams have Im q > 0.
std::complex<double> abcd_transform_q(std::complex<double> q, const ABCDMatrix& m);

/// Off-axis Gaussian pump sheet g(x) = g_p exp[-2 (x - s)^2 / w_p^2].
struct GainProfile {
    double peak = 0.0;      // g_p, log units per round trip
    double waist = 1.0;     // w_p
    double offset = 0.0;    // s

    double at(double x) const;
};

/// On-axis value and slope of the gain: g0 = g(0), alpha = g'(0).
/// For s = w_p/2 these reduce to g0 = g_p/sqrt(e), alpha = 2 g0/w_p, and the
/// curvature g''(0) vanishes.
struct GainLinearization {
    double g0;
    double alpha;
};
GainLinearization linearize(const GainProfile& gain);

struct ExcitationProfile {
    double waist = 40.0;        // w_e
    double center = 0.0;        // transverse offset of the injected beam
    double pulse_center = 5.0;  // t_p, round trips
    double pulse_width = 1.0;   // tau_p, round trips
    double amplitude = 1.0;     // peak envelope amplitude
};

struct GridSettings {
    std::size_t points = 4096;
    double window = 2048.0;
};

struct CavityConfig {
    double focal_length = 1e5;        // f
    double focal_length_aux = 1e5;    // f1; lengthens the transit time only
    double arm_length = 0.95e5;       // L
    double loss = 0.18;               // l, log units per round trip
    double mirror_transmittance = 0.01;
    double detuning = 0.0;            // Delta, rad per round trip
    GainProfile gain{0.2, 483.0, 241.5};
    ExcitationProfile excitation{};
    GridSettings grid_settings{};

    ABCDMatrix round_trip_matrix() const {
        return round_trip_matrix_fig1b(focal_length, arm_length);
    }
    SpatialGrid grid() const { return {grid_settings.points, grid_settings.window}; }
    bool stable() const { return arm_length < focal_length; }
};

/// Injection envelope A_n = amplitude * exp[-(n - t_p)^2 / tau_p^2].
double excitation_envelope(double n, const CavityConfig& config);

/// Map the linearized cavity onto oscillator constants:
/// Omega = theta, m = -sin(theta)/(theta B), delta = -alpha (1+A)/(2 k C),
/// hbar = 1/k.  Requires |A| < 1 and C != 0.
OscillatorParams derive_oscillator_params(const ABCDMatrix& m, double alpha,
                                          double lambda = 1.0);

/// Spectral evaluation of the diffraction integral for a fixed ABCD matrix
/// on a fixed self-mapped grid: thin-lens chirp with (A-1)/B, FFT transport
/// over the effective length B, chirp with (D-1)/B.  Matches the direct
/// kernel quadrature to discretization accuracy.  B = 0 is rejected.
class CollinsPropagator {
public:
    CollinsPropagator(const SpatialGrid& grid, const ABCDMatrix& m, double lambda = 1.0);

    void propagate_in_place(TransverseField& field) const;
    TransverseField propagate(const TransverseField& field) const;
    const ABCDMatrix& matrix() const { return matrix_; }

private:
    SpatialGrid grid_;
    ABCDMatrix matrix_;
    std::vector<std::complex<double>> chirp_in_;
    std::vector<std::complex<double>> chirp_out_;
    std::vector<std::complex<double>> transfer_;
    std::unique_ptr<Fft> fft_;
};

/// One-resonator simulation state: precomputed gain sheet, intracavity
/// propagator and injection profile.  round_trip advances
///   psi -> exp(-l) exp(g/2) K exp(g/2) psi + sqrt(T) * injected_amplitude * F
/// and increments the field's trip index.  Each instance owns its buffers;
/// independent instances can run on different threads.
class CavityPropagator {
public:
    explicit CavityPropagator(const CavityConfig& config);

    void round_trip(TransverseField& field, std::complex<double> injected_amplitude) const;

    /// Envelope and detuning phase folded in: injected_amplitude = A_n e^{i n Delta}.
    void round_trip_auto(TransverseField& field) const;

    const CavityConfig& config() const { return config_; }
    const std::vector<std::complex<double>>& injection_profile() const { return injection_; }

    /// true while |psi| at the window edges stays below 1e-6 of the peak
    bool edge_magnitude_ok(const TransverseField& field) const;
    long edge_violations() const { return edge_violations_; }

private:
    CavityConfig config_;
    CollinsPropagator collins_;
    std::vector<double> half_gain_;                  // exp(g(x)/2)
    std::vector<std::complex<double>> injection_;    // F(x)
    double loss_factor_;                             // exp(-l)
    mutable long edge_violations_ = 0;
};

/// Spec'd free-function form of the map; builds a propagator per call.
/// Prefer CavityPropagator for repeated trips.
TransverseField round_trip(const TransverseField& field, const CavityConfig& config,
                           std::complex<double> injected_amplitude);

} // namespace ptqho

#endif
