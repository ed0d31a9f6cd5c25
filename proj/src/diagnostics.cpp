#include "ptqho/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "ptqho/errors.hpp"
#include "ptqho/kernels.hpp"

namespace ptqho {

namespace {

// dense solve by Gaussian elimination with partial pivoting (tiny systems)
template <std::size_t N>
std::array<double, N> solve_normal(std::array<std::array<double, N>, N> a,
                                   std::array<double, N> b) {
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        if (a[col][col] == 0.0) throw NumericalError("singular normal equations");
        for (std::size_t r = col + 1; r < N; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < N; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, N> x{};
    for (std::size_t r = N; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < N; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

struct SinusoidFit {
    double a1, b1, a2, b2, offset;
    double residual_norm2;
};

SinusoidFit fit_two_sinusoids(const std::vector<std::pair<double, double>>& pts, double omega) {
    constexpr std::size_t M = 5;
    std::array<std::array<double, M>, M> ata{};
    std::array<double, M> atb{};
    for (const auto& [n, q] : pts) {
        const std::array<double, M> row = {std::cos(omega * n), std::sin(omega * n),
                                           std::cos(2.0 * omega * n), std::sin(2.0 * omega * n),
                                           1.0};
        for (std::size_t r = 0; r < M; ++r) {
            for (std::size_t c = 0; c < M; ++c) ata[r][c] += row[r] * row[c];
            atb[r] += row[r] * q;
        }
    }
    const auto x = solve_normal<M>(ata, atb);
    SinusoidFit f{x[0], x[1], x[2], x[3], x[4], 0.0};
    for (const auto& [n, q] : pts) {
        const double model = f.a1 * std::cos(omega * n) + f.b1 * std::sin(omega * n) +
                             f.a2 * std::cos(2.0 * omega * n) + f.b2 * std::sin(2.0 * omega * n) +
                             f.offset;
        f.residual_norm2 += (q - model) * (q - model);
    }
    return f;
}

std::vector<std::pair<double, double>> defined_window(const ObservableSeries& series,
                                                      long n_lo, long n_hi) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : series.samples)
        if (s.n >= n_lo && s.n <= n_hi && s.defined)
            pts.emplace_back(static_cast<double>(s.n), s.q);
    return pts;
}

} // namespace

double power(const TransverseField& field) {
    return kernels::sum_abs2(field.samples) * field.grid.dx();
}

std::optional<double> center_of_mass(const TransverseField& field, double power_floor) {
    const double p = power(field);
    if (p <= power_floor || p <= 0.0) return std::nullopt;
    return kernels::weighted_first_moment(field.samples, field.grid.dx()) * field.grid.dx() / p;
}

std::optional<double> momentum_expectation(const TransverseField& field, double hbar,
                                           double power_floor) {
    const double p = power(field);
    if (p <= power_floor || p <= 0.0) return std::nullopt;
    const auto& v = field.samples;
    const double dx = field.grid.dx();
    double acc = 0.0;
    for (std::size_t j = 1; j + 1 < v.size(); ++j) {
        const cplx grad = (v[j + 1] - v[j - 1]) / (2.0 * dx);
        acc += std::imag(std::conj(v[j]) * grad);
    }
    return hbar * acc * dx / p;
}

double ObservableSeries::peak_power() const {
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, s.power);
    return m;
}

long ObservableSeries::first_defined(long n_lo, long n_hi) const {
    for (const auto& s : samples)
        if (s.n >= n_lo && s.n <= n_hi && s.defined) return s.n;
    return -1;
}

double fit_decay_rate(const ObservableSeries& series, long n_lo, long n_hi) {
    double sn = 0.0, sn2 = 0.0, sy = 0.0, sny = 0.0, cnt = 0.0;
    for (const auto& s : series.samples) {
        if (s.n < n_lo || s.n > n_hi) continue;
        if (s.power <= 0.0)
            throw NumericalError("fit_decay_rate: non-positive power at n = " +
                                 std::to_string(s.n));
        const double n = static_cast<double>(s.n);
        const double y = std::log(s.power);
        sn += n;
        sn2 += n * n;
        sy += y;
        sny += n * y;
        cnt += 1.0;
    }
    if (cnt < 2.0) throw std::invalid_argument("fit_decay_rate: window too short");
    return (cnt * sny - sn * sy) / (cnt * sn2 - sn * sn);
}

SpectralAmplitudes trajectory_fourier(const ObservableSeries& series, double omega,
                                      long n_lo, long n_hi) {
    const auto pts = defined_window(series, n_lo, n_hi);
    const double periods = (pts.size() > 1)
        ? (pts.back().first - pts.front().first) * omega / units::two_pi : 0.0;
    if (periods < 3.0)
        throw std::invalid_argument("trajectory_fourier: need >= 3 periods of defined data");
    const auto f = fit_two_sinusoids(pts, omega);
    return {std::hypot(f.a1, f.b1), std::hypot(f.a2, f.b2)};
}

double fit_oscillation_frequency(const ObservableSeries& series, long n_lo, long n_hi,
                                 double omega_lo, double omega_hi) {
    const auto pts = defined_window(series, n_lo, n_hi);
    if (pts.size() < 12)
        throw std::invalid_argument("fit_oscillation_frequency: window too short");
    auto resid = [&](double om) { return fit_two_sinusoids(pts, om).residual_norm2; };
    // coarse scan, then two refinement passes around the best point
    double best_om = omega_lo, best_r = resid(omega_lo);
    double lo = omega_lo, hi = omega_hi;
    for (int pass = 0; pass < 3; ++pass) {
        const int steps = 200;
        for (int i = 0; i <= steps; ++i) {
            const double om = lo + (hi - lo) * i / steps;
            const double r = resid(om);
            if (r < best_r) {
                best_r = r;
                best_om = om;
            }
        }
        const double span = (hi - lo) / steps * 2.0;
        lo = best_om - span;
        hi = best_om + span;
    }
    return best_om;
}

double OverlayCalibration::theory_h(double n, const OscillatorParams& p) const {
    const double w = p.frequency * (n - t0);
    return scale_h * (q0 * std::cos(w) + p0 / (p.mass * p.frequency) * std::sin(w));
}

double OverlayCalibration::theory_nh(double n, const OscillatorParams& p) const {
    const auto nh = non_hermitian_coefficients(sigma_eff, p);
    const double w = p.frequency * (n - t0);
    return nh.coef_2omega * std::sin(2.0 * w) + nh.coef_omega * std::sin(w);
}

OverlayCalibration calibrate_overlay(const ObservableSeries& series, long n_lo, long n_hi,
                                     const OscillatorParams& params, double sigma_nominal,
                                     double q0, double p0) {
    const auto pts = defined_window(series, n_lo, n_hi);
    if (pts.size() < 8) throw std::invalid_argument("calibrate_overlay: window too short");
    const bool has_h = (q0 != 0.0 || p0 != 0.0);

    auto eval = [&](double sig_ratio, double t0) {
        OverlayCalibration cal{sigma_nominal * sig_ratio, t0, has_h ? 1.0 : 0.0, 0.0, q0, p0};
        if (has_h) {
            // amplitude rescale of the harmonic part by linear least squares
            OverlayCalibration unit = cal;
            unit.scale_h = 1.0;
            double hh = 0.0, hq = 0.0;
            for (const auto& [n, q] : pts) {
                const double h = unit.theory_h(n, params);
                hh += h * h;
                hq += h * (q - unit.theory_nh(n, params));
            }
            cal.scale_h = hh > 0.0 ? hq / hh : 0.0;
        }
        double dev = 0.0;
        for (const auto& [n, q] : pts)
            dev = std::max(dev, std::abs(q - cal.theory_h(n, params) - cal.theory_nh(n, params)));
        cal.max_deviation = dev;
        return cal;
    };

    // the pulse peaks shortly before the window opens; seed t0 there
    double rc = 1.0, tc = pts.front().first - 2.0;
    OverlayCalibration best = eval(rc, tc);
    double r_span = 0.55, t_span = 2.5;
    for (int pass = 0; pass < 4; ++pass) {
        const int nr = 44, nt = 80;
        for (int i = 0; i <= nr; ++i) {
            const double ratio = rc - r_span + 2.0 * r_span * i / nr;
            if (ratio <= 0.05) continue;
            for (int j = 0; j <= nt; ++j) {
                const double t0 = tc - t_span + 2.0 * t_span * j / nt;
                const auto cal = eval(ratio, t0);
                if (cal.max_deviation < best.max_deviation) best = cal;
            }
        }
        rc = best.sigma_eff / sigma_nominal;
        tc = best.t0;
        r_span = 2.5 * (2.0 * r_span / nr);
        t_span = 2.5 * (2.0 * t_span / nt);
    }
    return best;
}

EigenpairResult round_trip_eigenpair(const CavityConfig& config, double tol,
                                     long max_iterations) {
    CavityPropagator prop(config);
    const auto lin = linearize(config.gain);
    const auto params = derive_oscillator_params(config.round_trip_matrix(), lin.alpha);
    const SpatialGrid grid = config.grid();

    TransverseField field = packet_on_grid(fundamental_mode(params), grid);
    const double dx = grid.dx();
    auto normalize = [&](TransverseField& f) {
        const double nrm = std::sqrt(kernels::sum_abs2(f.samples) * dx);
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw ConvergenceError("round_trip_eigenpair: iterate collapsed");
        for (auto& z : f.samples) z /= nrm;
    };
    normalize(field);

    std::vector<cplx> prev(grid.n);
    cplx lambda_prev(0.0, 0.0);
    for (long it = 1; it <= max_iterations; ++it) {
        std::copy(field.samples.begin(), field.samples.end(), prev.begin());
        prop.round_trip(field, cplx(0.0, 0.0));
        cplx num(0.0, 0.0), den(0.0, 0.0);
        for (std::size_t j = 0; j < grid.n; ++j) {
            num += prev[j] * field.samples[j];   // bilinear, no conjugation
            den += prev[j] * prev[j];
        }
        const cplx lambda = num / den;
        if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
            throw ConvergenceError("round_trip_eigenpair: eigenvalue estimate non-finite");
        normalize(field);
        if (std::abs(lambda - lambda_prev) < tol) {
            field.trip_index = 0;
            return {std::move(field), lambda, it};
        }
        lambda_prev = lambda;
    }
    throw ConvergenceError("round_trip_eigenpair: no convergence after " +
                           std::to_string(max_iterations) + " iterations");
}

ThresholdResult find_threshold(const CavityConfig& config, double g_p_lo, double g_p_hi,
                               double log_tol, int max_secant) {
    auto log_mod = [&](double g_p) {
        CavityConfig c = config;
        c.gain.peak = g_p;
        return std::log(std::abs(round_trip_eigenpair(c).eigenvalue));
    };
    long solves = 2;
    double x0 = g_p_lo, x1 = g_p_hi;
    double f0 = log_mod(x0), f1 = log_mod(x1);
    for (int it = 0; it < max_secant; ++it) {
        if (std::abs(f1) < log_tol) break;
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = log_mod(x1);
        ++solves;
    }
    if (std::abs(f1) >= log_tol)
        throw ConvergenceError("find_threshold: secant did not converge");
    CavityConfig c = config;
    c.gain.peak = x1;
    return {x1, linearize(c.gain).g0, solves};
}

double tilt_angle(double delta, double w0, double lambda) {
    if (w0 <= 0.0) throw std::invalid_argument("tilt_angle: w0 must be > 0");
    return lambda * delta / (std::numbers::pi * w0 * w0);
}

double divergence_angle(double w0, double lambda) {
    if (w0 <= 0.0) throw std::invalid_argument("divergence_angle: w0 must be > 0");
    return lambda / (std::numbers::pi * w0);
}

double tilt_ratio(double delta, double w0) {
    if (w0 <= 0.0) throw std::invalid_argument("tilt_ratio: w0 must be > 0");
    return delta / w0;
}

double mode_waist(const ABCDMatrix& m, double lambda) {
    const double theta = stability_angle(m);
    const double k = units::two_pi / lambda;
    return std::sqrt(std::abs(2.0 * m.B / (k * std::sin(theta))));
}

FreeDriftResult free_drift_check(const TransverseField& mode, const OscillatorParams& params,
                                 int steps, double dz) {
    if (steps < 2) throw std::invalid_argument("free_drift_check: need >= 2 steps");
    const ABCDMatrix free_space{1.0, dz, 0.0, 1.0};
    CollinsPropagator prop(mode.grid, free_space);
    TransverseField f = mode;
    double sz = 0.0, sz2 = 0.0, sc = 0.0, szc = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const auto c = center_of_mass(f);
        if (!c) throw NumericalError("free_drift_check: vanishing power");
        const double z = i * dz;
        sz += z;
        sz2 += z * z;
        sc += *c;
        szc += z * *c;
        if (i < steps) prop.propagate_in_place(f);
    }
    const double cnt = steps + 1.0;
    const double slope = (cnt * szc - sz * sc) / (cnt * sz2 - sz * sz);
    return {slope, -slope / params.mass};
}

double petermann(double delta, double w0) {
    if (w0 <= 0.0) throw std::invalid_argument("petermann: w0 must be > 0");
    const double r = 2.0 * delta / w0;
    return std::exp(r * r);
}

double petermann_numeric(const TransverseField& mode, const TransverseField& adjoint_mode) {
    if (mode.grid != adjoint_mode.grid)
        throw std::invalid_argument("petermann_numeric: grids differ");
    cplx cross(0.0, 0.0);
    double nu = 0.0, nv = 0.0;
    for (std::size_t j = 0; j < mode.size(); ++j) {
        cross += std::conj(mode.samples[j]) * adjoint_mode.samples[j];
        nu += std::norm(mode.samples[j]);
        nv += std::norm(adjoint_mode.samples[j]);
    }
    const double c2 = std::norm(cross);
    if (c2 < 1e-24 * nu * nv)
        throw NumericalError("petermann_numeric: modes nearly orthogonal, K ill-defined");
    return nu * nv / c2;
}

TransverseField packet_on_grid(const GaussianPacket& packet, const SpatialGrid& grid) {
    TransverseField f = TransverseField::zero(grid);
    // rescale by the peak real exponent so large |log_amp| cannot overflow
    double max_re = -1e300;
    std::vector<cplx> expo(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double x = grid.x(j);
        expo[j] = -packet.quad * (x * x) + packet.lin * x + packet.log_amp;
        max_re = std::max(max_re, expo[j].real());
    }
    for (std::size_t j = 0; j < grid.n; ++j)
        f.samples[j] = std::exp(expo[j] - max_re);
    return f;
}

double mode_overlap(const TransverseField& a, const TransverseField& b) {
    if (a.grid != b.grid) throw std::invalid_argument("mode_overlap: grids differ");
    cplx cross(0.0, 0.0);
    double na = 0.0, nb = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        cross += std::conj(a.samples[j]) * b.samples[j];
        na += std::norm(a.samples[j]);
        nb += std::norm(b.samples[j]);
    }
    return std::abs(cross) / std::sqrt(na * nb);
}

} // namespace ptqho
