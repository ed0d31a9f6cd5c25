// Acceptance suite: end-to-end checks of the whole simulator at pinned
// tolerances, one verdict line per criterion.  Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "ptqho/canonical.hpp"
#include "ptqho/cavity.hpp"
#include "ptqho/diagnostics.hpp"
#include "ptqho/experiment.hpp"
#include "ptqho/kernels.hpp"
#include "ptqho/oscillator.hpp"
#include "ptqho/reference.hpp"
#include "ptqho/units.hpp"
#include "helpers.hpp"

using namespace ptqho;
using testutil::Rng;
namespace f2 = testutil::fig2;

namespace {

int failures = 0;

void verdict(int idx, bool ok, const char* what, const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", idx, what, detail.c_str());
    if (!ok) ++failures;
}

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch()).count();
}

struct Fig2Run {
    ObservableSeries series;
    OverlayCalibration cal;
    SpectralAmplitudes amps;
    double omega_fit;
    double seconds;
};

Fig2Run fig2_run() {
    const auto spec = testutil::fig2_spec();
    const auto params = testutil::fig2_params();
    const double t0 = now_s();
    Fig2Run r;
    r.series = run_cavity_series(spec);
    const auto win = analysis_window(spec);
    r.cal = calibrate_overlay(r.series, win.lo, win.hi, params, f2::sigma_e, 0.0, 0.0);
    r.amps = trajectory_fourier(r.series, params.frequency, win.lo, win.hi);
    r.omega_fit = fit_oscillation_frequency(r.series, win.lo, win.hi, 0.3, 0.6);
    r.seconds = now_s() - t0;
    return r;
}

// ---------------------------------------------------------------- criterion 1
void criterion_1(const Fig2Run& run) {
    const double period = units::two_pi / run.omega_fit;
    const bool dev_ok = run.cal.max_deviation <= 0.5;
    const bool period_ok = std::abs(period - 13.9) <= 0.3;
    const bool time_ok = run.seconds < 30.0;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "max |q - overlay| = %.3f lambda (<= 0.5), period = %.2f trips "
                  "(13.9 +- 0.3), runtime = %.2f s (< 30); sigma_eff/sigma = %.3f, t0 = %.2f",
                  run.cal.max_deviation, period, run.seconds,
                  run.cal.sigma_eff / f2::sigma_e, run.cal.t0);
    verdict(1, dev_ok && period_ok && time_ok, "trajectory overlay reproduction", buf);
}

// ---------------------------------------------------------------- criterion 2
void criterion_2(const Fig2Run& run) {
    const double ratio = run.amps.ratio();
    const bool fig2_ok = std::abs(ratio - 0.47) <= 0.05;

    const auto herm = parse_config(R"({"scenario":"hermitian-control"})");
    auto sh = run_cavity_series(herm);
    const auto win_h = analysis_window(herm);
    const auto params_h = derive_oscillator_params(herm.cavity.round_trip_matrix(),
                                                   linearize(herm.cavity.gain).alpha);
    const double ratio_h = trajectory_fourier(sh, params_h.frequency, win_h.lo, win_h.hi).ratio();

    const auto matched = parse_config(R"({"scenario":"matched-waist"})");
    auto sm = run_cavity_series(matched);
    const auto win_m = analysis_window(matched);
    const auto params_m = derive_oscillator_params(matched.cavity.round_trip_matrix(),
                                                   linearize(matched.cavity.gain).alpha);
    const double ratio_m = trajectory_fourier(sm, params_m.frequency, win_m.lo, win_m.hi).ratio();

    const bool herm_ok = ratio_h < 1e-2;
    const bool matched_ok = ratio_m < 1e-2;
    char buf[320];
    std::snprintf(buf, sizeof(buf),
                  "pulsed-run ratio = %.4f (band 0.42..0.52), hermitian control = %.2e (< 1e-2), "
                  "matched waist = %.2e (< 1e-2)",
                  ratio, ratio_h, ratio_m);
    verdict(2, fig2_ok && herm_ok && matched_ok, "double-frequency discrimination", buf);
    if (!fig2_ok) {
        auto kick = parse_config(
            R"({"scenario":"fig2","excitation":{"tau_p":1e-4},"run":{"round_trips":55}})");
        auto sk = run_cavity_series(kick);
        const auto win_k = analysis_window(kick);
        const auto params_k = derive_oscillator_params(kick.cavity.round_trip_matrix(),
                                                       linearize(kick.cavity.gain).alpha);
        const double ratio_k =
            trajectory_fourier(sk, params_k.frequency, win_k.lo, win_k.hi).ratio();
        std::printf("     note: the pinned pulsed excitation (t_p = 5, tau_p = 1) builds the\n"
                    "     intracavity packet from ~5 coherent sub-pulses; their relative Gouy\n"
                    "     phases reshape the effective launch width to sigma_eff ~ 0.54 sigma,\n"
                    "     which lowers the measured ratio to c2(sigma_eff)/c1(sigma_eff) ~ 0.42.\n"
                    "     A single-trip kick (tau_p -> 0) measures %.4f with this same code.\n",
                    ratio_k);
    }
}

// ---------------------------------------------------------------- criterion 3
void criterion_3() {
    Rng rng(777);
    // fractions of a period, kept away from the kernel's focal times
    const double fracs[10] = {0.11, 0.19, 0.27, 0.35, 0.61, 0.69, 0.77, 0.85, 1.13, 1.21};
    double worst = 0.0;
    int draws_done = 0;
    for (int draw = 0; draw < 20; ++draw) {
        OscillatorParams p;
        p.mass = rng.uniform(5e-5, 6e-4);
        p.frequency = rng.uniform(0.25, 1.1);
        p.displacement = rng.uniform(-5.0, 5.0);
        const double mo = p.mass * p.frequency;
        const double q0 = rng.uniform(-10.0, 10.0);
        const double p0 = rng.uniform(-8.0, 8.0) * mo;
        const double sig_hi = std::min(1.0 / (12.0 * 12.0),
                                       4.5e6 * std::numbers::pi * mo * mo);
        const double sigma = rng.uniform(1.0 / (70.0 * 70.0), sig_hi);

        // window sizing from the closed-form width bound
        const double u0 = 1.0 / (2.0 * sigma * p.hbar);
        const double u_other = 2.0 * sigma * p.hbar / (mo * mo);
        const double width_max = std::sqrt(0.5 * p.hbar * std::max(u0, u_other));
        const auto nh = non_hermitian_coefficients(sigma, p);
        const double excursion = std::abs(q0) + std::abs(p0 / mo) +
                                 std::abs(nh.coef_2omega) + std::abs(nh.coef_omega);
        const double scale = std::max(1.0, excursion);

        const SpatialGrid in_grid{16384, 2.4 * (excursion + 8.0 * width_max) + 50.0};
        std::vector<cplx> psi0(in_grid.n);
        for (std::size_t j = 0; j < in_grid.n; ++j) {
            const double xi = in_grid.x(j);
            psi0[j] = std::exp(cplx(-sigma * (xi - q0) * (xi - q0), p0 * xi / p.hbar));
        }
        const SpatialGrid out_grid{384, 2.2 * (excursion + 7.0 * width_max) + 50.0};

        const auto state0 = init_from_packet(sigma, q0, p0, p);
        const double period = units::two_pi / p.frequency;
        for (const double frac : fracs) {
            const double t = frac * period;
            const double q_closed = center_of_mass_closed_form(t, q0, p0, sigma, p).total();

            const auto steps = static_cast<std::size_t>(std::llround(t / (1e-3 / p.frequency)));
            const auto traj = integrate(state0, t, t / steps, p, steps);
            const double q_rk4 = traj.back().state.q;

            const auto psi_t = ref::oscillator_quadrature(in_grid, psi0, out_grid, t, p);
            const double q_quad = testutil::grid_center(psi_t, out_grid);

            worst = std::max({worst, std::abs(q_rk4 - q_closed) / scale,
                              std::abs(q_quad - q_closed) / scale,
                              std::abs(q_quad - q_rk4) / scale});
        }
        ++draws_done;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d draws x 10 times, worst relative spread = %.2e (<= 1e-5)",
                  draws_done, worst);
    verdict(3, worst <= 1e-5, "closed form / canonical RK4 / kernel quadrature", buf);
}

// ---------------------------------------------------------------- criterion 4
void criterion_4() {
    // spectral vs direct quadrature on 512 points
    const SpatialGrid g{512, 1024.0};
    const auto m = round_trip_matrix_fig1b(1e5, 0.95e5);
    CollinsPropagator prop(g, m);
    double worst_dev = 0.0;
    for (int variant = 0; variant < 2; ++variant) {
        TransverseField in = TransverseField::zero(g);
        for (std::size_t j = 0; j < g.n; ++j) {
            const double x = g.x(j);
            in.samples[j] = variant == 0
                ? cplx(std::exp(-x * x / (f2::w0 * f2::w0)), 0.0)
                : std::exp(cplx(-(x - 30.0) * (x - 30.0) / 3600.0, 0.05 * x));
        }
        const auto direct = ref::serial::collins_direct(g, in.samples, m);
        const auto spectral = prop.propagate(in);
        double peak = 0.0, dev = 0.0;
        for (std::size_t j = 0; j < g.n; ++j) {
            peak = std::max(peak, std::abs(direct[j]));
            dev = std::max(dev, std::abs(spectral.samples[j] - direct[j]));
        }
        worst_dev = std::max(worst_dev, dev / peak);
    }

    // beam-parameter law on random stable matrices
    Rng rng(4242);
    const SpatialGrid gq{2048, 2048.0};
    double worst_q = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const double th = rng.uniform(0.3, 1.2);
        const double zr = rng.uniform(6e3, 1.5e4);
        ABCDMatrix mm{std::cos(th), -std::sin(th) * zr, 0.0, std::cos(th)};
        mm.C = (mm.A * mm.D - 1.0) / mm.B;
        const cplx q(0.25 * rng.uniform(-1.0, 1.0) * zr, zr * rng.uniform(0.7, 1.4));
        TransverseField in = TransverseField::zero(gq);
        for (std::size_t j = 0; j < gq.n; ++j) {
            const double x = gq.x(j);
            in.samples[j] = std::exp(cplx(0.0, -1.0) * units::wavenumber * x * x / (2.0 * q));
        }
        CollinsPropagator pq(gq, mm);
        const auto out = pq.propagate(in);

        // central quadratic fit of log(psi)
        double peak = 0.0;
        for (const auto& z : out.samples) peak = std::max(peak, std::abs(z));
        double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0;
        cplx y0(0, 0), y1(0, 0), y2(0, 0);
        bool started = false;
        double last_ph = 0.0;
        for (std::size_t j = 0; j < gq.n; ++j) {
            if (std::abs(out.samples[j]) <= 0.3 * peak) {
                if (started) break;
                continue;
            }
            const double x = gq.x(j);
            double ph = std::arg(out.samples[j]);
            if (started) {
                while (ph - last_ph > std::numbers::pi) ph -= units::two_pi;
                while (ph - last_ph < -std::numbers::pi) ph += units::two_pi;
            }
            started = true;
            last_ph = ph;
            const cplx y(std::log(std::abs(out.samples[j])), ph);
            const double x2 = x * x;
            s0 += 1; s1 += x; s2 += x2; s3 += x2 * x; s4 += x2 * x2;
            y0 += y; y1 += y * x; y2 += y * x2;
        }
        const double det = s4 * (s2 * s0 - s1 * s1) - s3 * (s3 * s0 - s1 * s2) +
                           s2 * (s3 * s1 - s2 * s2);
        const cplx c2 = (y2 * (s2 * s0 - s1 * s1) - y1 * (s3 * s0 - s1 * s2) +
                         y0 * (s3 * s1 - s2 * s2)) / det;
        const cplx q_fit = cplx(0.0, -1.0) * units::wavenumber / (2.0 * c2);
        const cplx q_law = abcd_transform_q(q, mm);
        worst_q = std::max(worst_q, std::abs(q_fit - q_law) / std::abs(q_law));
    }

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "N=512 max |spectral - direct| / peak = %.2e (<= 1e-8); "
                  "q-law worst fit error = %.2e (<= 1e-6)", worst_dev, worst_q);
    verdict(4, worst_dev <= 1e-8 && worst_q <= 1e-6, "propagator correctness", buf);
}

// ---------------------------------------------------------------- criterion 5
void criterion_5() {
    auto spec = testutil::fig2_spec();
    spec.cavity.grid_settings = {2048, 1024.0};

    const auto eig = round_trip_eigenpair(spec.cavity);
    const double mod = std::abs(eig.eigenvalue);
    const bool mod_ok = std::abs(mod - f2::decay_mod) <= 1e-3;

    const auto th = find_threshold(spec.cavity, 0.28, 0.31);
    const bool cross_ok = std::abs(th.g0 - f2::loss) <= 1e-3;

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "below-threshold modulus = %.6f (expect %.6f +- 1e-3); crossing at "
                  "g0 = %.6f vs loss %.2f (|diff| = %.1e <= 1e-3, g_p* = %.4f)",
                  mod, f2::decay_mod, th.g0, f2::loss, std::abs(th.g0 - f2::loss),
                  th.peak_gain);
    verdict(5, mod_ok && cross_ok, "threshold law", buf);
}

// ---------------------------------------------------------------- criterion 6
void criterion_6() {
    auto spec = testutil::fig2_spec();
    spec.cavity.grid_settings = {2048, 1024.0};
    const auto params = testutil::fig2_params();
    const SpatialGrid grid = spec.cavity.grid();

    const auto eig = round_trip_eigenpair(spec.cavity);
    const auto analytic = packet_on_grid(fundamental_mode(params), grid);
    const double overlap = mode_overlap(eig.mode, analytic);

    OscillatorParams adj = params;
    adj.displacement = -params.displacement;
    const auto adjoint = packet_on_grid(fundamental_mode(adj), grid);
    const double K_num = petermann_numeric(analytic, adjoint);
    const double K_formula = petermann(params.displacement, f2::w0);
    const bool K_ok = std::abs(K_num - K_formula) <= 1e-6 * K_formula;

    // drift contract is stated for the analytic stationary mode; the
    // power-iterated mode of the full Gaussian gain carries a slightly
    // different tilt (beyond-linear pump corrections), reported alongside
    const auto drift = free_drift_check(analytic, params, 10, 950.0);
    const double v_expect = free_drift_velocity(params);
    const bool drift_ok = std::abs(std::abs(drift.velocity / v_expect) - 1.0) <= 0.01;
    const auto drift_eig = free_drift_check(eig.mode, params, 10, 950.0);

    // on-axis pumping: orthogonal modes, no drift
    OscillatorParams herm = params;
    herm.displacement = 0.0;
    const double K_herm = petermann(0.0, f2::w0);
    const auto herm_mode = packet_on_grid(fundamental_mode(herm), grid);
    const auto herm_drift = free_drift_check(herm_mode, herm, 10, 950.0);
    const bool herm_ok = K_herm == 1.0 && std::abs(herm_drift.slope) < 1e-6;

    char buf[480];
    std::snprintf(buf, sizeof(buf),
                  "overlap = %.6f (> 0.999); K_numeric = %.7f vs exp[(2 delta/w0)^2] = %.7f; "
                  "drift |v| = %.4f vs Omega*delta = %.4f (full-gain eigenmode drifts at %.4f); "
                  "on-axis K = 1 and drift = %.1e; first-principles ratio %.4f / K %.4f vs "
                  "reported 0.075 / 1.023 (mismatch flagged in outputs)",
                  overlap, K_num, K_formula, std::abs(drift.velocity), std::abs(v_expect),
                  std::abs(drift_eig.velocity), herm_drift.slope, std::abs(f2::tilt_ratio),
                  f2::petermann_K);
    verdict(6, overlap > 0.999 && K_ok && drift_ok && herm_ok, "mode diagnostics", buf);
}

// ---------------------------------------------------------------- criterion 7
void criterion_7() {
    const auto params = testutil::fig2_params();

    // purity drift per period under RK4
    const auto s0 = init_from_packet(f2::sigma_e, 0.0, 0.0, params);
    const auto traj = integrate(s0, units::two_pi / params.frequency,
                                1e-3 / params.frequency, params, 1000000);
    const double drift = std::abs(traj.back().state.purity() - s0.purity());

    // linearity of the round-trip map
    auto spec = testutil::fig2_spec();
    CavityPropagator prop(spec.cavity);
    const SpatialGrid g = spec.cavity.grid();
    TransverseField fa = TransverseField::zero(g);
    TransverseField fb = TransverseField::zero(g);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double x = g.x(j);
        fa.samples[j] = std::exp(cplx(-x * x / 3600.0, 0.02 * x));
        fb.samples[j] = std::exp(cplx(-(x - 25.0) * (x - 25.0) / 8100.0, -0.01 * x));
    }
    const cplx ca(0.6, -0.8), cb(-0.3, 0.5);
    TransverseField combo = TransverseField::zero(g);
    for (std::size_t j = 0; j < g.n; ++j)
        combo.samples[j] = ca * fa.samples[j] + cb * fb.samples[j];
    prop.round_trip(fa, cplx(0, 0));
    prop.round_trip(fb, cplx(0, 0));
    prop.round_trip(combo, cplx(0, 0));
    double peak = 0.0, lin_dev = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
        const cplx expect = ca * fa.samples[j] + cb * fb.samples[j];
        peak = std::max(peak, std::abs(expect));
        lin_dev = std::max(lin_dev, std::abs(combo.samples[j] - expect));
    }
    lin_dev /= peak;

    // grid-refinement stability of the trajectory
    auto fine = spec;
    fine.cavity.grid_settings.points = 8192;
    const auto coarse_series = run_cavity_series(spec);
    const auto fine_series = run_cavity_series(fine);
    double grid_dev = 0.0;
    for (std::size_t i = 0; i < coarse_series.samples.size(); ++i) {
        if (!coarse_series.samples[i].defined || !fine_series.samples[i].defined) continue;
        grid_dev = std::max(grid_dev,
                            std::abs(coarse_series.samples[i].q - fine_series.samples[i].q));
    }

    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "purity drift / period = %.2e (< 1e-9); linearity deviation = %.2e "
                  "(machine precision); grid-doubling dq = %.2e lambda (< 1e-4)",
                  drift, lin_dev, grid_dev);
    verdict(7, drift < 1e-9 && lin_dev < 1e-12 && grid_dev < 1e-4, "conservation suite", buf);
}

} // namespace

int main() {
    std::printf("acceptance suite: reference-resonator simulator\n");
    const auto run = fig2_run();
    criterion_1(run);
    criterion_2(run);
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    std::printf("%d/7 criteria passed\n", 7 - failures);
    return failures;
}
