// Timing comparison of the OpenMP kernels against their serial reference
// twins.  Not a correctness test (tests/ cover agreement); prints one row
// per kernel and size with the speedup.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ptqho/cavity.hpp"
#include "ptqho/grid.hpp"
#include "ptqho/kernels.hpp"
#include "ptqho/oscillator.hpp"
#include "ptqho/reference.hpp"

using ptqho::cplx;

namespace {

std::vector<cplx> test_field(const ptqho::SpatialGrid& g) {
    std::vector<cplx> v(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double x = g.x(j);
        v[j] = std::exp(cplx(-x * x / (80.0 * 80.0), 0.02 * x));
    }
    return v;
}

template <class F>
double time_ms(F&& f, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void row(const char* name, std::size_t n, double serial_ms, double parallel_ms) {
    std::printf("%-28s n=%6zu  serial %9.3f ms   omp %9.3f ms   speedup %5.2fx\n",
                name, n, serial_ms, parallel_ms, serial_ms / parallel_ms);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both columns run serial code\n");
#endif
    std::printf("reference = plain per-element loops; production = size-gated OpenMP, and the\n"
                "quadratures also carry the inner phase by a unit rotation instead of exp()\n\n");

    const ptqho::ABCDMatrix m = ptqho::round_trip_matrix_fig1b(1e5, 0.95e5);
    ptqho::OscillatorParams osc;
    osc.mass = 1.0173e-4;
    osc.frequency = 0.45103;
    osc.displacement = -3.797;

    // pointwise/reduction kernels at a size past the parallel gate
    {
        const ptqho::SpatialGrid g{524288, 262144.0};
        const auto f = test_field(g);
        volatile double sink = 0.0;
        row("sum_abs2", g.n,
            time_ms([&] { sink = ptqho::kernels::serial::sum_abs2(f); }, 50),
            time_ms([&] { sink = ptqho::kernels::sum_abs2(f); }, 50));
        row("weighted_first_moment", g.n,
            time_ms([&] { sink = ptqho::kernels::serial::weighted_first_moment(f, g.dx()); }, 50),
            time_ms([&] { sink = ptqho::kernels::weighted_first_moment(f, g.dx()); }, 50));
        (void)sink;
    }

    for (const std::size_t n : {512UL, 2048UL, 8192UL}) {
        const ptqho::SpatialGrid g{n, 4.0 * static_cast<double>(n) / 8.0};
        const auto f = test_field(g);
        volatile double sink = 0.0;

        row("sum_abs2", n,
            time_ms([&] { sink = ptqho::kernels::serial::sum_abs2(f); }, 200),
            time_ms([&] { sink = ptqho::kernels::sum_abs2(f); }, 200));
        row("weighted_first_moment", n,
            time_ms([&] { sink = ptqho::kernels::serial::weighted_first_moment(f, g.dx()); }, 200),
            time_ms([&] { sink = ptqho::kernels::weighted_first_moment(f, g.dx()); }, 200));

        // unit-modulus chirp: repeated application cannot overflow
        std::vector<cplx> phase(g.n);
        for (std::size_t j = 0; j < g.n; ++j)
            phase[j] = std::exp(cplx(0.0, 1e-4 * g.x(j) * g.x(j)));
        auto v1 = f;
        auto v2 = f;
        row("multiply_complex", n,
            time_ms([&] { ptqho::kernels::serial::multiply_complex(v1, phase); }, 200),
            time_ms([&] { ptqho::kernels::multiply_complex(v2, phase); }, 200));

        const int reps = n <= 512 ? 8 : (n <= 2048 ? 3 : 1);
        row("collins_direct", n,
            time_ms([&] { auto o = ptqho::ref::serial::collins_direct(g, f, m); }, reps),
            time_ms([&] { auto o = ptqho::ref::collins_direct(g, f, m); }, reps));
        row("oscillator_quadrature", n,
            time_ms([&] { auto o = ptqho::ref::serial::oscillator_quadrature(g, f, g, 3.0, osc); }, reps),
            time_ms([&] { auto o = ptqho::ref::oscillator_quadrature(g, f, g, 3.0, osc); }, reps));
        (void)sink;
    }
    return 0;
}
