#ifndef PTQHO_REFERENCE_HPP
#define PTQHO_REFERENCE_HPP

#include <complex>
#include <vector>

#include "ptqho/cavity.hpp"
#include "ptqho/grid.hpp"
#include "ptqho/oscillator.hpp"

// Direct O(N^2) quadrature of the two propagation integrals.  These evaluate
// the kernels term by term and share no code with the spectral (FFT) path or
// the closed-form packet flow, so they serve as independent cross-checks.
//
// Each routine comes in two variants: a plain serial one (namespace serial)
// that calls std::exp per matrix element, and an OpenMP version that carries
// the inner phase factor by a unit-complex recurrence (resynchronized every
// resync_stride points to keep rounding growth negligible).
namespace ptqho::ref {

inline constexpr std::size_t resync_stride = 512;
// matrix-size gate below which the row loop is not worth threading
inline constexpr std::size_t parallel_min_work = 1 << 20;

/// Diffraction integral over the ABCD kernel, input and output on `grid`.
std::vector<std::complex<double>> collins_direct(const SpatialGrid& grid,
                                                 const std::vector<std::complex<double>>& in,
                                                 const ABCDMatrix& m, double lambda = 1.0);

/// Quadrature of the displaced-kernel propagation integral
///   psi(x,t) = int dxi U(x - i delta, xi - i delta, t) psi0(xi)
/// with psi0 sampled on in_grid; the result is returned on out_grid.
std::vector<std::complex<double>> oscillator_quadrature(
    const SpatialGrid& in_grid, const std::vector<std::complex<double>>& psi0,
    const SpatialGrid& out_grid, double t, const OscillatorParams& params);

namespace serial {
std::vector<std::complex<double>> collins_direct(const SpatialGrid& grid,
                                                 const std::vector<std::complex<double>>& in,
                                                 const ABCDMatrix& m, double lambda = 1.0);
std::vector<std::complex<double>> oscillator_quadrature(
    const SpatialGrid& in_grid, const std::vector<std::complex<double>>& psi0,
    const SpatialGrid& out_grid, double t, const OscillatorParams& params);
} // namespace serial

} // namespace ptqho::ref

#endif
