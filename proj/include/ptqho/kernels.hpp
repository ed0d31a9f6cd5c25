#ifndef PTQHO_KERNELS_HPP
#define PTQHO_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <span>

// Grid kernels used by the cavity map and the observables.  Each kernel has
// an OpenMP-parallel production version and a plain serial reference twin
// (namespace serial) kept for testing and benchmarking.
//
// Reductions accumulate per fixed-size block and then sum the block partials
// in index order, so the result is bit-identical for any thread count.
namespace ptqho::kernels {

inline constexpr std::size_t reduction_block = 256;
// arrays below this size run the loop serially; thread fork/join costs more
// than the work on typical transverse grids
inline constexpr std::size_t parallel_min_elems = 1 << 18;

// sum of |v_j|^2
double sum_abs2(std::span<const std::complex<double>> v);
// sum of x_j |v_j|^2 with x_j = (j - n/2) dx
double weighted_first_moment(std::span<const std::complex<double>> v, double dx);
// largest |v_j|
double max_abs(std::span<const std::complex<double>> v);
// v_j *= g_j for real g (gain sheet)
void multiply_real(std::span<std::complex<double>> v, std::span<const double> g);
// v_j *= c_j for complex c (phase chirp)
void multiply_complex(std::span<std::complex<double>> v,
                      std::span<const std::complex<double>> c);
// v_j += s * w_j (injection)
void axpy(std::span<std::complex<double>> v, std::complex<double> s,
          std::span<const std::complex<double>> w);

namespace serial {
double sum_abs2(std::span<const std::complex<double>> v);
double weighted_first_moment(std::span<const std::complex<double>> v, double dx);
double max_abs(std::span<const std::complex<double>> v);
void multiply_real(std::span<std::complex<double>> v, std::span<const double> g);
void multiply_complex(std::span<std::complex<double>> v,
                      std::span<const std::complex<double>> c);
void axpy(std::span<std::complex<double>> v, std::complex<double> s,
          std::span<const std::complex<double>> w);
} // namespace serial

} // namespace ptqho::kernels

#endif
