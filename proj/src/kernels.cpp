#include "ptqho/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ptqho::kernels {

namespace {

// Blocked reduction: partials are formed per block and combined in index
// order, so the floating-point result does not depend on the thread count.
template <class BlockOp>
double blocked_reduce(std::size_t n, BlockOp&& op) {
    const std::size_t n_blocks = (n + reduction_block - 1) / reduction_block;
    if (n < parallel_min_elems) {
        // same block partials, same order, no buffer and no thread team
        double total = 0.0;
        for (std::size_t b = 0; b < n_blocks; ++b) {
            const std::size_t lo = b * reduction_block;
            total += op(lo, std::min(lo + reduction_block, n));
        }
        return total;
    }
    std::vector<double> partial(n_blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (long long bi = 0; bi < static_cast<long long>(n_blocks); ++bi) {
        const std::size_t b = static_cast<std::size_t>(bi);
        const std::size_t lo = b * reduction_block;
        const std::size_t hi = std::min(lo + reduction_block, n);
        partial[b] = op(lo, hi);
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

} // namespace

double sum_abs2(std::span<const std::complex<double>> v) {
    return blocked_reduce(v.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t j = lo; j < hi; ++j) s += std::norm(v[j]);
        return s;
    });
}

double weighted_first_moment(std::span<const std::complex<double>> v, double dx) {
    const double half = static_cast<double>(v.size()) / 2.0;
    return blocked_reduce(v.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t j = lo; j < hi; ++j)
            s += (static_cast<double>(j) - half) * dx * std::norm(v[j]);
        return s;
    });
}

double max_abs(std::span<const std::complex<double>> v) {
    const std::size_t n = v.size();
    if (n < parallel_min_elems) return serial::max_abs(v);
    double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m)
    for (long long j = 0; j < static_cast<long long>(n); ++j)
        m = std::max(m, std::abs(v[static_cast<std::size_t>(j)]));
    return m;
}

void multiply_real(std::span<std::complex<double>> v, std::span<const double> g) {
    if (v.size() < parallel_min_elems) return serial::multiply_real(v, g);
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < static_cast<long long>(v.size()); ++j)
        v[static_cast<std::size_t>(j)] *= g[static_cast<std::size_t>(j)];
}

void multiply_complex(std::span<std::complex<double>> v,
                      std::span<const std::complex<double>> c) {
    if (v.size() < parallel_min_elems) return serial::multiply_complex(v, c);
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < static_cast<long long>(v.size()); ++j)
        v[static_cast<std::size_t>(j)] *= c[static_cast<std::size_t>(j)];
}

void axpy(std::span<std::complex<double>> v, std::complex<double> s,
          std::span<const std::complex<double>> w) {
    if (v.size() < parallel_min_elems) return serial::axpy(v, s, w);
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < static_cast<long long>(v.size()); ++j)
        v[static_cast<std::size_t>(j)] += s * w[static_cast<std::size_t>(j)];
}

namespace serial {

double sum_abs2(std::span<const std::complex<double>> v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return s;
}

double weighted_first_moment(std::span<const std::complex<double>> v, double dx) {
    const double half = static_cast<double>(v.size()) / 2.0;
    double s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j)
        s += (static_cast<double>(j) - half) * dx * std::norm(v[j]);
    return s;
}

double max_abs(std::span<const std::complex<double>> v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

void multiply_real(std::span<std::complex<double>> v, std::span<const double> g) {
    for (std::size_t j = 0; j < v.size(); ++j) v[j] *= g[j];
}

void multiply_complex(std::span<std::complex<double>> v,
                      std::span<const std::complex<double>> c) {
    for (std::size_t j = 0; j < v.size(); ++j) v[j] *= c[j];
}

void axpy(std::span<std::complex<double>> v, std::complex<double> s,
          std::span<const std::complex<double>> w) {
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += s * w[j];
}

} // namespace serial

} // namespace ptqho::kernels
