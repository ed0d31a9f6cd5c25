#include "ptqho/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace ptqho {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

Fft::Fft(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("Fft: size must be nonzero");
    buf_ = fftw_malloc(sizeof(fftw_complex) * n);
    if (!buf_) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* b = static_cast<fftw_complex*>(buf_);
    plan_fwd_ = fftw_plan_dft_1d(static_cast<int>(n), b, b, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_1d(static_cast<int>(n), b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_bwd_) {
        fftw_free(buf_);
        throw std::runtime_error("Fft: plan creation failed");
    }
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_free(buf_);
}

void Fft::forward(std::span<std::complex<double>> v) {
    if (v.size() != n_) throw std::invalid_argument("Fft::forward: size mismatch");
    std::memcpy(buf_, v.data(), sizeof(fftw_complex) * n_);
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    std::memcpy(v.data(), buf_, sizeof(fftw_complex) * n_);
}

void Fft::inverse(std::span<std::complex<double>> v) {
    if (v.size() != n_) throw std::invalid_argument("Fft::inverse: size mismatch");
    std::memcpy(buf_, v.data(), sizeof(fftw_complex) * n_);
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    const double inv_n = 1.0 / static_cast<double>(n_);
    auto* b = static_cast<fftw_complex*>(buf_);
    for (std::size_t j = 0; j < n_; ++j) {
        v[j] = std::complex<double>(b[j][0] * inv_n, b[j][1] * inv_n);
    }
}

} // namespace ptqho
