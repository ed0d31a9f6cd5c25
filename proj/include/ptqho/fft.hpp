#ifndef PTQHO_FFT_HPP
#define PTQHO_FFT_HPP

#include <complex>
#include <cstddef>
#include <span>

namespace ptqho {

/// In-place complex 1-D FFT pair backed by FFTW (deterministic ESTIMATE
/// plans).  Each instance owns its plans and an aligned work buffer, so
/// independent instances may be used concurrently from different threads.
class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    std::size_t size() const { return n_; }

    /// v <- DFT(v), convention sum_j v_j exp(-2 pi i j k / n), unnormalized.
    void forward(std::span<std::complex<double>> v);
    /// v <- IDFT(v) / n (round trip through forward+inverse is the identity).
    void inverse(std::span<std::complex<double>> v);

private:
    std::size_t n_;
    void* buf_;
    void* plan_fwd_;
    void* plan_bwd_;
};

} // namespace ptqho

#endif
