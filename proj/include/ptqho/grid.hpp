#ifndef PTQHO_GRID_HPP
#define PTQHO_GRID_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace ptqho {

/// Uniform symmetric grid of n points covering [-window/2, window/2);
/// x_j = (j - n/2) dx, so x = 0 is a sample point for even n.
struct SpatialGrid {
    std::size_t n = 0;
    double window = 0.0;

    double dx() const { return window / static_cast<double>(n); }
    double x(std::size_t j) const {
        return (static_cast<double>(j) - static_cast<double>(n) / 2.0) * dx();
    }
    bool operator==(const SpatialGrid&) const = default;
};

/// Complex transverse field sampled on a SpatialGrid, tagged with the
/// round-trip index of the plane it lives on.
struct TransverseField {
    SpatialGrid grid;
    std::vector<std::complex<double>> samples;
    long trip_index = 0;

    static TransverseField zero(const SpatialGrid& g) {
        return {g, std::vector<std::complex<double>>(g.n), 0};
    }
    std::size_t size() const { return samples.size(); }
};

} // namespace ptqho

#endif
