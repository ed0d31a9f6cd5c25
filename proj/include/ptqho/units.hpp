#ifndef PTQHO_UNITS_HPP
#define PTQHO_UNITS_HPP

#include <numbers>

// Internal unit system: all lengths in units of the optical wavelength
// (lambda = 1), time in cavity round trips.  The quantum analogy maps
// hbar -> 1/k = lambda/(2 pi), so the default hbar below is 1/(2 pi).
namespace ptqho::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double wavenumber = two_pi;          // k = 2 pi / lambda
inline constexpr double hbar = 1.0 / two_pi;          // 1/k

} // namespace ptqho::units

#endif
