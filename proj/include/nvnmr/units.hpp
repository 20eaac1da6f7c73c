#pragma once

#include <numbers>

// Canonical internal units used throughout: nm, us, kHz, Gauss.
// All frequencies are ordinary frequencies (Hz / kHz), never angular.
// Quantities quoted in other units are converted at module boundaries.

namespace nvnmr::units {

inline constexpr double pi = std::numbers::pi;

// --- length ---
inline constexpr double nm_per_m = 1e9;
inline constexpr double m_per_nm = 1e-9;

// --- time ---
inline constexpr double us_per_s = 1e6;
inline constexpr double s_per_us = 1e-6;
inline constexpr double us_per_ms = 1e3;
inline constexpr double ms_per_us = 1e-3;
inline constexpr double ms_per_s = 1e3;
inline constexpr double s_per_ms = 1e-3;

// --- frequency ---
inline constexpr double hz_per_khz = 1e3;
inline constexpr double khz_per_hz = 1e-3;
inline constexpr double hz_per_mhz = 1e6;
inline constexpr double mhz_per_hz = 1e-6;

// --- magnetic field ---
inline constexpr double gauss_per_tesla = 1e4;
inline constexpr double tesla_per_gauss = 1e-4;

// Planck constant, J*s (CODATA 2019 exact).
inline constexpr double planck_J_s = 6.62607015e-34;

// mu0/(4 pi) in T*m^3 per (J/T); field of a point dipole is
// (mu0/4pi) * m / r^3 along the symmetry axis combinations.
inline constexpr double mu0_over_4pi_si = 1e-7;

// Field prefactor of a spin-1/2 point dipole, per unit gyromagnetic ratio:
//   B = dipole_prefactor(gamma) * (angular kernel) / r[nm]^3   [Gauss]
// with the moment mu = h * gamma / 2 (gamma as ordinary frequency).
// Derivation: (mu0/4pi) * (h/2) * gamma[Hz/T] collapsed into G*nm^3:
//   1e-7 * 6.62607015e-34/2 * 1e7[Hz/T per kHz/G] * 1e31[G*nm^3 per T*m^3]
inline constexpr double dipole_gauss_nm3_per_gamma(double gamma_khz_per_gauss) {
    return 3.313035075e-3 * gamma_khz_per_gauss;
}

// Dimensionless half-space integral of the squared axial dipole kernel,
//   I = \int_{z >= 1} [(3 cos^2 theta - 1)/r^3]^2 dV  =  pi/4.
// Evaluated analytically; reproduced numerically by
// tools/derive_halfspace_constant.py and by the test-suite oracle.
inline constexpr double halfspace_kernel_integral = pi / 4.0;

} // namespace nvnmr::units
