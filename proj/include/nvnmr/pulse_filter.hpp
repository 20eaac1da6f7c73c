#pragma once

#include "nvnmr/core.hpp"

namespace nvnmr {

/// An XY8-N block: 8*N pi pulses, CPMG timing (pulses at (k - 1/2) tau),
/// total duration 8*N*tau.
struct PulseSequence {
    int repeats = 1;     // N
    double tau_us = 0.0; // inter-pulse spacing

    int pulse_count() const { return 8 * repeats; }
    double duration_us() const { return pulse_count() * tau_us; }
    /// Resonant detection frequency 1/(2 tau), in Hz.
    double resonance_hz() const;

    ValidationIssues validate() const;
};

/// Sequence tuned so that 1/(2 tau) sits on the given frequency.
PulseSequence sequence_for_frequency(int repeats, double f_hz);

/// |W(f)|^2 of the +-1 toggling function, normalized by the squared
/// duration so the weight is dimensionless and <= 1. Evaluated by exact
/// per-segment integration of the piecewise-constant toggling function.
/// Zero at f = 0 for any balanced (even pulse count) sequence; maximum
/// near 1/(2 tau).
double filter_function(const PulseSequence& seq, double f_hz);

/// Same transform with a multiplicative exp(-t/T2) sensitivity window
/// applied to the toggling function before transforming.
double windowed_filter_function(const PulseSequence& seq, double f_hz, double t2_us);

/// FWHM (Hz) of the windowed filter peak near 1/(2 tau), located by a
/// dense scan plus linear interpolation of the half-maximum crossings.
double effective_linewidth_hz(const PulseSequence& seq, const NvSensor& sensor);

/// FWHM (Hz) of the bare (unwindowed) filter peak.
double filter_fwhm_hz(const PulseSequence& seq);

/// RMS field (Gauss) of the statistically polarized dipole half-space at
/// distance depth_nm below the sample:
///   B_rms^2 = K * rho / depth^3,
/// K = (dipole prefactor)^2 * (pi/4), the axial-kernel half-space integral.
double brms_at_depth_gauss(const SampleModel& sample, double depth_nm);

/// Exact inverse of brms_at_depth_gauss.
double depth_from_brms_nm(const SampleModel& sample, double brms_gauss);

} // namespace nvnmr
