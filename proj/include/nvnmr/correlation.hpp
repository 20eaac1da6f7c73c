#pragma once

#include <optional>
#include <vector>

#include "nvnmr/core.hpp"
#include "nvnmr/sampling.hpp"
#include "nvnmr/spectral.hpp"

namespace nvnmr {

/// Tabulated bath decorrelation envelope C(t): linear interpolation between
/// knots, clamped to the last value beyond the table. Lets a Monte Carlo
/// autocorrelation stand in for the single-exponential model.
struct TabulatedEnvelope {
    std::vector<double> t_us;
    std::vector<double> c;

    ValidationIssues validate() const;
    double at(double t_us_query) const;
};

/// Two XY8 blocks separated by a free delay t: signal
///   amplitude * cos(2 pi f t) * exp(-t/T1) * C_bath(t).
/// The phase-to-population mapping of the blocks is absorbed into
/// `amplitude`; the blocks are not re-simulated here.
struct CorrelationConfig {
    NvSensor sensor;
    double signal_freq_hz = 0.0;
    /// Bath correlation time; +inf (the default) means no bath decay.
    double bath_decay_us = std::numeric_limits<double>::infinity();
    double amplitude = 1.0;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    /// When set, replaces exp(-t/bath_decay_us) as C_bath.
    std::optional<TabulatedEnvelope> bath_envelope;

    ValidationIssues validate() const;
};

/// Noise-free population signal at delay t_us; |result| <= amplitude.
double correlation_signal(const CorrelationConfig& cfg, double t_us);

/// Samples correlation_signal at the plan's instants and adds i.i.d.
/// Gaussian noise of std noise_sigma from the seeded counter RNG.
/// Identical (cfg, plan) give a bitwise-identical series.
TimeSeries synthesize_timeseries(const CorrelationConfig& cfg, const SamplingPlan& plan);

} // namespace nvnmr
