#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "nvnmr/core.hpp"

namespace nvnmr {

/// Closed interval of admissible sampling rates for one fold index.
struct RateInterval {
    double lo_hz = 0.0;
    double hi_hz = 0.0; // +inf when the fold index is 1

    bool unbounded() const { return !std::isfinite(hi_hz); }
    bool contains(double fs_hz) const { return fs_hz >= lo_hz && fs_hz <= hi_hz; }
};

/// Bandpass under-sampling plan: a narrow band [f_L, f_H] observed through
/// fold n at rate fs, sampled n_samples times starting at t0.
struct SamplingPlan {
    double f_low_hz = 0.0;
    double f_high_hz = 0.0;
    int fold_index = 1;
    double fs_hz = 0.0;
    int n_samples = 0;
    double t0_us = 0.0;

    double dt_us() const { return units::us_per_s / fs_hz; }
    double sample_time_us(int k) const { return t0_us + k * dt_us(); }
    double duration_us() const { return (n_samples - 1) * dt_us(); }

    ValidationIssues validate() const;
};

/// Admissible rates [2 f_H / n, 2 f_L / (n-1)] for fold index n
/// (upper bound +inf for n = 1). Throws ValidationError naming the maximal
/// feasible fold index when the interval is empty.
RateInterval valid_rate_interval(double f_low_hz, double f_high_hz, int fold_index);

/// Largest n with 2 f_H / n <= 2 f_L / (n-1), i.e. floor(f_H / (f_H - f_L)).
/// Zero bandwidth (f_L == f_H) has no bound; returns the documented sentinel
/// unbounded_fold_index.
std::int64_t max_fold_index(double f_low_hz, double f_high_hz);

inline constexpr std::int64_t unbounded_fold_index =
    std::numeric_limits<std::int64_t>::max();

/// Frequency at which a sampled cosine of f_true appears, folded into
/// [0, fs/2].
double alias_frequency_hz(double f_true_hz, double fs_hz);

/// The unique f in [f_L, f_H] whose alias is f_folded. Throws AmbiguityError
/// (listing every candidate) when the band contains zero or multiple
/// pre-images.
double unalias_hz(double f_folded_hz, double fs_hz, double f_low_hz, double f_high_hz);

/// Plan with the rate auto-chosen at the upper edge of the admissible
/// interval (2 f_L/(n-1); maximizes samples per unit time). For n = 1 the
/// interval is unbounded above and the lower edge 2 f_H is used.
SamplingPlan make_plan(double f_low_hz, double f_high_hz, int fold_index,
                       int n_samples, double t0_us = 0.0);

} // namespace nvnmr
