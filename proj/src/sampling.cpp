#include "nvnmr/sampling.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace nvnmr {

namespace {

void check_band(double f_low_hz, double f_high_hz, bool allow_equal = false) {
    if (!(std::isfinite(f_low_hz) && f_low_hz > 0.0)) {
        throw ValidationError("band.f_low_hz", "must be finite and > 0");
    }
    if (!(std::isfinite(f_high_hz) &&
          (allow_equal ? f_high_hz >= f_low_hz : f_high_hz > f_low_hz))) {
        throw ValidationError("band.f_high_hz",
                              allow_equal ? "must be >= f_low_hz" : "must be > f_low_hz");
    }
}

} // namespace

ValidationIssues SamplingPlan::validate() const {
    ValidationIssues issues;
    if (!(std::isfinite(f_low_hz) && f_low_hz > 0.0)) {
        issues.push_back({"SamplingPlan.f_low_hz", "must be finite and > 0"});
    }
    if (!(std::isfinite(f_high_hz) && f_high_hz > f_low_hz)) {
        issues.push_back({"SamplingPlan.f_high_hz", "must exceed f_low_hz"});
    }
    if (fold_index < 1) {
        issues.push_back({"SamplingPlan.fold_index", "must be >= 1"});
    }
    if (!(std::isfinite(fs_hz) && fs_hz > 0.0)) {
        issues.push_back({"SamplingPlan.fs_hz", "must be finite and > 0"});
    }
    if (n_samples < 2) {
        issues.push_back({"SamplingPlan.n_samples", "must be >= 2"});
    }
    if (!std::isfinite(t0_us) || t0_us < 0.0) {
        issues.push_back({"SamplingPlan.t0_us", "must be finite and >= 0"});
    }
    if (issues.empty()) {
        // Nyquist-window rule, with a hair of tolerance for rates specified
        // exactly at an edge.
        const double lo = 2.0 * f_high_hz / fold_index;
        const double hi =
            fold_index == 1 ? std::numeric_limits<double>::infinity()
                            : 2.0 * f_low_hz / (fold_index - 1);
        const double tol = 1e-9 * fs_hz;
        if (fs_hz < lo - tol || fs_hz > hi + tol) {
            issues.push_back(
                {"SamplingPlan.fs_hz",
                 "outside the admissible interval [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "] Hz for fold_index " +
                     std::to_string(fold_index)});
        }
    }
    return issues;
}

RateInterval valid_rate_interval(double f_low_hz, double f_high_hz, int fold_index) {
    check_band(f_low_hz, f_high_hz);
    if (fold_index < 1) {
        throw ValidationError("fold_index", "must be >= 1");
    }
    RateInterval iv;
    iv.lo_hz = 2.0 * f_high_hz / fold_index;
    iv.hi_hz = fold_index == 1 ? std::numeric_limits<double>::infinity()
                               : 2.0 * f_low_hz / (fold_index - 1);
    if (iv.lo_hz > iv.hi_hz) {
        throw ValidationError(
            "fold_index", "interval empty for n = " + std::to_string(fold_index) +
                              "; maximal feasible n = " +
                              std::to_string(max_fold_index(f_low_hz, f_high_hz)));
    }
    return iv;
}

std::int64_t max_fold_index(double f_low_hz, double f_high_hz) {
    check_band(f_low_hz, f_high_hz, /*allow_equal=*/true);
    const double bw = f_high_hz - f_low_hz;
    if (bw <= 0.0) {
        return unbounded_fold_index; // zero bandwidth: every n admissible
    }
    const double bound = f_high_hz / bw;
    if (bound >= static_cast<double>(unbounded_fold_index)) {
        return unbounded_fold_index;
    }
    return static_cast<std::int64_t>(std::floor(bound));
}

double alias_frequency_hz(double f_true_hz, double fs_hz) {
    if (!(f_true_hz >= 0.0)) {
        throw ValidationError("alias.f_true_hz", "must be >= 0");
    }
    if (!(std::isfinite(fs_hz) && fs_hz > 0.0)) {
        throw ValidationError("alias.fs_hz", "must be finite and > 0");
    }
    double r = std::fmod(f_true_hz, fs_hz);
    if (r < 0.0) r += fs_hz;
    return r <= 0.5 * fs_hz ? r : fs_hz - r;
}

double unalias_hz(double f_folded_hz, double fs_hz, double f_low_hz, double f_high_hz) {
    check_band(f_low_hz, f_high_hz);
    if (!(std::isfinite(fs_hz) && fs_hz > 0.0)) {
        throw ValidationError("unalias.fs_hz", "must be finite and > 0");
    }
    if (f_folded_hz < 0.0 || f_folded_hz > 0.5 * fs_hz) {
        throw ValidationError("unalias.f_folded_hz", "must lie in [0, fs/2]");
    }
    // candidates k*fs +- f_folded intersected with the band
    std::vector<double> candidates;
    const double tol = 1e-6 * fs_hz;
    const auto k_lo = static_cast<std::int64_t>(std::floor(f_low_hz / fs_hz)) - 1;
    const auto k_hi = static_cast<std::int64_t>(std::ceil(f_high_hz / fs_hz)) + 1;
    for (std::int64_t k = std::max<std::int64_t>(0, k_lo); k <= k_hi; ++k) {
        for (const double sign : {1.0, -1.0}) {
            const double f = k * fs_hz + sign * f_folded_hz;
            if (f >= f_low_hz - tol && f <= f_high_hz + tol && f >= 0.0) {
                if (candidates.empty() ||
                    std::abs(candidates.back() - f) > tol) { // k=0 or fold edge dupes
                    candidates.push_back(f);
                }
            }
        }
    }
    if (candidates.size() != 1) {
        throw AmbiguityError(
            "unalias: " + std::to_string(candidates.size()) +
                " pre-images of " + std::to_string(f_folded_hz) + " Hz in band",
            candidates);
    }
    return candidates.front();
}

SamplingPlan make_plan(double f_low_hz, double f_high_hz, int fold_index,
                       int n_samples, double t0_us) {
    const RateInterval iv = valid_rate_interval(f_low_hz, f_high_hz, fold_index);
    SamplingPlan plan;
    plan.f_low_hz = f_low_hz;
    plan.f_high_hz = f_high_hz;
    plan.fold_index = fold_index;
    plan.fs_hz = iv.unbounded() ? iv.lo_hz : iv.hi_hz;
    plan.n_samples = n_samples;
    plan.t0_us = t0_us;
    require_valid(plan.validate());
    return plan;
}

} // namespace nvnmr
