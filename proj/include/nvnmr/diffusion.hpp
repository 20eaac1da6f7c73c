#pragma once

#include <cstdint>
#include <vector>

#include "nvnmr/core.hpp"

namespace nvnmr {

/// One measured point of the linewidth-broadening-vs-depth curve.
struct DepthBroadeningPoint {
    double depth_nm = 0.0;
    double broadening_hz = 0.0;
    double broadening_err_hz = 0.0; // 0 = unknown

    ValidationIssues validate() const;
};

/// Result of the diffusion fit. `convention` records that the broadening
/// model treats 2 D / d^2 as an ordinary frequency (Hz); an angular-
/// frequency reading would scale the fitted D by 2 pi.
struct DiffusionFit {
    double d_nm2_per_us = 0.0;
    double ci_lo = 0.0; // bootstrap 16th percentile
    double ci_hi = 0.0; // bootstrap 84th percentile
    std::size_t n_used = 0;     // points above the detection floor
    std::size_t n_censored = 0; // points at/below the floor
    std::string convention = "ordinary-frequency (Hz); angular reading scales D by 2*pi";
};

/// Pure-diffusion broadening 2 D / d^2, returned in Hz (D in nm^2/us,
/// d in nm; 2 D / d^2 is 1/us, i.e. MHz, converted at return).
double broadening_hz(double diffusion_nm2_per_us, double depth_nm);

/// Weighted least squares of broadening(D, d) over points above floor_hz;
/// the model is linear in D so the estimate is closed-form. Points at or
/// below the floor are censored: dropped from the fit by default, or kept
/// as regular data with include_censored = true (both readings of the
/// published fit are plausible). Confidence interval from seeded bootstrap
/// resampling of the retained points.
DiffusionFit fit_diffusion(const std::vector<DepthBroadeningPoint>& points,
                           double floor_hz, std::uint64_t seed = 0,
                           int n_bootstrap = 200, bool include_censored = false);

/// Width budget of the measured line, each term in Hz.
struct LinewidthBudget {
    double intrinsic_hz = 0.0;
    double diffusion_hz = 0.0;
    double lifetime_hz = 0.0; // 1 / (pi T1)
    double total_hz = 0.0;    // linear sum (Lorentzian widths add)
};

/// intrinsic + 2 D / depth^2 + 1/(pi T1), reported per term.
LinewidthBudget combined_linewidth(const NvSensor& sensor, const SampleModel& sample);

} // namespace nvnmr
