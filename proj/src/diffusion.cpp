#include "nvnmr/diffusion.hpp"

#include <algorithm>
#include <cmath>

#include "nvnmr/rng.hpp"

namespace nvnmr {

ValidationIssues DepthBroadeningPoint::validate() const {
    ValidationIssues issues;
    if (!(std::isfinite(depth_nm) && depth_nm > 0.0)) {
        issues.push_back({"DepthBroadeningPoint.depth_nm", "must be finite and > 0"});
    }
    if (!(std::isfinite(broadening_hz) && broadening_hz >= 0.0)) {
        issues.push_back({"DepthBroadeningPoint.broadening_hz", "must be finite and >= 0"});
    }
    if (!(std::isfinite(broadening_err_hz) && broadening_err_hz >= 0.0)) {
        issues.push_back(
            {"DepthBroadeningPoint.broadening_err_hz", "must be finite and >= 0"});
    }
    return issues;
}

double broadening_hz(double diffusion_nm2_per_us, double depth_nm) {
    if (!(std::isfinite(diffusion_nm2_per_us) && diffusion_nm2_per_us >= 0.0)) {
        throw ValidationError("broadening.D", "must be finite and >= 0");
    }
    if (!(std::isfinite(depth_nm) && depth_nm > 0.0)) {
        throw ValidationError("broadening.depth_nm", "must be finite and > 0");
    }
    // 2D/d^2 in 1/us = MHz
    return 2.0 * diffusion_nm2_per_us / (depth_nm * depth_nm) * units::hz_per_mhz;
}

namespace {

// WLS estimate of D for the linear model b = (2e6 / d^2) * D.
// Weights 1/sigma^2 when an error is given, else 1.
double wls_diffusion(const std::vector<const DepthBroadeningPoint*>& pts) {
    double num = 0.0;
    double den = 0.0;
    for (const auto* p : pts) {
        const double x = 2.0 / (p->depth_nm * p->depth_nm) * units::hz_per_mhz;
        const double w =
            p->broadening_err_hz > 0.0 ? 1.0 / (p->broadening_err_hz * p->broadening_err_hz)
                                       : 1.0;
        num += w * x * p->broadening_hz;
        den += w * x * x;
    }
    return num / den;
}

} // namespace

DiffusionFit fit_diffusion(const std::vector<DepthBroadeningPoint>& points,
                           double floor_hz, std::uint64_t seed, int n_bootstrap,
                           bool include_censored) {
    if (!(std::isfinite(floor_hz) && floor_hz >= 0.0)) {
        throw ValidationError("fit_diffusion.floor_hz", "must be finite and >= 0");
    }
    if (n_bootstrap < 1) {
        throw ValidationError("fit_diffusion.n_bootstrap", "must be >= 1");
    }
    for (const auto& p : points) {
        require_valid(p.validate());
    }
    std::vector<const DepthBroadeningPoint*> used;
    std::size_t censored = 0;
    for (const auto& p : points) {
        if (p.broadening_hz > floor_hz || include_censored) {
            used.push_back(&p);
        }
        if (p.broadening_hz <= floor_hz) {
            ++censored;
        }
    }
    if (used.size() < 2) {
        throw FitRejectedError(
            "fit_diffusion: fewer than 2 points above the detection floor");
    }

    DiffusionFit fit;
    fit.d_nm2_per_us = wls_diffusion(used);
    fit.n_used = used.size();
    fit.n_censored = censored;

    // seeded bootstrap over the retained points; percentile CI (16/84)
    std::vector<double> boot(static_cast<std::size_t>(n_bootstrap));
    rng::Stream stream(seed, /*stream_id=*/0xb0075ULL);
    std::vector<const DepthBroadeningPoint*> resample(used.size());
    for (int b = 0; b < n_bootstrap; ++b) {
        for (auto& slot : resample) {
            const auto idx = static_cast<std::size_t>(stream.next_uniform01() *
                                                      static_cast<double>(used.size()));
            slot = used[std::min(idx, used.size() - 1)];
        }
        boot[static_cast<std::size_t>(b)] = wls_diffusion(resample);
    }
    std::sort(boot.begin(), boot.end());
    const auto pick = [&](double q) {
        const double pos = q * static_cast<double>(boot.size() - 1);
        const auto i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        return i + 1 < boot.size() ? boot[i] * (1.0 - frac) + boot[i + 1] * frac
                                   : boot[i];
    };
    fit.ci_lo = pick(0.16);
    fit.ci_hi = pick(0.84);
    return fit;
}

LinewidthBudget combined_linewidth(const NvSensor& sensor, const SampleModel& sample) {
    require_valid(sensor.validate());
    require_valid(sample.validate());
    LinewidthBudget lw;
    lw.intrinsic_hz = sample.intrinsic_linewidth_hz;
    lw.diffusion_hz = broadening_hz(sample.diffusion_nm2_per_us, sensor.depth_nm);
    lw.lifetime_hz = 1.0 / (units::pi * sensor.t1_ms * units::s_per_ms);
    lw.total_hz = lw.intrinsic_hz + lw.diffusion_hz + lw.lifetime_hz;
    return lw;
}

} // namespace nvnmr
