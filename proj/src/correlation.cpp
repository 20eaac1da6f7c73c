#include "nvnmr/correlation.hpp"

#include <cmath>

#include "nvnmr/rng.hpp"

namespace nvnmr {

ValidationIssues TabulatedEnvelope::validate() const {
    ValidationIssues issues;
    if (t_us.size() != c.size() || t_us.size() < 2) {
        issues.push_back({"TabulatedEnvelope", "need >= 2 matching (t, c) knots"});
        return issues;
    }
    for (std::size_t i = 1; i < t_us.size(); ++i) {
        if (!(t_us[i] > t_us[i - 1])) {
            issues.push_back({"TabulatedEnvelope.t_us", "must be strictly increasing"});
            break;
        }
    }
    for (const double v : c) {
        if (!std::isfinite(v)) {
            issues.push_back({"TabulatedEnvelope.c", "must be finite"});
            break;
        }
    }
    return issues;
}

double TabulatedEnvelope::at(double t) const {
    if (t <= t_us.front()) return c.front();
    if (t >= t_us.back()) return c.back();
    const auto it = std::upper_bound(t_us.begin(), t_us.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - t_us.begin());
    const double w = (t - t_us[i - 1]) / (t_us[i] - t_us[i - 1]);
    return c[i - 1] + w * (c[i] - c[i - 1]);
}

ValidationIssues CorrelationConfig::validate() const {
    ValidationIssues issues = sensor.validate();
    if (!(std::isfinite(signal_freq_hz) && signal_freq_hz > 0.0)) {
        issues.push_back({"CorrelationConfig.signal_freq_hz", "must be finite and > 0"});
    }
    if (!(bath_decay_us > 0.0)) { // +inf allowed
        issues.push_back({"CorrelationConfig.bath_decay_us", "must be > 0 (inf allowed)"});
    }
    if (!(std::isfinite(amplitude) && amplitude >= 0.0 && amplitude <= 1.0)) {
        issues.push_back({"CorrelationConfig.amplitude", "must lie in [0, 1]"});
    }
    if (!(std::isfinite(noise_sigma) && noise_sigma >= 0.0)) {
        issues.push_back({"CorrelationConfig.noise_sigma", "must be finite and >= 0"});
    }
    if (bath_envelope) {
        auto env = bath_envelope->validate();
        issues.insert(issues.end(), env.begin(), env.end());
    }
    return issues;
}

double correlation_signal(const CorrelationConfig& cfg, double t_us) {
    require_valid(cfg.validate());
    if (!(t_us >= 0.0)) {
        throw ValidationError("correlation_signal.t_us", "must be >= 0");
    }
    const double phase = 2.0 * units::pi * cfg.signal_freq_hz * t_us * units::s_per_us;
    const double t1_decay = std::exp(-t_us / (cfg.sensor.t1_ms * units::us_per_ms));
    double c_bath = 1.0;
    if (cfg.bath_envelope) {
        c_bath = cfg.bath_envelope->at(t_us);
    } else if (std::isfinite(cfg.bath_decay_us)) {
        c_bath = std::exp(-t_us / cfg.bath_decay_us);
    }
    return cfg.amplitude * std::cos(phase) * t1_decay * c_bath;
}

TimeSeries synthesize_timeseries(const CorrelationConfig& cfg, const SamplingPlan& plan) {
    require_valid(cfg.validate());
    require_valid(plan.validate());
    std::vector<double> values(static_cast<std::size_t>(plan.n_samples));
    rng::Stream noise(cfg.seed, /*stream_id=*/0x1c0553u);
    for (int k = 0; k < plan.n_samples; ++k) {
        double v = correlation_signal(cfg, plan.sample_time_us(k));
        if (cfg.noise_sigma > 0.0) {
            v += cfg.noise_sigma * noise.next_normal();
        }
        values[static_cast<std::size_t>(k)] = v;
    }
    return make_uniform_series(plan.t0_us, plan.dt_us(), std::move(values));
}

} // namespace nvnmr
