#include "nvnmr/pulse_filter.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace nvnmr {

using units::pi;

double PulseSequence::resonance_hz() const {
    return 1.0 / (2.0 * tau_us * units::s_per_us);
}

ValidationIssues PulseSequence::validate() const {
    ValidationIssues issues;
    if (repeats < 1) {
        issues.push_back({"PulseSequence.repeats", "must be >= 1"});
    }
    if (!(std::isfinite(tau_us) && tau_us > 0.0)) {
        issues.push_back({"PulseSequence.tau_us", "must be finite and > 0"});
    }
    return issues;
}

PulseSequence sequence_for_frequency(int repeats, double f_hz) {
    if (!(f_hz > 0.0)) {
        throw ValidationError("PulseSequence.tau_us", "target frequency must be > 0");
    }
    return PulseSequence{repeats, 1.0 / (2.0 * f_hz) * units::us_per_s};
}

namespace {

// Segment boundaries (us) of the toggling function; sign alternates
// starting at +1 on [0, tau/2).
std::vector<double> toggling_boundaries(const PulseSequence& seq) {
    std::vector<double> b;
    b.reserve(seq.pulse_count() + 2);
    b.push_back(0.0);
    double t = 0.5 * seq.tau_us;
    for (int k = 0; k < seq.pulse_count(); ++k) {
        b.push_back(t);
        t += seq.tau_us;
    }
    b.push_back(seq.duration_us());
    return b;
}

// (1/T) * int y(t) exp(-t/T2) exp(-i 2 pi f t) dt, exact per segment.
// T2 <= 0 means no window.
std::complex<double> toggling_transform(const PulseSequence& seq, double f_hz,
                                        double t2_us) {
    const double f_per_us = f_hz * units::s_per_us; // cycles per us
    const std::complex<double> s(t2_us > 0.0 ? 1.0 / t2_us : 0.0,
                                 2.0 * pi * f_per_us);
    const auto b = toggling_boundaries(seq);
    std::complex<double> acc(0.0, 0.0);
    double sign = 1.0;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        std::complex<double> seg;
        if (std::abs(s) < 1e-30) {
            seg = b[i + 1] - b[i];
        } else {
            seg = (std::exp(-s * b[i]) - std::exp(-s * b[i + 1])) / s;
        }
        acc += sign * seg;
        sign = -sign;
    }
    return acc / seq.duration_us();
}

double peak_power(const PulseSequence& seq, double f_hz, double t2_us) {
    return std::norm(toggling_transform(seq, f_hz, t2_us));
}

// FWHM of the |W|^2 peak near 1/(2 tau): dense scan, then linear
// interpolation of the first half-maximum crossing on each side of the peak.
double scan_fwhm_hz(const PulseSequence& seq, double t2_us) {
    const double f0 = seq.resonance_hz();
    const double span = std::min(10.0 / (seq.duration_us() * units::s_per_us), 0.5 * f0);
    const int n = 40001;
    const double df = 2.0 * span / (n - 1);
    std::vector<double> p(n);
    int ipk = 0;
    for (int i = 0; i < n; ++i) {
        p[i] = peak_power(seq, f0 - span + i * df, t2_us);
        if (p[i] > p[ipk]) ipk = i;
    }
    const double half = 0.5 * p[ipk];
    int il = ipk;
    while (il > 0 && p[il] > half) --il;
    int ir = ipk;
    while (ir < n - 1 && p[ir] > half) ++ir;
    const double fl = (f0 - span) + df * (il + (half - p[il]) / (p[il + 1] - p[il]));
    const double fr = (f0 - span) + df * (ir - (half - p[ir]) / (p[ir - 1] - p[ir]));
    return fr - fl;
}

} // namespace

double filter_function(const PulseSequence& seq, double f_hz) {
    require_valid(seq.validate());
    if (!(f_hz >= 0.0)) {
        throw ValidationError("filter_function.f_hz", "must be >= 0");
    }
    return peak_power(seq, f_hz, 0.0);
}

double windowed_filter_function(const PulseSequence& seq, double f_hz, double t2_us) {
    require_valid(seq.validate());
    return peak_power(seq, f_hz, t2_us);
}

double filter_fwhm_hz(const PulseSequence& seq) {
    require_valid(seq.validate());
    return scan_fwhm_hz(seq, 0.0);
}

double effective_linewidth_hz(const PulseSequence& seq, const NvSensor& sensor) {
    require_valid(seq.validate());
    require_valid(sensor.validate());
    return scan_fwhm_hz(seq, sensor.t2_us);
}

double brms_at_depth_gauss(const SampleModel& sample, double depth_nm) {
    require_valid(sample.validate());
    if (!(std::isfinite(depth_nm) && depth_nm > 0.0)) {
        throw ValidationError("brms_at_depth.depth_nm", "must be finite and > 0");
    }
    const double pref =
        units::dipole_gauss_nm3_per_gamma(sample.nucleus.gamma_khz_per_gauss);
    const double b2 = pref * pref * units::halfspace_kernel_integral *
                      sample.density_per_nm3 / (depth_nm * depth_nm * depth_nm);
    return std::sqrt(b2);
}

double depth_from_brms_nm(const SampleModel& sample, double brms_gauss) {
    require_valid(sample.validate());
    if (!(std::isfinite(brms_gauss) && brms_gauss > 0.0)) {
        throw ValidationError("depth_from_brms.brms", "must be finite and > 0");
    }
    const double pref =
        units::dipole_gauss_nm3_per_gamma(sample.nucleus.gamma_khz_per_gauss);
    const double k = pref * pref * units::halfspace_kernel_integral *
                     sample.density_per_nm3;
    return std::cbrt(k / (brms_gauss * brms_gauss));
}

} // namespace nvnmr
