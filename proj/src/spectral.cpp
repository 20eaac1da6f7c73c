#include "nvnmr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nvnmr {

using units::pi;

ValidationIssues TimeSeries::validate() const {
    ValidationIssues issues;
    if (values.size() < 4) {
        issues.push_back({"TimeSeries.values", "need at least 4 samples"});
    }
    if (t_us.size() != values.size()) {
        issues.push_back({"TimeSeries.t_us", "length mismatch with values"});
        return issues;
    }
    if (t_us.size() > 1) {
        const double dt = t_us[1] - t_us[0];
        if (!(dt > 0.0)) {
            issues.push_back({"TimeSeries.t_us", "must be strictly increasing"});
            return issues;
        }
        for (std::size_t i = 1; i + 1 < t_us.size(); ++i) {
            const double step = t_us[i + 1] - t_us[i];
            if (std::abs(step - dt) > 1e-9 * std::abs(dt)) {
                issues.push_back({"TimeSeries.t_us", "grid not uniform (1e-9 rel)"});
                break;
            }
        }
    }
    for (const double v : values) {
        if (!std::isfinite(v)) {
            issues.push_back({"TimeSeries.values", "must be finite"});
            break;
        }
    }
    return issues;
}

ValidationIssues Spectrum::validate() const {
    ValidationIssues issues;
    for (std::size_t i = 1; i < f_hz.size(); ++i) {
        if (!(f_hz[i] > f_hz[i - 1])) {
            issues.push_back({"Spectrum.f_hz", "grid must ascend"});
            break;
        }
    }
    for (const double p : power) {
        if (!(std::isfinite(p) && p >= 0.0)) {
            issues.push_back({"Spectrum.power", "must be finite and >= 0"});
            break;
        }
    }
    if (f_hz.size() != power.size()) {
        issues.push_back({"Spectrum.power", "length mismatch with f_hz"});
    }
    return issues;
}

TimeSeries make_uniform_series(double t0_us, double dt_us, std::vector<double> values) {
    TimeSeries ts;
    ts.t_us.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        ts.t_us[i] = t0_us + static_cast<double>(i) * dt_us;
    }
    ts.values = std::move(values);
    return ts;
}

void fft_inplace(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw ValidationError("fft.size", "length must be a power of two");
    }
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

void ifft_inplace(std::vector<std::complex<double>>& a) {
    for (auto& x : a) x = std::conj(x);
    fft_inplace(a);
    const double inv = 1.0 / static_cast<double>(a.size());
    for (auto& x : a) x = std::conj(x) * inv;
}

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

Spectrum periodogram(const TimeSeries& ts, int zero_pad_factor) {
    require_valid(ts.validate());
    if (zero_pad_factor < 1) {
        throw ValidationError("periodogram.zero_pad_factor", "must be >= 1");
    }
    const std::size_t n = ts.size();
    const double mean =
        std::accumulate(ts.values.begin(), ts.values.end(), 0.0) / static_cast<double>(n);
    const std::size_t npad =
        next_pow2(n * static_cast<std::size_t>(zero_pad_factor));
    std::vector<std::complex<double>> buf(npad, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        buf[i] = ts.values[i] - mean;
    }
    fft_inplace(buf);
    Spectrum spec;
    const double df = ts.fs_hz() / static_cast<double>(npad);
    const std::size_t half = npad / 2;
    spec.f_hz.resize(half + 1);
    spec.power.resize(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
        spec.f_hz[k] = df * static_cast<double>(k);
        spec.power[k] = std::norm(buf[k]);
    }
    return spec;
}

namespace {

struct PeakWindow {
    std::size_t lo, hi, peak;
};

// Contiguous fit window around the dominant peak: bins with power >= 1% of
// the peak, extended to at least 5 bins per side.
PeakWindow locate_peak(const Spectrum& spec) {
    const auto& p = spec.power;
    const std::size_t n = p.size();
    std::size_t ipk = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (p[i] > p[ipk]) ipk = i;
    }
    std::vector<double> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[n / 2];
    if (!(p[ipk] > 0.0) || p[ipk] < 5.0 * median) {
        throw FitRejectedError("fit_line: no dominant peak (peak < 5x median power)");
    }
    const double floor = 0.01 * p[ipk];
    std::size_t lo = ipk, hi = ipk;
    while (lo > 0 && p[lo - 1] >= floor) --lo;
    while (hi + 1 < n && p[hi + 1] >= floor) ++hi;
    while (ipk - lo < 5 && lo > 0) --lo;
    while (hi - ipk < 5 && hi + 1 < n) ++hi;
    return {lo, hi, ipk};
}

// params: [f0, fwhm, amplitude(peak power)]
double shape_value(LineShape shape, const double* q, double f) {
    const double hw = 0.5 * q[1];
    const double x = f - q[0];
    if (shape == LineShape::lorentzian) {
        return q[2] * hw * hw / (x * x + hw * hw);
    }
    return q[2] * std::exp(-4.0 * std::log(2.0) * x * x / (q[1] * q[1]));
}

void shape_jacobian(LineShape shape, const double* q, double f, double* row) {
    const double hw = 0.5 * q[1];
    const double x = f - q[0];
    if (shape == LineShape::lorentzian) {
        const double den = x * x + hw * hw;
        row[0] = q[2] * hw * hw * 2.0 * x / (den * den);
        row[1] = q[2] * hw * x * x / (den * den); // d/dw of w^2/4/(x^2+w^2/4)
        row[2] = hw * hw / den;
    } else {
        const double c = 4.0 * std::log(2.0);
        const double e = std::exp(-c * x * x / (q[1] * q[1]));
        row[0] = q[2] * e * 2.0 * c * x / (q[1] * q[1]);
        row[1] = q[2] * e * 2.0 * c * x * x / (q[1] * q[1] * q[1]);
        row[2] = e;
    }
}

// 3x3 solve, Cholesky-free Gaussian elimination with partial pivoting.
bool solve3(double a[3][3], double b[3], double x[3]) {
    int idx[3] = {0, 1, 2};
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r) {
            if (std::abs(a[idx[r]][c]) > std::abs(a[idx[piv]][c])) piv = r;
        }
        std::swap(idx[c], idx[piv]);
        if (std::abs(a[idx[c]][c]) < 1e-300) return false;
        for (int r = c + 1; r < 3; ++r) {
            const double m = a[idx[r]][c] / a[idx[c]][c];
            for (int k = c; k < 3; ++k) a[idx[r]][k] -= m * a[idx[c]][k];
            b[idx[r]] -= m * b[idx[c]];
        }
    }
    for (int c = 2; c >= 0; --c) {
        double s = b[idx[c]];
        for (int k = c + 1; k < 3; ++k) s -= a[idx[c]][k] * x[k];
        x[c] = s / a[idx[c]][c];
    }
    return true;
}

} // namespace

LineFit fit_line(const Spectrum& spec, LineShape shape) {
    require_valid(spec.validate());
    if (spec.size() < 8) {
        throw ValidationError("fit_line.spectrum", "too few bins");
    }
    const PeakWindow win = locate_peak(spec);
    const auto& p = spec.power;
    const auto& f = spec.f_hz;

    // seeds from the peak and its half-power crossings
    double q[3];
    q[0] = f[win.peak];
    q[2] = p[win.peak];
    {
        const double half = 0.5 * p[win.peak];
        std::size_t l = win.peak, r = win.peak;
        while (l > win.lo && p[l] > half) --l;
        while (r < win.hi && p[r] > half) ++r;
        q[1] = std::max(f[r] - f[l], spec.df_hz());
    }

    const std::size_t m = win.hi - win.lo + 1;
    std::vector<double> resid(m);
    auto eval_chi2 = [&](const double* qq) {
        double chi2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double r = p[win.lo + i] - shape_value(shape, qq, f[win.lo + i]);
            resid[i] = r;
            chi2 += r * r;
        }
        return chi2;
    };

    double chi2 = eval_chi2(q);
    double lambda = 1e-3;
    const int max_iter = 500;
    bool converged = false;
    for (int it = 0; it < max_iter && !converged; ++it) {
        chi2 = eval_chi2(q); // refresh resid (a rejected trial overwrites it)
        double jtj[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        double jtr[3] = {0, 0, 0};
        double row[3];
        for (std::size_t i = 0; i < m; ++i) {
            shape_jacobian(shape, q, f[win.lo + i], row);
            for (int a = 0; a < 3; ++a) {
                jtr[a] += row[a] * resid[i];
                for (int b = 0; b < 3; ++b) jtj[a][b] += row[a] * row[b];
            }
        }
        bool accepted = false;
        for (int damp = 0; damp < 60 && !accepted; ++damp) {
            double a[3][3];
            double b[3];
            double step[3];
            for (int r = 0; r < 3; ++r) {
                for (int c = 0; c < 3; ++c) a[r][c] = jtj[r][c];
                a[r][r] *= 1.0 + lambda;
                b[r] = jtr[r];
            }
            if (!solve3(a, b, step)) {
                lambda *= 10.0;
                continue;
            }
            double qn[3] = {q[0] + step[0], q[1] + step[1], q[2] + step[2]};
            qn[1] = std::max(qn[1], 1e-12 * std::max(1.0, std::abs(q[1])));
            const double chi2n = eval_chi2(qn);
            if (chi2n <= chi2) {
                const double rel =
                    std::max({std::abs(step[0]) / std::max(1e-300, std::abs(qn[0])),
                              std::abs(step[1]) / std::max(1e-300, std::abs(qn[1])),
                              std::abs(step[2]) / std::max(1e-300, std::abs(qn[2]))});
                q[0] = qn[0];
                q[1] = qn[1];
                q[2] = qn[2];
                chi2 = chi2n;
                lambda = std::max(lambda * 0.3, 1e-12);
                accepted = true;
                if (rel < 1e-10) converged = true;
            } else {
                lambda *= 10.0;
            }
        }
        if (!accepted) {
            converged = true; // no downhill step even fully damped: at a minimum
        }
    }
    if (!converged) {
        throw ConvergenceError("fit_line: no convergence after bounded iterations",
                               {q[0], q[1], q[2]});
    }
    chi2 = eval_chi2(q);
    LineFit fit;
    fit.f0_hz = q[0];
    fit.fwhm_hz = std::abs(q[1]);
    fit.amplitude = q[2];
    fit.residual_norm = std::sqrt(chi2 / static_cast<double>(m));
    fit.shape = shape;
    return fit;
}

double fit_exp_envelope_ms(const TimeSeries& ts) {
    require_valid(ts.validate());
    const std::size_t n = ts.size();

    // count envelope extrema = local maxima of |x|
    int extrema = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double a = std::abs(ts.values[i]);
        if (a >= std::abs(ts.values[i - 1]) && a > std::abs(ts.values[i + 1])) {
            ++extrema;
        }
    }
    if (extrema < 10) {
        throw FitRejectedError("fit_exp_envelope: fewer than 10 envelope extrema");
    }

    // analytic signal: zero negative frequencies, double positive ones
    const std::size_t npad = [&] {
        std::size_t p = 1;
        while (p < n) p <<= 1;
        return p;
    }();
    std::vector<std::complex<double>> buf(npad, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) buf[i] = ts.values[i];
    fft_inplace(buf);
    for (std::size_t k = 1; k < npad / 2; ++k) buf[k] *= 2.0;
    for (std::size_t k = npad / 2 + 1; k < npad; ++k) buf[k] = 0.0;
    ifft_inplace(buf);

    // trim edges (Hilbert transients) and fit log-envelope linearly,
    // ignoring points below 1e-4 of the envelope maximum
    const std::size_t trim = std::max<std::size_t>(2, n / 20);
    double env_max = 0.0;
    for (std::size_t i = trim; i + trim < n; ++i) {
        env_max = std::max(env_max, std::abs(buf[i]));
    }
    if (!(env_max > 0.0)) {
        throw FitRejectedError("fit_exp_envelope: zero envelope");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t cnt = 0;
    for (std::size_t i = trim; i + trim < n; ++i) {
        const double env = std::abs(buf[i]);
        if (env < 1e-4 * env_max) continue;
        const double x = ts.t_us[i];
        const double y = std::log(env);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt < 8) {
        throw FitRejectedError("fit_exp_envelope: too few usable envelope points");
    }
    const double denom = cnt * sxx - sx * sx;
    const double slope = (cnt * sxy - sx * sy) / denom; // 1/us
    const double duration_us = ts.t_us.back() - ts.t_us.front();
    if (!(slope < 0.0) || (-1.0 / slope) > 100.0 * duration_us) {
        throw FitRejectedError("fit_exp_envelope: envelope not decaying");
    }
    return (-1.0 / slope) * units::ms_per_us;
}

} // namespace nvnmr
