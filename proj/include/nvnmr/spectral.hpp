#pragma once

#include <complex>
#include <vector>

#include "nvnmr/core.hpp"

namespace nvnmr {

/// Uniformly sampled real series; t_us strictly increasing, spacing uniform
/// to 1e-9 relative.
struct TimeSeries {
    std::vector<double> t_us;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double dt_us() const { return t_us.size() > 1 ? t_us[1] - t_us[0] : 0.0; }
    double fs_hz() const { return units::us_per_s / dt_us(); }

    ValidationIssues validate() const;
};

/// One-sided power spectrum on an ascending frequency grid.
struct Spectrum {
    std::vector<double> f_hz;
    std::vector<double> power;

    std::size_t size() const { return power.size(); }
    double df_hz() const { return f_hz.size() > 1 ? f_hz[1] - f_hz[0] : 0.0; }

    ValidationIssues validate() const;
};

enum class LineShape { lorentzian, gaussian };

/// Fitted spectral line.
struct LineFit {
    double f0_hz = 0.0;
    double fwhm_hz = 0.0;
    double amplitude = 0.0;     // peak power
    double residual_norm = 0.0; // rms residual over the fit window
    LineShape shape = LineShape::lorentzian;
};

/// In-place radix-2 FFT (forward, e^{-i2pi kn/N}); n must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& data);
void ifft_inplace(std::vector<std::complex<double>>& data);

/// Magnitude-squared DFT of the mean-removed series, rectangular window,
/// zero-padded to the next power of two >= zero_pad_factor * n. Returns the
/// one-sided grid [0, fs/2]; power values are raw |X_k|^2 so Parseval reads
///   sum x~^2 = (|X_0|^2 + |X_{N/2}|^2 + 2 sum_mid |X_k|^2) / N_pad.
Spectrum periodogram(const TimeSeries& ts, int zero_pad_factor = 4);

/// Nonlinear least squares of a single lineshape around the dominant peak
/// (Levenberg-Marquardt, analytic Jacobian, tol 1e-10, max 500 iterations).
/// Requires peak power >= 5x median power, else FitRejectedError.
LineFit fit_line(const Spectrum& spec, LineShape shape = LineShape::lorentzian);

/// Decay time (ms) of the envelope of an oscillatory series: analytic-signal
/// magnitude via FFT, edge-trimmed, then a linear fit of log|envelope|.
/// Rejects series with fewer than 10 envelope extrema or a non-decaying fit.
double fit_exp_envelope_ms(const TimeSeries& ts);

/// Uniform grid helper: n samples spaced dt_us starting at t0_us.
TimeSeries make_uniform_series(double t0_us, double dt_us, std::vector<double> values);

} // namespace nvnmr
