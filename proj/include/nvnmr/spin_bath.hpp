#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nvnmr/core.hpp"
#include "nvnmr/spectral.hpp"

namespace nvnmr {

/// Monte Carlo bath of diffusing point dipoles above the diamond surface.
///
/// Geometry (sensor at the origin, axis = z = surface normal):
///   x, y in [-box_nm, box_nm]  (periodic wrap),
///   z    in [depth, depth + box_nm]  (reflecting at both planes;
///                                     z = depth is the diamond surface).
/// Spins are placed uniformly; each of the n_pairs pairs carries a random
/// +-1 polarization with opposite signs on its two members (zero-mean pair
/// state; intra-pair coupling itself is not modeled). A common statistical
/// weight, fixed by quadrature over the box, normalizes the trace variance
/// to the analytic half-space B_rms^2 in expectation, which also removes
/// box-truncation bias.
struct BathConfig {
    SampleModel sample;
    double sensor_depth_nm = 5.0;
    int n_pairs = 3000;    // paper-scale default
    double dt_us = 0.1;    // paper-scale default
    double t_max_us = 100.0;
    double box_nm = 20.0;  // half-width; must be >= 4 * sensor_depth_nm
    std::uint64_t seed = 0;
    int n_threads = 0;     // 0 = hardware concurrency; result is
                           // bitwise-independent of this value

    ValidationIssues validate() const;
};

/// Axis-projected dipolar field at the sensor, sampled every dt_us.
struct FieldTrace {
    double dt_us = 0.0;
    std::vector<double> values; // Gauss

    ValidationIssues validate() const;
};

/// Brownian propagation + per-step field sum. Deterministic per seed
/// (counter-based per-particle streams), independent of n_threads.
FieldTrace simulate_bath(const BathConfig& cfg);

/// Normalized autocorrelation of the trace, C(0) = 1, lags 0..max_lag
/// (default: half the trace). The trace is treated as a zero-mean process
/// (statistical polarization has zero ensemble mean), so no sample mean is
/// removed; a trace with zero power is rejected as degenerate.
TimeSeries autocorrelation(const FieldTrace& trace, int max_lag = -1);

/// First 1/e crossing of an autocorrelation series, linearly interpolated;
/// NaN if the series never crosses.
double one_over_e_time_us(const TimeSeries& acf);

/// Pure-diffusion decay estimate L^2 / (2 D), us. D = 0 returns +inf.
double msd_decay_time_us(double diffusion_nm2_per_us, double length_nm);

/// Axial point-dipole kernel (3 z^2/r^2 - 1)/r^3 evaluated at (x,y,z) nm;
/// the field of one unit-weight spin is prefactor * sign * kernel.
double dipole_kernel(double x_nm, double y_nm, double z_nm);

/// Spin positions after `steps` propagation steps, on the exact code path
/// simulate_bath uses (placement, streams, boundaries). Lets tests measure
/// displacement statistics and boundary containment directly.
std::vector<std::array<double, 3>> bath_positions_after(const BathConfig& cfg, int steps);

} // namespace nvnmr
