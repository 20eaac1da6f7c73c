#include "nvnmr/spin_bath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "nvnmr/rng.hpp"

namespace nvnmr {

using units::pi;

ValidationIssues BathConfig::validate() const {
    ValidationIssues issues = sample.validate();
    if (!(std::isfinite(sensor_depth_nm) && sensor_depth_nm > 0.0)) {
        issues.push_back({"BathConfig.sensor_depth_nm", "must be finite and > 0"});
    }
    if (n_pairs < 1) {
        issues.push_back({"BathConfig.n_pairs", "must be >= 1"});
    }
    if (!(std::isfinite(dt_us) && dt_us > 0.0)) {
        issues.push_back({"BathConfig.dt_us", "must be finite and > 0"});
    }
    if (!(std::isfinite(t_max_us) && t_max_us >= dt_us)) {
        issues.push_back({"BathConfig.t_max_us", "must be >= dt_us"});
    }
    if (!(std::isfinite(box_nm) && box_nm >= 4.0 * sensor_depth_nm)) {
        issues.push_back({"BathConfig.box_nm", "must be >= 4 * sensor_depth_nm"});
    }
    if (n_threads < 0) {
        issues.push_back({"BathConfig.n_threads", "must be >= 0"});
    }
    return issues;
}

ValidationIssues FieldTrace::validate() const {
    ValidationIssues issues;
    if (!(std::isfinite(dt_us) && dt_us > 0.0)) {
        issues.push_back({"FieldTrace.dt_us", "must be finite and > 0"});
    }
    if (values.size() < 2) {
        issues.push_back({"FieldTrace.values", "need at least 2 samples"});
    }
    for (const double v : values) {
        if (!std::isfinite(v)) {
            issues.push_back({"FieldTrace.values", "must be finite"});
            break;
        }
    }
    return issues;
}

double dipole_kernel(double x, double y, double z) {
    const double r2 = x * x + y * y + z * z;
    const double inv_r2 = 1.0 / r2;
    return (3.0 * z * z * inv_r2 - 1.0) * inv_r2 / std::sqrt(r2);
}

namespace {

struct BoxGeometry {
    double lateral; // x,y in [-lateral, lateral]
    double z_lo;    // surface plane
    double z_hi;    // reflecting top
};

BoxGeometry geometry(const BathConfig& cfg) {
    return {cfg.box_nm, cfg.sensor_depth_nm, cfg.sensor_depth_nm + cfg.box_nm};
}

// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration on
// Legendre polynomials.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(pi * (i + 0.75) / (n + 0.5));
        double p0 = 0.0, p1 = 0.0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
            }
            const double dp = n * (t * p0 - p1) / (t * t - 1.0);
            const double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        p1 = 0.0;
        p0 = 1.0;
        for (int k = 0; k < n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
        }
        const double dp = n * (t * p0 - p1) / (t * t - 1.0);
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

struct KernelMoments {
    double mean;        // <g> over the box
    double mean_square; // <g^2> over the box
};

// <g> and <g^2> over the box by tensor-product Gauss-Legendre quadrature.
KernelMoments box_kernel_moments(const BoxGeometry& geo) {
    static constexpr int n = 80;
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    const double half_z = 0.5 * (geo.z_hi - geo.z_lo);
    const double mid_z = 0.5 * (geo.z_hi + geo.z_lo);
    double sum_g = 0.0;
    double sum_g2 = 0.0;
    // kernel is even in x and y: fold to one quadrant
    for (int i = 0; i < n; ++i) {
        const double xi = geo.lateral * x[i];
        for (int j = 0; j < n; ++j) {
            const double yj = geo.lateral * x[j];
            double gz = 0.0, gz2 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double zk = mid_z + half_z * x[k];
                const double g = dipole_kernel(xi, yj, zk);
                gz += w[k] * g;
                gz2 += w[k] * g * g;
            }
            sum_g += w[i] * w[j] * gz;
            sum_g2 += w[i] * w[j] * gz2;
        }
    }
    // weights carry the [-1,1]->box scale; divide by the box volume in
    // the same scaled measure (2*2*2)
    const double norm = 1.0 / 8.0;
    return {sum_g * norm, sum_g2 * norm};
}

struct Particle {
    double x, y, z;
    double sign; // statistical polarization, +-1 (pair member signs oppose)
};

// stream ids: one per particle for the trajectory, one shared for placement
constexpr std::uint64_t placement_stream = 0xffffffffffff0001ULL;
constexpr std::uint64_t pair_sign_stream = 0xffffffffffff0002ULL;

std::vector<Particle> init_particles(const BathConfig& cfg) {
    const BoxGeometry geo = geometry(cfg);
    const std::size_t n_spins = 2 * static_cast<std::size_t>(cfg.n_pairs);
    std::vector<Particle> spins(n_spins);
    rng::Stream place(cfg.seed, placement_stream);
    rng::Stream sign(cfg.seed, pair_sign_stream);
    for (std::size_t p = 0; p < static_cast<std::size_t>(cfg.n_pairs); ++p) {
        const double s = sign.next_sign();
        for (int member = 0; member < 2; ++member) {
            Particle& sp = spins[2 * p + member];
            sp.x = place.next_uniform(-geo.lateral, geo.lateral);
            sp.y = place.next_uniform(-geo.lateral, geo.lateral);
            sp.z = place.next_uniform(geo.z_lo, geo.z_hi);
            sp.sign = member == 0 ? s : -s;
        }
    }
    return spins;
}

inline double reflect_into(double v, double lo, double hi) {
    // fold by repeated reflection; steps are small so one bounce is typical
    while (v < lo || v > hi) {
        if (v < lo) v = 2.0 * lo - v;
        if (v > hi) v = 2.0 * hi - v;
    }
    return v;
}

inline double wrap_into(double v, double half_width) {
    const double period = 2.0 * half_width;
    if (v >= half_width) v -= period;
    if (v < -half_width) v += period;
    // large excursions (several periods) are impossible for sane dt
    while (v >= half_width) v -= period;
    while (v < -half_width) v += period;
    return v;
}

// Advance one particle by `steps` diffusion steps, accumulating the signed
// kernel into out[0..steps-1] (field AFTER each step). The stream position
// is a pure function of the particle id and step index.
void advance_particle(Particle& sp, rng::Stream& stream, double sigma,
                      const BoxGeometry& geo, int steps, double* out) {
    for (int s = 0; s < steps; ++s) {
        sp.x = wrap_into(sp.x + sigma * stream.next_normal(), geo.lateral);
        sp.y = wrap_into(sp.y + sigma * stream.next_normal(), geo.lateral);
        sp.z = reflect_into(sp.z + sigma * stream.next_normal(), geo.z_lo, geo.z_hi);
        out[s] += sp.sign * dipole_kernel(sp.x, sp.y, sp.z);
    }
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

} // namespace

FieldTrace simulate_bath(const BathConfig& cfg) {
    require_valid(cfg.validate());
    const BoxGeometry geo = geometry(cfg);
    const int n_steps = static_cast<int>(std::floor(cfg.t_max_us / cfg.dt_us)) + 1;
    const std::size_t n_spins = 2 * static_cast<std::size_t>(cfg.n_pairs);

    // weight: match the analytic half-space B_rms^2 in expectation.
    // Var(sum over pairs of s*(g1 - g2)) = n_spins * (<g^2> - <g>^2) * w^2.
    const KernelMoments mom = box_kernel_moments(geo);
    const double d = cfg.sensor_depth_nm;
    const double target = units::halfspace_kernel_integral *
                          cfg.sample.density_per_nm3 / (d * d * d);
    const double w2 =
        target / (static_cast<double>(n_spins) * (mom.mean_square - mom.mean * mom.mean));
    const double pref =
        units::dipole_gauss_nm3_per_gamma(cfg.sample.nucleus.gamma_khz_per_gauss);
    const double scale = pref * std::sqrt(w2);

    std::vector<Particle> spins = init_particles(cfg);
    const double sigma = std::sqrt(2.0 * cfg.sample.diffusion_nm2_per_us * cfg.dt_us);

    // initial field (step 0)
    double f0 = 0.0;
    for (const Particle& sp : spins) {
        f0 += sp.sign * dipole_kernel(sp.x, sp.y, sp.z);
    }

    FieldTrace trace;
    trace.dt_us = cfg.dt_us;
    trace.values.assign(static_cast<std::size_t>(n_steps), 0.0);
    trace.values[0] = scale * f0;
    const int remaining = n_steps - 1;
    if (remaining == 0) return trace;

    // Fixed-block decomposition: particles are split into a fixed number of
    // blocks; each block accumulates its own partial trace over a time chunk
    // and the blocks are reduced in index order, so the sum is bitwise
    // independent of how blocks are scheduled onto threads.
    const int n_threads = resolve_threads(cfg.n_threads);
    const int n_blocks =
        static_cast<int>(std::min<std::size_t>(64, n_spins));
    const std::size_t block_size = (n_spins + n_blocks - 1) / n_blocks;
    constexpr int chunk_steps = 8192;

    std::vector<rng::Stream> streams;
    streams.reserve(n_spins);
    for (std::size_t i = 0; i < n_spins; ++i) {
        streams.emplace_back(cfg.seed, static_cast<std::uint64_t>(i));
    }

    std::vector<std::vector<double>> partial(
        static_cast<std::size_t>(n_blocks),
        std::vector<double>(static_cast<std::size_t>(chunk_steps), 0.0));

    for (int done = 0; done < remaining; done += chunk_steps) {
        const int steps = std::min(chunk_steps, remaining - done);
        auto run_block = [&](int b) {
            auto& buf = partial[static_cast<std::size_t>(b)];
            std::fill(buf.begin(), buf.begin() + steps, 0.0);
            const std::size_t lo = static_cast<std::size_t>(b) * block_size;
            const std::size_t hi = std::min(n_spins, lo + block_size);
            for (std::size_t i = lo; i < hi; ++i) {
                advance_particle(spins[i], streams[i], sigma, geo, steps, buf.data());
            }
        };
        if (n_threads <= 1) {
            for (int b = 0; b < n_blocks; ++b) run_block(b);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(n_threads));
            for (int t = 0; t < n_threads; ++t) {
                pool.emplace_back([&, t] {
                    for (int b = t; b < n_blocks; b += n_threads) run_block(b);
                });
            }
            for (auto& th : pool) th.join();
        }
        // deterministic reduction in block order
        for (int s = 0; s < steps; ++s) {
            double acc = 0.0;
            for (int b = 0; b < n_blocks; ++b) {
                acc += partial[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)];
            }
            trace.values[static_cast<std::size_t>(1 + done + s)] = scale * acc;
        }
    }
    return trace;
}

std::vector<std::array<double, 3>> bath_positions_after(const BathConfig& cfg, int steps) {
    require_valid(cfg.validate());
    const BoxGeometry geo = geometry(cfg);
    std::vector<Particle> spins = init_particles(cfg);
    const double sigma = std::sqrt(2.0 * cfg.sample.diffusion_nm2_per_us * cfg.dt_us);
    std::vector<double> sink(static_cast<std::size_t>(std::max(steps, 1)), 0.0);
    for (std::size_t i = 0; i < spins.size(); ++i) {
        rng::Stream stream(cfg.seed, static_cast<std::uint64_t>(i));
        advance_particle(spins[i], stream, sigma, geo, steps, sink.data());
    }
    std::vector<std::array<double, 3>> out(spins.size());
    for (std::size_t i = 0; i < spins.size(); ++i) {
        out[i] = {spins[i].x, spins[i].y, spins[i].z};
    }
    return out;
}

TimeSeries autocorrelation(const FieldTrace& trace, int max_lag) {
    require_valid(trace.validate());
    const std::size_t n = trace.values.size();
    const std::size_t lags =
        max_lag < 0 ? n / 2 : std::min<std::size_t>(static_cast<std::size_t>(max_lag), n - 1);

    // FFT-based raw autocorrelation (no mean removal: the ensemble mean of a
    // statistically polarized bath is zero by construction)
    std::size_t npad = 1;
    while (npad < 2 * n) npad <<= 1;
    std::vector<std::complex<double>> buf(npad, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) buf[i] = trace.values[i];
    fft_inplace(buf);
    for (auto& c : buf) c = std::norm(c);
    ifft_inplace(buf);

    const double c0 = buf[0].real() / static_cast<double>(n);
    if (!(c0 > 0.0)) {
        throw DegenerateInputError("autocorrelation: trace has zero power");
    }
    TimeSeries acf;
    acf.t_us.resize(lags + 1);
    acf.values.resize(lags + 1);
    for (std::size_t k = 0; k <= lags; ++k) {
        const double ck = buf[k].real() / static_cast<double>(n - k); // unbiased
        acf.t_us[k] = static_cast<double>(k) * trace.dt_us;
        acf.values[k] = ck / c0;
    }
    return acf;
}

double one_over_e_time_us(const TimeSeries& acf) {
    const double th = 1.0 / std::numbers::e_v<double>;
    for (std::size_t i = 1; i < acf.values.size(); ++i) {
        if (acf.values[i] <= th) {
            const double c0 = acf.values[i - 1];
            const double c1 = acf.values[i];
            const double frac = (c0 - th) / (c0 - c1);
            return acf.t_us[i - 1] + frac * (acf.t_us[i] - acf.t_us[i - 1]);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double msd_decay_time_us(double diffusion_nm2_per_us, double length_nm) {
    if (!(std::isfinite(diffusion_nm2_per_us) && diffusion_nm2_per_us >= 0.0)) {
        throw ValidationError("msd_decay_time.D", "must be finite and >= 0");
    }
    if (!(std::isfinite(length_nm) && length_nm > 0.0)) {
        throw ValidationError("msd_decay_time.L", "must be finite and > 0");
    }
    if (diffusion_nm2_per_us == 0.0) {
        // static bath never decorrelates; documented non-finite signal
        return std::numeric_limits<double>::infinity();
    }
    return length_nm * length_nm / (2.0 * diffusion_nm2_per_us);
}

} // namespace nvnmr
