#include "nvnmr/chemshift.hpp"

#include <algorithm>
#include <cmath>

namespace nvnmr {

using units::pi;

ValidationIssues MoleculeSpec::validate() const {
    ValidationIssues issues = nucleus.validate();
    if (lines.empty()) {
        issues.push_back({"MoleculeSpec.lines", "need at least one line"});
    }
    for (const auto& line : lines) {
        if (!std::isfinite(line.shift_ppm)) {
            issues.push_back({"MoleculeSpec.lines.shift_ppm", "must be finite"});
            break;
        }
        if (!(std::isfinite(line.weight) && line.weight > 0.0)) {
            issues.push_back({"MoleculeSpec.lines.weight", "must be finite and > 0"});
            break;
        }
    }
    return issues;
}

MoleculeSpec acetic_acid_1h() {
    return {"acetic acid", proton(), {{2.10, 3.0}, {11.4, 1.0}}};
}

MoleculeSpec acetic_acid_13c() {
    return {"acetic acid", carbon13(), {{20.8, 1.0}, {178.1, 1.0}}};
}

MoleculeSpec methyl_formate_1h() {
    return {"methyl formate", proton(), {{3.77, 3.0}, {8.08, 1.0}}};
}

MoleculeSpec methyl_formate_13c() {
    return {"methyl formate", carbon13(), {{50.5, 1.0}, {161.8, 1.0}}};
}

std::vector<MoleculeSpec> builtin_molecules() {
    return {acetic_acid_1h(), acetic_acid_13c(), methyl_formate_1h(),
            methyl_formate_13c()};
}

std::vector<std::pair<double, double>> line_frequencies(const MoleculeSpec& mol,
                                                        const FieldConfig& field) {
    require_valid(mol.validate());
    if (!(field.b_gauss > 0.0)) {
        throw ValidationError("line_frequencies.field", "must be > 0");
    }
    const double f_ref = larmor_frequency_hz(mol.nucleus, field);
    std::vector<std::pair<double, double>> out;
    out.reserve(mol.lines.size());
    for (const auto& line : mol.lines) {
        out.emplace_back(f_ref * (1.0 + line.shift_ppm * 1e-6), line.weight);
    }
    return out;
}

namespace {

// Area of a unit-area lineshape restricted to [lo, hi]; used to correct the
// per-line normalization for grid truncation (Lorentzian tails especially).
double inwindow_area(LineShape shape, double f0, double fwhm, double lo, double hi) {
    if (shape == LineShape::lorentzian) {
        const double hw = 0.5 * fwhm;
        return (std::atan((hi - f0) / hw) - std::atan((lo - f0) / hw)) / pi;
    }
    const double s = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const double inv = 1.0 / (s * std::sqrt(2.0));
    return 0.5 * (std::erf((hi - f0) * inv) - std::erf((lo - f0) * inv));
}

double unit_area_shape(LineShape shape, double f0, double fwhm, double f) {
    if (shape == LineShape::lorentzian) {
        const double hw = 0.5 * fwhm;
        const double x = f - f0;
        return hw / (pi * (x * x + hw * hw));
    }
    const double s = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const double x = (f - f0) / s;
    return std::exp(-0.5 * x * x) / (s * std::sqrt(2.0 * pi));
}

Spectrum synth_on_grid(const std::vector<std::pair<double, double>>& lines,
                       LineShape shape, double fwhm, double lo, double hi,
                       int n_points) {
    Spectrum spec;
    spec.f_hz.resize(static_cast<std::size_t>(n_points));
    spec.power.assign(static_cast<std::size_t>(n_points), 0.0);
    const double df = (hi - lo) / (n_points - 1);
    for (int i = 0; i < n_points; ++i) {
        spec.f_hz[static_cast<std::size_t>(i)] = lo + i * df;
    }
    for (const auto& [f0, weight] : lines) {
        const double area = inwindow_area(shape, f0, fwhm, lo, hi);
        const double scale = weight / area;
        for (int i = 0; i < n_points; ++i) {
            spec.power[static_cast<std::size_t>(i)] +=
                scale * unit_area_shape(shape, f0, fwhm, spec.f_hz[static_cast<std::size_t>(i)]);
        }
    }
    return spec;
}

} // namespace

Spectrum synth_spectrum(const MoleculeSpec& mol, const FieldConfig& field,
                        double resolution_fwhm_hz, LineShape shape, int n_points) {
    if (!(std::isfinite(resolution_fwhm_hz) && resolution_fwhm_hz > 0.0)) {
        throw ValidationError("synth_spectrum.resolution_fwhm_hz",
                              "must be finite and > 0");
    }
    if (n_points < 16) {
        throw ValidationError("synth_spectrum.n_points", "must be >= 16");
    }
    const auto lines = line_frequencies(mol, field);
    double f_min = lines.front().first;
    double f_max = lines.front().first;
    for (const auto& [f, w] : lines) {
        f_min = std::min(f_min, f);
        f_max = std::max(f_max, f);
    }
    const double margin = 8.0 * resolution_fwhm_hz;
    const double lo = std::max(0.0, f_min - margin);
    const double hi = f_max + margin;
    return synth_on_grid(lines, shape, resolution_fwhm_hz, lo, hi, n_points);
}

std::vector<PairResolvability> resolvable(const MoleculeSpec& mol,
                                          const FieldConfig& field,
                                          double resolution_fwhm_hz, LineShape shape) {
    if (!(std::isfinite(resolution_fwhm_hz) && resolution_fwhm_hz > 0.0)) {
        throw ValidationError("resolvable.resolution_fwhm_hz", "must be finite and > 0");
    }
    const auto lines = line_frequencies(mol, field);
    std::vector<PairResolvability> out;
    for (std::size_t a = 0; a < lines.size(); ++a) {
        for (std::size_t b = a + 1; b < lines.size(); ++b) {
            PairResolvability pr{a, b, false};
            const double sep = std::abs(lines[a].first - lines[b].first);
            if (sep > 0.0) {
                // two-line spectrum on a grid fine enough for both the dip
                // and the individual peaks
                const double span = sep + 8.0 * resolution_fwhm_hz;
                const int n = 4097;
                const double lo = std::min(lines[a].first, lines[b].first) -
                                  4.0 * resolution_fwhm_hz;
                Spectrum two = synth_on_grid({lines[a], lines[b]}, shape,
                                             resolution_fwhm_hz, lo, lo + span, n);
                // local maxima
                std::vector<std::size_t> maxima;
                for (std::size_t i = 1; i + 1 < two.power.size(); ++i) {
                    if (two.power[i] > two.power[i - 1] &&
                        two.power[i] >= two.power[i + 1]) {
                        maxima.push_back(i);
                    }
                }
                if (maxima.size() >= 2) {
                    // the two tallest maxima and the valley between them
                    std::sort(maxima.begin(), maxima.end(),
                              [&](std::size_t l, std::size_t r) {
                                  return two.power[l] > two.power[r];
                              });
                    std::size_t m0 = maxima[0];
                    std::size_t m1 = maxima[1];
                    if (m0 > m1) std::swap(m0, m1);
                    double valley = two.power[m0];
                    for (std::size_t i = m0; i <= m1; ++i) {
                        valley = std::min(valley, two.power[i]);
                    }
                    const double lower_peak = std::min(two.power[m0], two.power[m1]);
                    pr.resolved = valley <= 0.9 * lower_peak;
                }
            }
            out.push_back(pr);
        }
    }
    return out;
}

bool fully_resolvable(const MoleculeSpec& mol, const FieldConfig& field,
                      double resolution_fwhm_hz, LineShape shape) {
    const auto pairs = resolvable(mol, field, resolution_fwhm_hz, shape);
    return std::all_of(pairs.begin(), pairs.end(),
                       [](const PairResolvability& p) { return p.resolved; });
}

} // namespace nvnmr
