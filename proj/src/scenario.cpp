#include "nvnmr/scenario.hpp"

#include <cmath>
#include <functional>

#include "nvnmr/pulse_filter.hpp"

namespace nvnmr {

using io::json;

std::string to_string(ScenarioId id) {
    switch (id) {
        case ScenarioId::fig2_generator: return "fig2-generator";
        case ScenarioId::fig3_chemshift: return "fig3-chemshift";
        case ScenarioId::fig4_proton: return "fig4-proton";
        case ScenarioId::custom: return "custom";
    }
    return "custom";
}

ScenarioId scenario_id_from_string(const std::string& s) {
    if (s == "fig2-generator") return ScenarioId::fig2_generator;
    if (s == "fig3-chemshift") return ScenarioId::fig3_chemshift;
    if (s == "fig4-proton") return ScenarioId::fig4_proton;
    if (s == "custom") return ScenarioId::custom;
    throw ValidationError("ScenarioConfig.scenario",
                          "unknown id '" + s +
                              "' (fig2-generator | fig3-chemshift | fig4-proton | custom)");
}

namespace {

json preset_blocks(ScenarioId id) {
    switch (id) {
        case ScenarioId::fig2_generator:
            // 1.7 MHz generator signal under the published narrow-band plan;
            // the rate comes out at the interval's upper edge, 16990 Hz.
            return json{
                {"correlation",
                 {{"sensor", {{"depth_nm", 5.0}, {"t1_ms", 1.7}, {"t2_us", 10.0}}},
                  {"signal_freq_hz", 1.7e6},
                  {"amplitude", 1.0},
                  {"noise_sigma", 0.0}}},
                {"plan",
                 {{"f_low_hz", 1.699e6},
                  {"f_high_hz", 1.704e6},
                  {"fold_index", 201},
                  {"n_samples", 512}}}};
        case ScenarioId::fig4_proton:
            // proton bath above a d = 5 nm sensor plus the published
            // wide-band plan (0.81 MHz rate)
            return json{
                {"bath",
                 {{"sample",
                   {{"nucleus", "1H"},
                    {"density_per_nm3", 50.0},
                    {"diffusion_nm2_per_us", 0.19},
                    {"intrinsic_linewidth_hz", 40.0}}},
                  {"sensor_depth_nm", 5.0},
                  {"n_pairs", 600},
                  {"dt_us", 0.1},
                  {"t_max_us", 20000.0},
                  {"box_nm", 20.0}}},
                {"correlation",
                 {{"sensor", {{"depth_nm", 5.0}, {"t1_ms", 2.1}, {"t2_us", 10.0}}},
                  {"signal_freq_hz", 1.7e6},
                  {"amplitude", 1.0},
                  {"noise_sigma", 0.0}}},
                {"plan",
                 {{"f_low_hz", 1.65e6},
                  {"f_high_hz", 1.75e6},
                  {"fold_index", 5},
                  {"fs_hz", 0.81e6},
                  {"n_samples", 2048}}}};
        case ScenarioId::fig3_chemshift:
            return json{
                {"chemshift",
                 {{"resolutions_hz", {470.0, 110000.0}},
                  {"cases",
                   {{{"molecule", "acetic acid"}, {"nucleus", "1H"}, {"b_gauss", 50000.0}},
                    {{"molecule", "methyl formate"}, {"nucleus", "1H"}, {"b_gauss", 50000.0}},
                    {{"molecule", "acetic acid"}, {"nucleus", "13C"}, {"b_gauss", 50000.0}},
                    {{"molecule", "methyl formate"}, {"nucleus", "13C"}, {"b_gauss", 50000.0}},
                    {{"molecule", "acetic acid"}, {"nucleus", "13C"}, {"b_gauss", 10000.0}},
                    {{"molecule", "methyl formate"}, {"nucleus", "13C"}, {"b_gauss", 10000.0}}}}}}};
        case ScenarioId::custom: return json::object();
    }
    return json::object();
}

MoleculeSpec lookup_molecule(const json& case_j) {
    if (case_j.contains("lines")) {
        return io::molecule_from_json(case_j);
    }
    const std::string name = case_j.at("molecule").get<std::string>();
    const std::string nucleus = case_j.value("nucleus", "1H");
    for (const auto& mol : builtin_molecules()) {
        if (mol.name == name && mol.nucleus.name == nucleus) return mol;
    }
    throw ValidationError("chemshift.cases.molecule",
                          "unknown molecule/nucleus '" + name + "'/'" + nucleus + "'");
}

json quantity(double value, const std::string& unit, const std::string& source) {
    return json{{"value", value}, {"unit", unit}, {"source", source}};
}

// deferred file writes so nothing touches disk until all numbers exist
struct PendingFile {
    std::filesystem::path rel;
    std::function<void(const std::filesystem::path&)> write;
};

void add_timeseries(std::vector<PendingFile>& out, std::string rel, TimeSeries ts,
                    std::string value_column = "signal") {
    out.push_back({std::move(rel),
                   [ts = std::move(ts), col = std::move(value_column)](
                       const std::filesystem::path& p) {
                       io::write_timeseries_csv(p, ts, col);
                   }});
}

void add_spectrum(std::vector<PendingFile>& out, std::string rel, Spectrum spec) {
    out.push_back({std::move(rel), [spec = std::move(spec)](const std::filesystem::path& p) {
                       io::write_spectrum_csv(p, spec);
                   }});
}

void add_json(std::vector<PendingFile>& out, std::string rel, json j) {
    out.push_back({std::move(rel), [j = std::move(j)](const std::filesystem::path& p) {
                       io::write_json_file(p, j);
                   }});
}

void run_generator_pipeline(const ScenarioConfig& cfg, json& quantities,
                            std::vector<PendingFile>& files) {
    CorrelationConfig corr = io::correlation_config_from_json(cfg.blocks.at("correlation"));
    if (!cfg.blocks.at("correlation").contains("seed")) {
        corr.seed = cfg.seed;
    }
    const SamplingPlan plan = io::sampling_plan_from_json(cfg.blocks.at("plan"));

    const TimeSeries ts = synthesize_timeseries(corr, plan);
    const Spectrum spec = periodogram(ts, 8);
    const LineFit fit = fit_line(spec, LineShape::lorentzian);
    const double f_true = unalias_hz(fit.f0_hz, plan.fs_hz, plan.f_low_hz, plan.f_high_hz);
    const double t1_fit = fit_exp_envelope_ms(ts);
    const double lifetime_fwhm = 1.0 / (units::pi * corr.sensor.t1_ms * units::s_per_ms);

    quantities["folded_peak_hz"] = quantity(fit.f0_hz, "Hz", "spectral");
    quantities["fitted_fwhm_hz"] = quantity(fit.fwhm_hz, "Hz", "spectral");
    quantities["unaliased_frequency_hz"] = quantity(f_true, "Hz", "sampling");
    quantities["envelope_decay_ms"] = quantity(t1_fit, "ms", "spectral");
    quantities["lifetime_limited_fwhm_hz"] =
        quantity(lifetime_fwhm, "Hz", "correlation");
    quantities["expected_alias_hz"] = quantity(
        alias_frequency_hz(corr.signal_freq_hz, plan.fs_hz), "Hz", "sampling");

    add_timeseries(files, "timeseries.csv", ts);
    add_spectrum(files, "spectrum.csv", spec);
    add_json(files, "fit.json", io::to_json(fit));
}

void run_bath_pipeline(const ScenarioConfig& cfg, json& quantities,
                       std::vector<PendingFile>& files) {
    BathConfig bath = io::bath_config_from_json(cfg.blocks.at("bath"));
    if (!cfg.blocks.at("bath").contains("seed")) {
        bath.seed = cfg.seed;
    }
    const FieldTrace trace = simulate_bath(bath);
    const TimeSeries acf =
        autocorrelation(trace, static_cast<int>(std::min<std::size_t>(
                                   trace.values.size() - 1,
                                   static_cast<std::size_t>(std::round(
                                       600.0 / trace.dt_us)))));
    const double te = one_over_e_time_us(acf);
    double var = 0.0;
    for (const double v : trace.values) var += v * v;
    var /= static_cast<double>(trace.values.size());
    const double brms =
        brms_at_depth_gauss(bath.sample, bath.sensor_depth_nm);
    const double msd_time =
        msd_decay_time_us(bath.sample.diffusion_nm2_per_us, bath.sensor_depth_nm);

    quantities["autocorr_one_over_e_us"] = quantity(te, "us", "spin_bath_mc");
    quantities["msd_predicted_decay_us"] = quantity(msd_time, "us", "spin_bath_mc");
    quantities["trace_rms_gauss"] = quantity(std::sqrt(var), "Gauss", "spin_bath_mc");
    quantities["analytic_brms_gauss"] = quantity(brms, "Gauss", "pulse_filter");

    add_json(files, "bath_config.json", cfg.blocks.at("bath"));
    files.push_back({"trace.csv", [trace](const std::filesystem::path& p) {
                         io::write_trace_csv(p, trace);
                     }});
    add_timeseries(files, "autocorr.csv", acf, "c");

    // proton correlation series riding on the measured bath envelope
    if (cfg.blocks.contains("correlation") && cfg.blocks.contains("plan")) {
        CorrelationConfig corr =
            io::correlation_config_from_json(cfg.blocks.at("correlation"));
        if (!cfg.blocks.at("correlation").contains("seed")) {
            corr.seed = cfg.seed;
        }
        TabulatedEnvelope env;
        env.t_us = acf.t_us;
        env.c = acf.values;
        corr.bath_envelope = std::move(env);
        const SamplingPlan plan = io::sampling_plan_from_json(cfg.blocks.at("plan"));
        const TimeSeries ts = synthesize_timeseries(corr, plan);
        const Spectrum spec = periodogram(ts, 8);
        const LineFit fit = fit_line(spec, LineShape::lorentzian);
        quantities["proton_folded_peak_hz"] = quantity(fit.f0_hz, "Hz", "spectral");
        quantities["proton_fitted_fwhm_hz"] = quantity(fit.fwhm_hz, "Hz", "spectral");
        quantities["proton_unaliased_hz"] = quantity(
            unalias_hz(fit.f0_hz, plan.fs_hz, plan.f_low_hz, plan.f_high_hz), "Hz",
            "sampling");
        add_timeseries(files, "proton_timeseries.csv", ts);
        add_spectrum(files, "proton_spectrum.csv", spec);
        add_json(files, "proton_fit.json", io::to_json(fit));
    }

    // model linewidth budget for this sensor/sample
    if (cfg.blocks.contains("correlation")) {
        const NvSensor sensor =
            io::sensor_from_json(cfg.blocks.at("correlation").at("sensor"));
        NvSensor at_depth = sensor;
        at_depth.depth_nm = bath.sensor_depth_nm;
        const LinewidthBudget lw = combined_linewidth(at_depth, bath.sample);
        quantities["model_linewidth_total_hz"] = quantity(lw.total_hz, "Hz", "diffusion");
        quantities["model_linewidth_diffusion_hz"] =
            quantity(lw.diffusion_hz, "Hz", "diffusion");
        quantities["model_linewidth_intrinsic_hz"] =
            quantity(lw.intrinsic_hz, "Hz", "diffusion");
        quantities["model_linewidth_lifetime_hz"] =
            quantity(lw.lifetime_hz, "Hz", "diffusion");
    }
}

void run_chemshift_pipeline(const ScenarioConfig& cfg, json& quantities,
                            std::vector<PendingFile>& files) {
    const json& block = cfg.blocks.at("chemshift");
    json matrix = json::array();
    int case_idx = 0;
    for (const auto& case_j : block.at("cases")) {
        const MoleculeSpec mol = lookup_molecule(case_j);
        const FieldConfig field{case_j.at("b_gauss").get<double>()};
        for (const auto& res_j : block.at("resolutions_hz")) {
            const double res = res_j.get<double>();
            const Spectrum spec = synth_spectrum(mol, field, res);
            const bool ok = fully_resolvable(mol, field, res);
            std::string tag = mol.name + "_" + mol.nucleus.name + "_" +
                              std::to_string(static_cast<long long>(field.b_gauss)) +
                              "G_" + std::to_string(static_cast<long long>(res)) + "Hz";
            for (auto& c : tag) {
                if (c == ' ') c = '-';
            }
            add_spectrum(files, "spectrum_" + tag + ".csv", spec);
            matrix.push_back(json{{"molecule", mol.name},
                                  {"nucleus", mol.nucleus.name},
                                  {"b_gauss", field.b_gauss},
                                  {"resolution_hz", res},
                                  {"resolved", ok}});
        }
        const auto lines = line_frequencies(mol, field);
        if (lines.size() >= 2) {
            quantities["line_separation_hz_case" + std::to_string(case_idx)] = quantity(
                std::abs(lines[1].first - lines[0].first), "Hz", "chemshift");
        }
        ++case_idx;
    }
    add_json(files, "resolvability.json", matrix);
}

} // namespace

ScenarioConfig scenario_from_json(const json& j) {
    if (!j.is_object() || !j.contains("scenario") || !j["scenario"].is_string()) {
        throw ValidationError("ScenarioConfig.scenario", "missing scenario id");
    }
    ScenarioConfig cfg;
    cfg.id = scenario_id_from_string(j["scenario"].get<std::string>());
    cfg.blocks = preset_blocks(cfg.id);
    for (const auto& [key, value] : j.items()) {
        if (key == "scenario" || key == "out_dir" || key == "seed") continue;
        cfg.blocks[key] = value; // user block replaces the preset block
    }
    if (j.contains("out_dir")) {
        cfg.out_dir = j["out_dir"].get<std::string>();
    }
    if (j.contains("seed")) {
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    return cfg;
}

ValidationIssues validate_config(const ScenarioConfig& cfg) {
    ValidationIssues issues;
    auto collect = [&issues](const ValidationIssues& more) {
        issues.insert(issues.end(), more.begin(), more.end());
    };
    auto guard = [&issues](const std::string& field, auto&& fn) {
        try {
            fn();
        } catch (const ValidationError& e) {
            issues.push_back({e.field(), e.what()});
        } catch (const Error& e) {
            issues.push_back({field, e.what()});
        } catch (const json::exception& e) {
            issues.push_back({field, e.what()});
        }
    };
    if (cfg.blocks.contains("correlation")) {
        guard("correlation", [&] {
            collect(io::correlation_config_from_json(cfg.blocks.at("correlation")).validate());
        });
    }
    if (cfg.blocks.contains("plan")) {
        guard("plan", [&] {
            collect(io::sampling_plan_from_json(cfg.blocks.at("plan")).validate());
        });
    }
    if (cfg.blocks.contains("bath")) {
        guard("bath", [&] {
            collect(io::bath_config_from_json(cfg.blocks.at("bath")).validate());
        });
    }
    if (cfg.blocks.contains("chemshift")) {
        guard("chemshift", [&] {
            const json& block = cfg.blocks.at("chemshift");
            for (const auto& case_j : block.at("cases")) {
                collect(lookup_molecule(case_j).validate());
                collect(FieldConfig{case_j.at("b_gauss").get<double>()}.validate());
            }
            for (const auto& res : block.at("resolutions_hz")) {
                if (!(res.get<double>() > 0.0)) {
                    issues.push_back({"chemshift.resolutions_hz", "must be > 0"});
                }
            }
        });
    }
    if (cfg.id != ScenarioId::fig3_chemshift && !cfg.blocks.contains("correlation") &&
        !cfg.blocks.contains("bath") && !cfg.blocks.contains("chemshift")) {
        issues.push_back({"ScenarioConfig.blocks", "no runnable parameter block"});
    }
    return issues;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    const ValidationIssues issues = validate_config(cfg);
    if (!issues.empty()) {
        throw ValidationError(issues.front().field, issues.front().message);
    }

    json quantities = json::object();
    std::vector<PendingFile> pending;

    const bool generator_style =
        cfg.blocks.contains("correlation") && !cfg.blocks.contains("bath");
    if (generator_style && cfg.blocks.contains("plan")) {
        run_generator_pipeline(cfg, quantities, pending);
    }
    if (cfg.blocks.contains("bath")) {
        run_bath_pipeline(cfg, quantities, pending);
    }
    if (cfg.blocks.contains("chemshift")) {
        run_chemshift_pipeline(cfg, quantities, pending);
    }

    json summary;
    summary["scenario"] = to_string(cfg.id);
    summary["seed"] = cfg.seed;
    summary["quantities"] = quantities;

    // all numbers exist; now touch the filesystem
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + cfg.out_dir.string());
    }
    ScenarioResult result;
    for (const auto& pf : pending) {
        const auto path = cfg.out_dir / pf.rel;
        pf.write(path);
        result.files.push_back(path);
    }
    const auto summary_path = cfg.out_dir / "summary.json";
    io::write_json_file(summary_path, summary);
    result.files.push_back(summary_path);
    result.summary = std::move(summary);
    return result;
}

} // namespace nvnmr
