#include "nvnmr/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nvnmr::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open for reading: " + path.string());
    }
    return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError("bad numeric field '" + s + "' in " + path.string());
    }
}

double get_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw ValidationError(key, "missing or non-numeric");
    }
    return j[key].get<double>();
}

double get_number_or(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (j[key].is_string() && (j[key] == "inf" || j[key] == "infinity")) {
        return std::numeric_limits<double>::infinity();
    }
    if (!j[key].is_number()) {
        throw ValidationError(key, "must be numeric");
    }
    return j[key].get<double>();
}

} // namespace

void write_timeseries_csv(const std::filesystem::path& path, const TimeSeries& ts,
                          const std::string& value_column) {
    auto out = open_out(path);
    out << "t_us," << value_column << "\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        out << format_double(ts.t_us[i]) << ',' << format_double(ts.values[i]) << "\n";
    }
}

TimeSeries read_timeseries_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("empty csv: " + path.string());
    }
    TimeSeries ts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < 2) {
            throw IoError("expected 't_us,value' rows in " + path.string());
        }
        ts.t_us.push_back(parse_double(fields[0], path));
        ts.values.push_back(parse_double(fields[1], path));
    }
    require_valid(ts.validate());
    return ts;
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spec) {
    auto out = open_out(path);
    out << "f_hz,power\n";
    for (std::size_t i = 0; i < spec.size(); ++i) {
        out << format_double(spec.f_hz[i]) << ',' << format_double(spec.power[i]) << "\n";
    }
}

void write_trace_csv(const std::filesystem::path& path, const FieldTrace& trace) {
    auto out = open_out(path);
    out << "t_us,b_gauss\n";
    for (std::size_t i = 0; i < trace.values.size(); ++i) {
        out << format_double(static_cast<double>(i) * trace.dt_us) << ','
            << format_double(trace.values[i]) << "\n";
    }
}

std::vector<DepthBroadeningPoint>
read_depth_broadening_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("empty csv: " + path.string());
    }
    std::vector<DepthBroadeningPoint> points;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < 2) {
            throw IoError("expected 'depth_nm,broadening_hz[,err_hz]' rows in " +
                          path.string());
        }
        DepthBroadeningPoint p;
        p.depth_nm = parse_double(fields[0], path);
        p.broadening_hz = parse_double(fields[1], path);
        if (fields.size() > 2 && !fields[2].empty()) {
            p.broadening_err_hz = parse_double(fields[2], path);
        }
        points.push_back(p);
    }
    return points;
}

json to_json(const SamplingPlan& plan) {
    return json{{"f_low_hz", plan.f_low_hz},   {"f_high_hz", plan.f_high_hz},
                {"fold_index", plan.fold_index}, {"fs_hz", plan.fs_hz},
                {"n_samples", plan.n_samples}, {"t0_us", plan.t0_us}};
}

SamplingPlan sampling_plan_from_json(const json& j) {
    SamplingPlan plan;
    plan.f_low_hz = get_number(j, "f_low_hz");
    plan.f_high_hz = get_number(j, "f_high_hz");
    plan.fold_index = static_cast<int>(get_number(j, "fold_index"));
    plan.n_samples = static_cast<int>(get_number(j, "n_samples"));
    plan.t0_us = get_number_or(j, "t0_us", 0.0);
    if (j.contains("fs_hz")) {
        plan.fs_hz = get_number(j, "fs_hz");
    } else {
        plan = make_plan(plan.f_low_hz, plan.f_high_hz, plan.fold_index,
                         plan.n_samples, plan.t0_us);
    }
    return plan;
}

json to_json(const LineFit& fit) {
    return json{{"f0_hz", fit.f0_hz},
                {"fwhm_hz", fit.fwhm_hz},
                {"amplitude", fit.amplitude},
                {"residual_norm", fit.residual_norm},
                {"shape", fit.shape == LineShape::lorentzian ? "lorentzian" : "gaussian"}};
}

json to_json(const DiffusionFit& fit) {
    return json{{"d_nm2_per_us", fit.d_nm2_per_us},
                {"ci_lo", fit.ci_lo},
                {"ci_hi", fit.ci_hi},
                {"n_used", fit.n_used},
                {"n_censored", fit.n_censored},
                {"convention", fit.convention}};
}

NucleusSpec nucleus_from_json(const json& j) {
    if (j.is_string()) {
        const auto found = find_nucleus(j.get<std::string>());
        if (!found) {
            throw ValidationError("nucleus", "unknown name '" + j.get<std::string>() + "'");
        }
        return *found;
    }
    NucleusSpec n;
    n.name = j.value("name", "");
    n.gamma_khz_per_gauss = get_number(j, "gamma_khz_per_gauss");
    return n;
}

NvSensor sensor_from_json(const json& j) {
    NvSensor s;
    s.depth_nm = get_number(j, "depth_nm");
    s.t1_ms = get_number(j, "t1_ms");
    s.t2_us = get_number(j, "t2_us");
    return s;
}

SampleModel sample_from_json(const json& j) {
    SampleModel s;
    s.nucleus = j.contains("nucleus") ? nucleus_from_json(j["nucleus"]) : proton();
    s.density_per_nm3 = get_number(j, "density_per_nm3");
    s.diffusion_nm2_per_us = get_number(j, "diffusion_nm2_per_us");
    s.intrinsic_linewidth_hz = get_number_or(j, "intrinsic_linewidth_hz", 0.0);
    return s;
}

MoleculeSpec molecule_from_json(const json& j) {
    MoleculeSpec mol;
    mol.name = j.value("name", "");
    mol.nucleus = j.contains("nucleus") ? nucleus_from_json(j["nucleus"]) : proton();
    if (!j.contains("lines") || !j["lines"].is_array()) {
        throw ValidationError("MoleculeSpec.lines", "missing line array");
    }
    for (const auto& lj : j["lines"]) {
        ShiftLine line;
        if (lj.is_array() && lj.size() == 2) {
            line.shift_ppm = lj[0].get<double>();
            line.weight = lj[1].get<double>();
        } else {
            line.shift_ppm = get_number(lj, "shift_ppm");
            line.weight = get_number_or(lj, "weight", 1.0);
        }
        mol.lines.push_back(line);
    }
    return mol;
}

CorrelationConfig correlation_config_from_json(const json& j) {
    CorrelationConfig cfg;
    cfg.sensor = sensor_from_json(j.at("sensor"));
    cfg.signal_freq_hz = get_number(j, "signal_freq_hz");
    cfg.bath_decay_us =
        get_number_or(j, "bath_decay_us", std::numeric_limits<double>::infinity());
    cfg.amplitude = get_number_or(j, "amplitude", 1.0);
    cfg.noise_sigma = get_number_or(j, "noise_sigma", 0.0);
    cfg.seed = static_cast<std::uint64_t>(get_number_or(j, "seed", 0.0));
    if (j.contains("bath_envelope")) {
        TabulatedEnvelope env;
        for (const auto& knot : j["bath_envelope"]) {
            env.t_us.push_back(knot.at(0).get<double>());
            env.c.push_back(knot.at(1).get<double>());
        }
        cfg.bath_envelope = std::move(env);
    }
    return cfg;
}

BathConfig bath_config_from_json(const json& j) {
    BathConfig cfg;
    cfg.sample = sample_from_json(j.at("sample"));
    cfg.sensor_depth_nm = get_number(j, "sensor_depth_nm");
    cfg.n_pairs = static_cast<int>(get_number_or(j, "n_pairs", 3000.0));
    cfg.dt_us = get_number_or(j, "dt_us", 0.1);
    cfg.t_max_us = get_number(j, "t_max_us");
    cfg.box_nm = get_number_or(j, "box_nm", 4.0 * cfg.sensor_depth_nm);
    cfg.seed = static_cast<std::uint64_t>(get_number_or(j, "seed", 0.0));
    cfg.n_threads = static_cast<int>(get_number_or(j, "n_threads", 0.0));
    return cfg;
}

json load_json_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw IoError("bad json in " + path.string() + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

} // namespace nvnmr::io
