#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "nvnmr/chemshift.hpp"
#include "nvnmr/correlation.hpp"
#include "nvnmr/diffusion.hpp"
#include "nvnmr/sampling.hpp"
#include "nvnmr/spectral.hpp"
#include "nvnmr/spin_bath.hpp"

namespace nvnmr::io {

using json = nlohmann::json;

/// Floating-point text form used in every emitted file: shortest-of-17
/// significant digits, locale-independent.
std::string format_double(double v);

// --- CSV (fixed column order, header row) ---
void write_timeseries_csv(const std::filesystem::path& path, const TimeSeries& ts,
                          const std::string& value_column = "signal");
TimeSeries read_timeseries_csv(const std::filesystem::path& path);

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spec);

void write_trace_csv(const std::filesystem::path& path, const FieldTrace& trace);

std::vector<DepthBroadeningPoint>
read_depth_broadening_csv(const std::filesystem::path& path);

// --- JSON codecs ---
json to_json(const SamplingPlan& plan);
SamplingPlan sampling_plan_from_json(const json& j);

json to_json(const LineFit& fit);
json to_json(const DiffusionFit& fit);

NucleusSpec nucleus_from_json(const json& j);
NvSensor sensor_from_json(const json& j);
SampleModel sample_from_json(const json& j);
MoleculeSpec molecule_from_json(const json& j);
CorrelationConfig correlation_config_from_json(const json& j);
BathConfig bath_config_from_json(const json& j);

json load_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

} // namespace nvnmr::io
