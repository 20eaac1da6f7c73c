#include "nvnmr/core.hpp"

#include <cmath>

namespace nvnmr {

void require_valid(const ValidationIssues& issues) {
    if (!issues.empty()) {
        throw ValidationError(issues.front().field, issues.front().message);
    }
}

namespace {

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

void check_positive(ValidationIssues& out, const std::string& field, double v) {
    if (!finite_positive(v)) {
        out.push_back({field, "must be finite and > 0"});
    }
}

void check_non_negative(ValidationIssues& out, const std::string& field, double v) {
    if (!(std::isfinite(v) && v >= 0.0)) {
        out.push_back({field, "must be finite and >= 0"});
    }
}

} // namespace

ValidationIssues NucleusSpec::validate() const {
    ValidationIssues issues;
    if (name.empty()) {
        issues.push_back({"NucleusSpec.name", "must be non-empty"});
    }
    check_positive(issues, "NucleusSpec.gamma", gamma_khz_per_gauss);
    return issues;
}

const NucleusSpec& proton() {
    static const NucleusSpec n{"1H", 4.25};
    return n;
}

const NucleusSpec& carbon13() {
    static const NucleusSpec n{"13C", 1.0705};
    return n;
}

std::optional<NucleusSpec> find_nucleus(const std::string& name) {
    if (name == "1H" || name == "H" || name == "proton") return proton();
    if (name == "13C" || name == "C13") return carbon13();
    return std::nullopt;
}

ValidationIssues NvSensor::validate() const {
    ValidationIssues issues;
    check_positive(issues, "NvSensor.depth_nm", depth_nm);
    check_positive(issues, "NvSensor.t1_ms", t1_ms);
    check_positive(issues, "NvSensor.t2_us", t2_us);
    if (issues.empty() && t2_us > t1_ms * units::us_per_ms) {
        issues.push_back({"NvSensor.t2_us", "must not exceed T1"});
    }
    return issues;
}

ValidationIssues SampleModel::validate() const {
    ValidationIssues issues = nucleus.validate();
    check_positive(issues, "SampleModel.density_per_nm3", density_per_nm3);
    check_non_negative(issues, "SampleModel.diffusion_nm2_per_us", diffusion_nm2_per_us);
    check_non_negative(issues, "SampleModel.intrinsic_linewidth_hz", intrinsic_linewidth_hz);
    return issues;
}

ValidationIssues FieldConfig::validate() const {
    ValidationIssues issues;
    check_non_negative(issues, "FieldConfig.b_gauss", b_gauss);
    return issues;
}

double larmor_frequency_hz(const NucleusSpec& nucleus, const FieldConfig& field) {
    require_valid(nucleus.validate());
    require_valid(field.validate());
    return nucleus.gamma_khz_per_gauss * field.b_gauss * units::hz_per_khz;
}

} // namespace nvnmr
