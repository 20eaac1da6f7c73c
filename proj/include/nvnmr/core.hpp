#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nvnmr/errors.hpp"
#include "nvnmr/units.hpp"

namespace nvnmr {

/// One invariant violation, suitable for aggregation across a whole config.
struct ValidationIssue {
    std::string field;
    std::string message;
};

using ValidationIssues = std::vector<ValidationIssue>;

/// Throws ValidationError for the first issue, if any.
void require_valid(const ValidationIssues& issues);

/// A nuclear species. gamma is the gyromagnetic ratio as an ordinary
/// frequency per field, kHz/Gauss (the convention used for every frequency
/// in this library; nothing is angular).
struct NucleusSpec {
    std::string name;
    double gamma_khz_per_gauss = 0.0;

    ValidationIssues validate() const;
};

/// Built-in nuclei. 1H carries 4.25 kHz/Gauss; 13C carries 1.0705 kHz/Gauss
/// (standard tables; needed for carbon chemical-shift spectra).
const NucleusSpec& proton();
const NucleusSpec& carbon13();
std::optional<NucleusSpec> find_nucleus(const std::string& name);

/// The sensor: a point detector at depth d below the sample half-space,
/// reading the field component along a fixed axis (the surface normal).
/// No angular dependence of the sensing axis is modeled.
struct NvSensor {
    double depth_nm = 0.0;
    double t1_ms = 0.0;
    double t2_us = 0.0;

    ValidationIssues validate() const;
};

/// Sample above the diamond: one nuclear species at number density rho,
/// diffusing with constant D, with an intrinsic (sample-limited) linewidth.
struct SampleModel {
    NucleusSpec nucleus;
    double density_per_nm3 = 0.0;
    double diffusion_nm2_per_us = 0.0;
    double intrinsic_linewidth_hz = 0.0;

    ValidationIssues validate() const;
};

/// Static magnetic field magnitude. Direction is implicitly the sensor axis.
struct FieldConfig {
    double b_gauss = 0.0;

    ValidationIssues validate() const;
};

/// Larmor frequency in Hz (ordinary frequency): gamma * B.
double larmor_frequency_hz(const NucleusSpec& nucleus, const FieldConfig& field);

} // namespace nvnmr
