#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nvnmr/core.hpp"
#include "nvnmr/spectral.hpp"

namespace nvnmr {

/// One resonance line: chemical shift (ppm) and weight (number of
/// equivalent nuclei).
struct ShiftLine {
    double shift_ppm = 0.0;
    double weight = 1.0;
};

/// A molecule's stick spectrum for one nuclear species.
struct MoleculeSpec {
    std::string name;
    NucleusSpec nucleus;
    std::vector<ShiftLine> lines;

    ValidationIssues validate() const;
};

/// Reference shift tables (public NMR shift databases; not measured here).
/// Acetic acid:    1H {2.10, 11.4} ppm, 13C {20.8, 178.1} ppm.
/// Methyl formate: 1H {3.77, 8.08} ppm, 13C {50.5, 161.8} ppm.
MoleculeSpec acetic_acid_1h();
MoleculeSpec acetic_acid_13c();
MoleculeSpec methyl_formate_1h();
MoleculeSpec methyl_formate_13c();
std::vector<MoleculeSpec> builtin_molecules();

/// Line positions f_i = f_ref * (1 + shift_ppm * 1e-6), f_ref the Larmor
/// frequency; weights passed through.
std::vector<std::pair<double, double>> line_frequencies(const MoleculeSpec& mol,
                                                        const FieldConfig& field);

/// Sum of unit-area lineshapes of the given FWHM at the line positions,
/// each scaled by its weight. Line areas are truncation-corrected so the
/// integral over the emitted grid equals the total weight.
Spectrum synth_spectrum(const MoleculeSpec& mol, const FieldConfig& field,
                        double resolution_fwhm_hz,
                        LineShape shape = LineShape::lorentzian,
                        int n_points = 16384);

/// Per-line-pair resolvability: pair (i, j) counts as resolved iff its
/// two-line synthetic spectrum shows two local maxima separated by a dip of
/// at least 10% of the lower maximum. Entries ordered (0,1), (0,2), (1,2)...
struct PairResolvability {
    std::size_t line_a = 0;
    std::size_t line_b = 0;
    bool resolved = false;
};

std::vector<PairResolvability> resolvable(const MoleculeSpec& mol,
                                          const FieldConfig& field,
                                          double resolution_fwhm_hz,
                                          LineShape shape = LineShape::lorentzian);

/// True iff every line pair of the molecule is resolved.
bool fully_resolvable(const MoleculeSpec& mol, const FieldConfig& field,
                      double resolution_fwhm_hz,
                      LineShape shape = LineShape::lorentzian);

} // namespace nvnmr
