#ifndef QVEPAIR_SWEEPS_HPP
#define QVEPAIR_SWEEPS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qvepair/field.hpp"
#include "qvepair/observables.hpp"
#include "qvepair/solver.hpp"

namespace qvepair {

// A sweep maps (variant, axis value) pairs to fields, solves the spectrum of
// each and reduces it to a number density. What the axis value controls is
// fixed by the kind:
//
//   CarrierFrequency  axis -> carrier frequency of pulse 0
//   ChirpMagnitude    axis -> |b|; pulse k gets chirp = sign_k * axis
//   SignCombination   axis -> |b|/omega; pulse k gets chirp = sign_k * axis * omega_k
//   FrequencyRatio    axis -> omega_2/omega_1; pulse 1 carrier = axis * pulse 0 carrier
//
// Variants patch the base field per pulse. A fixed `chirp` overrides the
// axis-derived chirp for that pulse.

enum class SweepKind { CarrierFrequency, ChirpMagnitude, SignCombination, FrequencyRatio };

std::string to_string(SweepKind kind);
SweepKind sweep_kind_from_string(const std::string& text);  ///< throws std::invalid_argument

struct PulseVariant {
    int sign = +1;
    std::optional<double> chirp;
    std::optional<ChirpProfile> profile;
    std::optional<int> first_half_sign;
};

struct SweepVariant {
    std::string label;
    std::vector<PulseVariant> pulses;  ///< may be shorter than the field; missing pulses are untouched
};

struct GridPolicy {
    Eigen::Index n_par = 512;
    std::optional<std::pair<double, double>> range;  ///< unset: auto from the vector-potential extrema
    DensityMode mode = DensityMode::Reduced1D;
    double p_perp = 0.0;  ///< Reduced1D sheet
    Eigen::Index n_perp = 64;
    double p_perp_max = 1.5;
};

/// [A_min - 4 eps_perp, A_max + 4 eps_perp] from an A-only integration of the field.
std::pair<double, double> auto_momentum_range(const FieldConfig& field, const SolverOptions& solver, double p_perp);

struct DensityRun {
    DensityResult density;
    std::vector<Spectrum> spectra;  ///< one per transverse sheet
};

/// Solves the spectrum (or all sheets for Cylindrical3D) and reduces it. The
/// density is computed non-strictly; check refinement_change for coarseness.
DensityRun compute_density(const FieldConfig& field, const GridPolicy& grid, const SolverOptions& solver,
                           unsigned threads = 0);

struct SweepSpec {
    SweepKind kind = SweepKind::ChirpMagnitude;
    FieldConfig base_field;
    std::vector<double> axis;
    std::vector<SweepVariant> variants;
    SolverOptions solver;
    GridPolicy grid;
    ValidationPolicy validation;
};

struct SweepRow {
    std::string variant;
    double axis_value = 0.0;
    std::optional<DensityResult> density;  ///< unset when the row failed
    std::string error;
    std::vector<Spectrum> spectra;  ///< filled when requested
};

struct SweepResult {
    std::vector<SweepRow> rows;  ///< variant-major, then axis order

    std::size_t failures() const;
};

FieldConfig build_field(const SweepSpec& spec, const SweepVariant& variant, double axis_value);

/// Every violated invariant, including invalid (variant, axis) fields.
std::vector<std::string> validate(const SweepSpec& spec);

/// Rows are independent tasks; failures are recorded per row and the sweep continues.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0, bool keep_spectra = false);

/// (a) constant +|b|, (b) constant -|b|, (c) sign flip first +, (d) sign flip first -.
std::vector<SweepVariant> fig3_variants();

/// Two-color sign combinations (+,+), (-,-), (+,-), (-,+) for a SignCombination sweep.
std::vector<SweepVariant> fig5_variants();

/// One-color chirps {0, +b, -b} for a CarrierFrequency sweep.
std::vector<SweepVariant> fig2_variants(double chirp = 0.00025);

/// Two-color: chirp free, small chirp on E1 only, small chirp on E2 only.
std::vector<SweepVariant> fig6_variants(double b1 = 0.000125, double b2 = 0.00125);

/// Two-color: chirp free plus groups of b2 = {0.00125, 0.0025, 0.005, 0.0075},
/// each with b1 = 0 and with b1 = b2 / 10.
std::vector<SweepVariant> fig7_variants();

}  // namespace qvepair

#endif  // QVEPAIR_SWEEPS_HPP
