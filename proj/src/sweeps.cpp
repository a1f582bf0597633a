#include "qvepair/sweeps.hpp"

#include <cmath>
#include <sstream>

#include "qvepair/parallel.hpp"

namespace qvepair {

std::string to_string(SweepKind kind) {
    switch (kind) {
        case SweepKind::CarrierFrequency: return "carrier_frequency";
        case SweepKind::ChirpMagnitude: return "chirp_magnitude";
        case SweepKind::SignCombination: return "sign_combination";
        case SweepKind::FrequencyRatio: return "frequency_ratio";
    }
    return "unknown";
}

SweepKind sweep_kind_from_string(const std::string& text) {
    for (auto k : {SweepKind::CarrierFrequency, SweepKind::ChirpMagnitude, SweepKind::SignCombination,
                   SweepKind::FrequencyRatio})
        if (to_string(k) == text) return k;
    throw std::invalid_argument("unknown sweep kind '" + text + "'");
}

std::size_t SweepResult::failures() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.density ? 0 : 1;
    return n;
}

std::pair<double, double> auto_momentum_range(const FieldConfig& field, const SolverOptions& solver, double p_perp) {
    const PotentialSummary a = potential_summary(field, solver);
    const double eps = std::sqrt(1.0 + p_perp * p_perp);
    return {a.min - 4.0 * eps, a.max + 4.0 * eps};
}

DensityRun compute_density(const FieldConfig& field, const GridPolicy& grid, const SolverOptions& solver,
                           unsigned threads) {
    DensityRun out;
    const bool cylindrical = grid.mode == DensityMode::Cylindrical3D;
    const double range_p_perp = cylindrical ? grid.p_perp_max : grid.p_perp;
    const auto [lo, hi] = grid.range ? *grid.range : auto_momentum_range(field, solver, range_p_perp);

    DensityOptions lenient;
    lenient.strict = false;
    if (!cylindrical) {
        const auto mg = MomentumGrid::uniform(lo, hi, grid.n_par, grid.p_perp);
        out.spectra.push_back(solve_spectrum(mg, field, solver, threads).spectrum);
        out.density = number_density_reduced(out.spectra.front(), lenient);
        return out;
    }
    if (grid.n_perp < 2) throw std::invalid_argument("cylindrical density needs n_perp >= 2");
    const Eigen::VectorXd pt = Eigen::VectorXd::LinSpaced(grid.n_perp, 0.0, grid.p_perp_max);
    for (Eigen::Index k = 0; k < pt.size(); ++k) {
        const auto mg = MomentumGrid::uniform(lo, hi, grid.n_par, pt[k]);
        out.spectra.push_back(solve_spectrum(mg, field, solver, threads).spectrum);
    }
    out.density = number_density_3d(out.spectra, lenient);
    return out;
}

FieldConfig build_field(const SweepSpec& spec, const SweepVariant& variant, double axis_value) {
    FieldConfig field = spec.base_field;
    auto& pulses = field.pulses;
    if (pulses.empty()) throw std::invalid_argument("sweep base field has no pulses");
    if (variant.pulses.size() > pulses.size())
        throw std::invalid_argument("variant '" + variant.label + "' patches more pulses than the field has");

    switch (spec.kind) {
        case SweepKind::CarrierFrequency: pulses[0].carrier_frequency = axis_value; break;
        case SweepKind::FrequencyRatio:
            if (pulses.size() < 2) throw std::invalid_argument("frequency_ratio sweep needs a two-color field");
            pulses[1].carrier_frequency = axis_value * pulses[0].carrier_frequency;
            break;
        default: break;
    }

    for (std::size_t k = 0; k < variant.pulses.size(); ++k) {
        const PulseVariant& pv = variant.pulses[k];
        ChirpedPulse& p = pulses[k];
        if (spec.kind == SweepKind::ChirpMagnitude) p.chirp = pv.sign * axis_value;
        if (spec.kind == SweepKind::SignCombination) p.chirp = pv.sign * axis_value * p.carrier_frequency;
        if (pv.chirp) p.chirp = *pv.chirp;
        if (pv.profile) p.profile = *pv.profile;
        if (pv.first_half_sign) p.first_half_sign = *pv.first_half_sign;
    }
    return field;
}

std::vector<std::string> validate(const SweepSpec& spec) {
    std::vector<std::string> out;
    if (spec.axis.empty()) out.emplace_back("sweep axis is empty");
    for (std::size_t i = 1; i < spec.axis.size(); ++i)
        if (!(spec.axis[i] > spec.axis[i - 1])) {
            out.emplace_back("sweep axis must be strictly increasing (index " + std::to_string(i) + ")");
            break;
        }
    if (spec.variants.empty()) out.emplace_back("sweep has no variants");
    for (const auto& msg : validate(spec.solver)) out.push_back("solver: " + msg);
    if (spec.grid.n_par < 1) out.emplace_back("grid n_par must be >= 1");
    if (spec.grid.range && !(spec.grid.range->first < spec.grid.range->second))
        out.emplace_back("grid range must satisfy lo < hi");
    if (spec.grid.mode == DensityMode::Cylindrical3D && spec.grid.n_perp < 2)
        out.emplace_back("grid n_perp must be >= 2 for cylindrical3d");
    if (spec.base_field.pulses.empty()) {
        out.emplace_back("sweep base field has no pulses");
        return out;
    }
    for (const auto& v : spec.variants) {
        for (double a : spec.axis) {
            FieldConfig f;
            try {
                f = build_field(spec, v, a);
            } catch (const std::exception& e) {
                out.push_back(e.what());
                break;
            }
            for (const auto& fv : validate(f, spec.validation)) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "variant '" << v.label << "' at axis value " << a << ": pulse " << fv.pulse_index << " "
                    << fv.field << ": " << fv.message;
                out.push_back(msg.str());
            }
        }
    }
    return out;
}

SweepResult run_sweep(const SweepSpec& spec, unsigned threads, bool keep_spectra) {
    const auto problems = validate(spec);
    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "invalid sweep:";
        for (const auto& p : problems) msg << "\n  " << p;
        throw std::invalid_argument(msg.str());
    }

    SweepResult result;
    for (const auto& v : spec.variants)
        for (double a : spec.axis) result.rows.push_back({v.label, a, std::nullopt, {}, {}});

    const unsigned width = resolve_thread_count(threads);
    const std::size_t n_rows = result.rows.size();
    // Wide sweeps parallelize over rows; short ones hand the threads to the spectrum.
    const bool row_parallel = n_rows >= width;
    const unsigned row_threads = row_parallel ? width : 1;
    const unsigned mode_threads = row_parallel ? 1 : width;

    parallel_for(n_rows, row_threads, [&](std::size_t i) {
        SweepRow& row = result.rows[i];
        const SweepVariant& v = spec.variants[i / spec.axis.size()];
        try {
            const FieldConfig field = build_field(spec, v, row.axis_value);
            DensityRun run = compute_density(field, spec.grid, spec.solver, mode_threads);
            row.density = run.density;
            if (keep_spectra) row.spectra = std::move(run.spectra);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });
    return result;
}

namespace {

PulseVariant fixed_chirp(double b) {
    PulseVariant p;
    p.chirp = b;
    p.profile = ChirpProfile::Constant;
    return p;
}

std::string chirp_label(double b) {
    std::ostringstream s;
    s << b;
    return s.str();
}

}  // namespace

std::vector<SweepVariant> fig3_variants() {
    PulseVariant a, b, c, d;
    a.sign = +1;
    a.profile = ChirpProfile::Constant;
    b.sign = -1;
    b.profile = ChirpProfile::Constant;
    c.sign = +1;
    c.profile = ChirpProfile::SignFlip;
    c.first_half_sign = +1;
    d.sign = +1;
    d.profile = ChirpProfile::SignFlip;
    d.first_half_sign = -1;
    return {{"a", {a}}, {"b", {b}}, {"c", {c}}, {"d", {d}}};
}

std::vector<SweepVariant> fig5_variants() {
    auto combo = [](int s1, int s2) {
        PulseVariant p1, p2;
        p1.sign = s1;
        p2.sign = s2;
        p1.profile = p2.profile = ChirpProfile::Constant;
        return std::vector<PulseVariant>{p1, p2};
    };
    return {{"b1+b2+", combo(+1, +1)}, {"b1-b2-", combo(-1, -1)}, {"b1+b2-", combo(+1, -1)}, {"b1-b2+", combo(-1, +1)}};
}

std::vector<SweepVariant> fig2_variants(double chirp) {
    return {{"b=0", {fixed_chirp(0.0)}},
            {"b=+" + chirp_label(chirp), {fixed_chirp(chirp)}},
            {"b=-" + chirp_label(chirp), {fixed_chirp(-chirp)}}};
}

std::vector<SweepVariant> fig6_variants(double b1, double b2) {
    return {{"b1=0,b2=0", {fixed_chirp(0.0), fixed_chirp(0.0)}},
            {"b1=" + chirp_label(b1) + ",b2=0", {fixed_chirp(b1), fixed_chirp(0.0)}},
            {"b1=0,b2=" + chirp_label(b2), {fixed_chirp(0.0), fixed_chirp(b2)}}};
}

std::vector<SweepVariant> fig7_variants() {
    std::vector<SweepVariant> out{{"b1=0,b2=0", {fixed_chirp(0.0), fixed_chirp(0.0)}}};
    for (double b2 : {0.00125, 0.0025, 0.005, 0.0075}) {
        out.push_back({"b1=0,b2=" + chirp_label(b2), {fixed_chirp(0.0), fixed_chirp(b2)}});
        out.push_back({"b1=" + chirp_label(b2 / 10.0) + ",b2=" + chirp_label(b2), {fixed_chirp(b2 / 10.0), fixed_chirp(b2)}});
    }
    return out;
}

}  // namespace qvepair
