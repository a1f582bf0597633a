#include "doctest.h"
#include "qvepair/io.hpp"
#include "qvepair/sweeps.hpp"

using namespace qvepair;

namespace {

const FieldConfig kOne{{ChirpedPulse{0.1, 0.02, 100.0, 0.0}}};
const FieldConfig kTwo{{ChirpedPulse{0.1, 0.02, 100.0, 0.0}, ChirpedPulse{0.01, 0.2, 100.0, 0.0}}};

SweepSpec short_pulse_sweep() {
    SweepSpec s;
    s.kind = SweepKind::ChirpMagnitude;
    s.base_field = FieldConfig{{ChirpedPulse{0.1, 0.5, 5.0, 0.0}}};
    s.axis = {0.0, 0.02};
    s.variants = fig3_variants();
    s.grid.n_par = 24;
    s.grid.range = std::make_pair(-1.5, 1.5);
    return s;
}

}  // namespace

TEST_SUITE("sweeps") {

TEST_CASE("axis semantics per kind") {
    SweepSpec s;
    s.base_field = kTwo;
    SweepVariant v{"x", {PulseVariant{-1}, PulseVariant{+1}}};

    s.kind = SweepKind::ChirpMagnitude;
    FieldConfig f = build_field(s, v, 0.0003);
    CHECK(f.pulses[0].chirp == -0.0003);
    CHECK(f.pulses[1].chirp == 0.0003);

    s.kind = SweepKind::SignCombination;
    f = build_field(s, v, 0.00625);
    CHECK(f.pulses[0].chirp == doctest::Approx(-0.000125));
    CHECK(f.pulses[1].chirp == doctest::Approx(0.00125));

    s.kind = SweepKind::FrequencyRatio;
    f = build_field(s, SweepVariant{"r", {}}, 30.0);
    CHECK(f.pulses[1].carrier_frequency == doctest::Approx(0.6));

    s.kind = SweepKind::CarrierFrequency;
    s.base_field = kOne;
    f = build_field(s, fig2_variants()[1], 0.325);
    CHECK(f.pulses[0].carrier_frequency == 0.325);
    CHECK(f.pulses[0].chirp == 0.00025);
}

TEST_CASE("presets") {
    const auto f3 = fig3_variants();
    REQUIRE(f3.size() == 4);
    CHECK(f3[0].label == "a");
    CHECK(f3[2].pulses[0].profile == ChirpProfile::SignFlip);
    CHECK(f3[3].pulses[0].first_half_sign == -1);

    const auto f5 = fig5_variants();
    REQUIRE(f5.size() == 4);
    SweepSpec s;
    s.kind = SweepKind::SignCombination;
    s.base_field = kTwo;
    for (const auto& v : f5) {
        // axis value 0 is the chirp-free two-color field for every sign pattern
        const FieldConfig f = build_field(s, v, 0.0);
        CHECK(f.pulses[0].chirp == 0.0);
        CHECK(f.pulses[1].chirp == 0.0);
        const FieldConfig g = build_field(s, v, 0.01);
        CHECK(g.pulses[1].chirp / g.pulses[0].chirp == doctest::Approx(10.0 * v.pulses[1].sign * v.pulses[0].sign));
    }
    CHECK(fig7_variants().size() == 9);
    CHECK(fig6_variants().size() == 3);
}

TEST_CASE("validation lists every problem") {
    SweepSpec s;
    s.base_field = kOne;
    s.kind = SweepKind::ChirpMagnitude;
    s.axis = {0.0, 0.0001, 0.00005};
    s.variants = fig3_variants();
    auto problems = validate(s);
    CHECK(problems.size() == 1);

    s.axis = {0.0, 0.00075};
    problems = validate(s);
    CHECK(problems.size() == 4);  // every variant breaks the chirp bound at 0.00075
    s.validation.enforce_chirp_bound = false;
    CHECK(validate(s).empty());

    s.axis.clear();
    s.variants.clear();
    CHECK(validate(s).size() == 2);
    CHECK_THROWS_AS(run_sweep(s), std::invalid_argument);
}

TEST_CASE("rows come out variant-major and independent of threads") {
    const SweepSpec s = short_pulse_sweep();
    const SweepResult one = run_sweep(s, 1);
    const SweepResult four = run_sweep(s, 4);
    REQUIRE(one.rows.size() == 8);
    CHECK(one.rows[0].variant == "a");
    CHECK(one.rows[1].axis_value == 0.02);
    CHECK(one.rows[7].variant == "d");
    CHECK(one.failures() == 0);
    CHECK(io::sweep_csv(one, s.grid.mode) == io::sweep_csv(four, s.grid.mode));
    // chirp-free rows coincide across all variants
    for (int v = 1; v < 4; ++v) CHECK(one.rows[2 * v].density->value == one.rows[0].density->value);
}

TEST_CASE("failed rows are recorded and the sweep carries on") {
    SweepSpec s = short_pulse_sweep();
    s.axis = {0.0};
    s.solver.max_step = 1e-30;  // the first step underflows
    const SweepResult r = run_sweep(s, 1);
    CHECK(r.failures() == 4);
    CHECK_FALSE(r.rows[0].error.empty());
    CHECK(io::sweep_csv(r, s.grid.mode).find(",nan,reduced1d,0\n") != std::string::npos);
}

TEST_CASE("spectra are kept on request") {
    SweepSpec s = short_pulse_sweep();
    s.axis = {0.01};
    s.variants.resize(1);
    const SweepResult r = run_sweep(s, 1, true);
    REQUIRE(r.rows[0].spectra.size() == 1);
    CHECK(r.rows[0].spectra[0].size() == 24);
}

TEST_CASE("cylindrical density solves one sheet per transverse momentum") {
    GridPolicy g;
    g.mode = DensityMode::Cylindrical3D;
    g.n_par = 16;
    g.n_perp = 3;
    g.p_perp_max = 0.5;
    g.range = std::make_pair(-1.0, 1.0);
    const DensityRun run = compute_density(FieldConfig{{ChirpedPulse{0.1, 0.5, 5.0, 0.0}}}, g, {}, 1);
    REQUIRE(run.spectra.size() == 3);
    CHECK(run.spectra[2].transverse_momentum == 0.5);
    CHECK(run.density.value > 0.0);
}

TEST_CASE("auto range brackets the vector potential") {
    const auto [lo, hi] = auto_momentum_range(kOne, {}, 0.0);
    CHECK(lo < -4.0);
    CHECK(hi > 4.0);
    const auto [lo3, hi3] = auto_momentum_range(kOne, {}, 1.5);
    CHECK(lo3 == doctest::Approx(lo - 4.0 * (std::sqrt(3.25) - 1.0)));
    CHECK(hi3 > hi);
}

TEST_CASE("kind names") {
    CHECK(to_string(SweepKind::FrequencyRatio) == "frequency_ratio");
    CHECK(sweep_kind_from_string("sign_combination") == SweepKind::SignCombination);
    CHECK_THROWS_AS(sweep_kind_from_string("omega"), std::invalid_argument);
}

}
