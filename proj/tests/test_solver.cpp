#include <cmath>

#include "doctest.h"
#include "qvepair/solver.hpp"

using namespace qvepair;

namespace {

// tau = 5, omega = 0.5, E0 = 0.1: small enough for the history-quadrature
// oracle, which (Richardson-extrapolated over h = 5e-3, 2.5e-3, 1.25e-3) gives
const FieldConfig kShort{{ChirpedPulse{0.1, 0.5, 5.0, 0.0}}};
constexpr double kOracleF0 = 3.9326454683e-07;   // P3 = 0
constexpr double kOracleF06 = 8.6462008346e-09;  // P3 = 0.6

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("vacuum stays vacuum without a field") {
    const FieldConfig none{{ChirpedPulse{0.0, 0.5, 5.0, 0.0}}};
    const ModeResult r = solve_mode({0.3, 0.1}, none, {});
    CHECK(r.final_f == 0.0);
    CHECK(r.final_A == 0.0);
    CHECK(r.kinetic_momentum_final == 0.3);
}

TEST_CASE("short pulse matches the quadrature oracle") {
    const ModeResult r = solve_mode({0.0, 0.0}, kShort, {});
    CHECK(std::abs(r.final_f - kOracleF0) / kOracleF0 < 1e-5);
    CHECK(r.max_conservation_residual <= 100 * 1e-8);
    const ModeResult r6 = solve_mode({0.6, 0.0}, kShort, {});
    CHECK(std::abs(r6.final_f - kOracleF06) / kOracleF06 < 1e-5);

    SolverOptions tight;
    tight.rtol = 1e-12;
    tight.atol = 1e-20;
    CHECK(std::abs(solve_mode({0.0, 0.0}, kShort, tight).final_f - kOracleF0) / kOracleF0 < 1e-8);
}

TEST_CASE("error shrinks with rtol") {
    SolverOptions o;
    o.atol = 1e-20;
    double prev = INFINITY;
    for (double rtol : {1e-6, 1e-8, 1e-10}) {
        o.rtol = rtol;
        const double err = std::abs(solve_mode({0.0, 0.0}, kShort, o).final_f - kOracleF0) / kOracleF0;
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-7);
}

TEST_CASE("invariant readout agrees with the integrated f") {
    const ModeResult r = solve_mode({0.0, 0.0}, kShort, {});
    CHECK(std::abs(r.integrated_f - r.final_f) < 1e-8);
    ModeState s(r.integrated_f, r.final_g, r.final_w, r.final_A);
    CHECK(occupation_from_invariant(s) == r.final_f);
}

TEST_CASE("reversing the chirp maps P3 to A(end) - P3") {
    const FieldConfig plus{{ChirpedPulse{0.1, 0.5, 5.0, 0.05}}};
    const FieldConfig minus{{ChirpedPulse{0.1, 0.5, 5.0, -0.05}}};
    SolverOptions o;
    o.rtol = 1e-10;
    o.atol = 1e-20;
    const double a_end = solve_mode({0.0, 0.0}, plus, o).final_A;
    for (double p3 : {-0.7, -0.2, 0.0, 0.4, 0.9}) {
        const double fp = solve_mode({p3, 0.2}, plus, o).final_f;
        const double fm = solve_mode({a_end - p3, 0.2}, minus, o).final_f;
        CHECK(std::abs(fp - fm) / fp < 1e-6);
    }
}

TEST_CASE("spectrum is independent of the thread count") {
    const auto grid = MomentumGrid::uniform(-1.0, 1.0, 24, 0.0);
    const SpectrumRun one = solve_spectrum(grid, kShort, {}, 1);
    const SpectrumRun three = solve_spectrum(grid, kShort, {}, 3);
    CHECK(one.spectrum.f == three.spectrum.f);
    CHECK(one.spectrum.kinetic_momentum == three.spectrum.kinetic_momentum);
    CHECK(one.spectrum.field_fingerprint == fingerprint(kShort));
    CHECK(one.max_conservation_residual.maxCoeff() <= 1e-6);
    CHECK(one.spectrum.f[12] == solve_mode({grid.canonical_momentum[12], 0.0}, kShort, {}).final_f);
}

TEST_CASE("series recording honours the stride") {
    SolverOptions o;
    o.record_series = true;
    o.series_stride = 10;
    const ModeResult r = solve_mode({0.0, 0.0}, kShort, o);
    REQUIRE(r.series.size() >= 2);
    CHECK(r.series.front().t == -40.0);
    CHECK(r.series.back().t == 40.0);
    CHECK(r.series.size() <= r.accepted_steps / 10 + 2);
}

TEST_CASE("window defaults to 8 tau and can be overridden") {
    const auto [lo, hi] = resolve_window({}, kShort);
    CHECK(lo == -40.0);
    CHECK(hi == 40.0);
    SolverOptions bad;
    bad.t_start = 5.0;
    bad.t_end = -5.0;
    CHECK_THROWS_AS(resolve_window(bad, kShort), std::invalid_argument);
    SolverOptions neg;
    neg.rtol = -1.0;
    CHECK_FALSE(validate(neg).empty());
}

TEST_CASE("grid checks") {
    MomentumGrid g;
    CHECK_THROWS_AS(check_grid(g), std::invalid_argument);
    g.canonical_momentum = Eigen::Vector3d(0.0, 0.0, 1.0);
    CHECK_THROWS_AS(check_grid(g), std::invalid_argument);
    const auto u = MomentumGrid::uniform(-2.0, 2.0, 5);
    CHECK(u.canonical_momentum[0] == -2.0);
    CHECK(u.canonical_momentum[4] == 2.0);
    CHECK_NOTHROW(check_grid(u));
}

TEST_CASE("vector potential summary") {
    // the unchirped short pulse is even, so A(end) is the full area of E
    const PotentialSummary a = potential_summary(kShort, {});
    const double area = 0.1 * 5.0 * std::sqrt(2.0 * M_PI) * std::exp(-0.5 * 0.5 * 0.5 * 25.0);
    CHECK(a.final == doctest::Approx(-area).epsilon(1e-7));
    CHECK(a.min <= a.final);
    CHECK(a.max >= 0.0);
}

}
