#include <cmath>

#include "doctest.h"
#include "qvepair/oracle.hpp"
#include "qvepair/solver.hpp"

using namespace qvepair;

namespace {
const FieldConfig kShort{{ChirpedPulse{0.1, 0.5, 5.0, 0.0}}};
}

TEST_SUITE("oracle") {

TEST_CASE("no field, no pairs") {
    const FieldConfig none{{ChirpedPulse{0.0, 0.5, 5.0, 0.0}}};
    OracleOptions o;
    o.step = 0.004;
    CHECK(oracle_solve_mode({0.0, 0.0}, none, o).final_f == 0.0);
}

TEST_CASE("step limit") {
    const ModeParams m{0.0, 0.0};
    const double limit = oracle_step_limit(m, kShort, -40.0, 40.0);
    CHECK(limit <= 5.0 / 1000.0);
    CHECK(limit <= 2 * M_PI / (64 * 1.0));
    OracleOptions o;
    o.step = limit * 1.01;
    CHECK_THROWS_AS(oracle_solve_mode(m, kShort, o), StepTooLarge);
    o.step = 0.0;
    CHECK_THROWS_AS(oracle_solve_mode(m, kShort, o), StepTooLarge);
}

TEST_CASE("second-order self-convergence") {
    double v[3];
    double h = 0.005;
    for (double& x : v) {
        OracleOptions o;
        o.step = h;
        x = oracle_solve_mode({0.2, 0.0}, kShort, o).final_f;
        h /= 2;
    }
    const double ratio = (v[0] - v[1]) / (v[1] - v[2]);
    CHECK(ratio >= 3.0);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("agrees with the ODE solver on the short pulse") {
    for (double p3 : {-0.5, 0.0, 0.5}) {
        const ModeParams m{p3, 0.0};
        OracleOptions o;
        o.step = 0.5 * oracle_step_limit(m, kShort, -40.0, 40.0);
        const OracleResult ref = oracle_solve_mode(m, kShort, o);
        const ModeResult ode = solve_mode(m, kShort, {});
        CHECK(ref.final_f > 0.0);
        CHECK(ref.final_f < 1.0);
        CHECK(std::abs(ode.final_f - ref.final_f) / ref.final_f <= 1e-4);
        CHECK(std::abs(ode.final_A - ref.final_A) < 1e-9);
    }
}

TEST_CASE("grid spacing divides the window") {
    OracleOptions o;
    o.step = 0.003;
    const OracleResult r = oracle_solve_mode({0.0, 0.0}, kShort, o);
    CHECK(r.step <= 0.003);
    CHECK(r.step * static_cast<double>(r.steps) == doctest::Approx(80.0).epsilon(1e-12));
}

}
