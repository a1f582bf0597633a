#include <cmath>
#include <limits>

#include "doctest.h"
#include "qvepair/integrator.hpp"
#include "qvepair/kinematics.hpp"

using namespace qvepair;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

auto no_cap = [](double, const auto&) { return kInf; };
auto no_observer = [](double, const auto&) {};

double oscillator_error(double rtol) {
    Eigen::Vector2d y(1.0, 0.0);
    DopriOptions o;
    o.rtol = rtol;
    o.atol = rtol * 1e-3;
    auto rhs = [](double, const Eigen::Vector2d& s) { return Eigen::Vector2d(s[1], -s[0]); };
    integrate_dopri5(rhs, y, 0.0, 20.0, o, no_cap, no_observer);
    return std::hypot(y[0] - std::cos(20.0), y[1] + std::sin(20.0));
}

}  // namespace

TEST_SUITE("integrator") {

TEST_CASE("exponential decay") {
    Eigen::Matrix<double, 1, 1> y;
    y << 1.0;
    DopriOptions o;
    auto rhs = [](double, const Eigen::Matrix<double, 1, 1>& s) { return Eigen::Matrix<double, 1, 1>(-s); };
    const auto stats = integrate_dopri5(rhs, y, 0.0, 1.0, o, no_cap, no_observer);
    CHECK(y[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-7));
    CHECK(stats.accepted > 0);
    CHECK(stats.evaluations >= 6 * stats.accepted);
}

TEST_CASE("error falls with the tolerance") {
    const double e6 = oscillator_error(1e-6);
    const double e9 = oscillator_error(1e-9);
    CHECK(e9 < e6 / 100.0);
    CHECK(e6 < 1e-4);
}

TEST_CASE("step cap and observer are honoured") {
    Eigen::Vector2d y(1.0, 0.0);
    DopriOptions o;
    double last = 0.0, widest = 0.0;
    std::size_t calls = 0;
    auto rhs = [](double, const Eigen::Vector2d& s) { return Eigen::Vector2d(s[1], -s[0]); };
    auto cap = [](double, const Eigen::Vector2d&) { return 0.05; };
    auto obs = [&](double t, const Eigen::Vector2d&) {
        widest = std::max(widest, t - last);
        last = t;
        ++calls;
    };
    const auto stats = integrate_dopri5(rhs, y, 0.0, 1.0, o, cap, obs);
    CHECK(last == 1.0);
    CHECK(widest <= 0.05 + 1e-15);
    CHECK(calls == stats.accepted);
}

TEST_CASE("vanishing step raises StepUnderflow") {
    Eigen::Matrix<double, 1, 1> y;
    y << 1.0;
    DopriOptions o;
    auto rhs = [](double t, const Eigen::Matrix<double, 1, 1>&) {
        return Eigen::Matrix<double, 1, 1>(1.0 / (t - 0.5));
    };
    CHECK_THROWS_AS(integrate_dopri5(rhs, y, 0.0, 1.0, o, no_cap, no_observer), StepUnderflow);
}

TEST_CASE("empty interval is rejected") {
    Eigen::Matrix<double, 1, 1> y;
    y << 1.0;
    auto rhs = [](double, const Eigen::Matrix<double, 1, 1>& s) { return Eigen::Matrix<double, 1, 1>(s); };
    CHECK_THROWS_AS(integrate_dopri5(rhs, y, 1.0, 1.0, DopriOptions{}, no_cap, no_observer), std::invalid_argument);
}

}

TEST_SUITE("kinematics") {

TEST_CASE("energy and coupling") {
    const ModeParams m{0.3, 0.4};
    CHECK(m.transverse_energy() == doctest::Approx(std::sqrt(1.16)));
    CHECK(total_energy(m, 0.3) == doctest::Approx(std::sqrt(1.16)));
    CHECK(total_energy(m, -0.7) == doctest::Approx(std::sqrt(2.16)));
    // at p_par = 0 and p_perp = 0 the coupling is the field itself
    CHECK(coupling_q(ModeParams{0.2, 0.0}, 0.05, 0.2) == doctest::Approx(0.05));
}

TEST_CASE("the right-hand side preserves the conservation law") {
    const FieldConfig field{{ChirpedPulse{0.1, 0.02, 100.0, 0.0003}}};
    const ModeParams m{-1.3, 0.25};
    for (double t : {-120.0, 0.0, 33.0}) {
        // a state on the invariant surface (1 - 2f)^2 + g^2 + w^2 = 1
        const double f = 0.01, g = 0.1;
        const double w = std::sqrt(1.0 - (1 - 2 * f) * (1 - 2 * f) - g * g);
        ModeState s(f, g, w, 0.8);
        CHECK(std::abs(conservation_residual(s)) < 1e-15);
        const ModeState d = mode_rhs(s, m, t, field);
        const double dI = -4.0 * (1 - 2 * f) * d[kF] + 2 * g * d[kG] + 2 * w * d[kW];
        CHECK(std::abs(dI) < 1e-15);
        CHECK(d[kA] == -field_strength(field, t));
    }
}

}
