#ifndef QVEPAIR_INTEGRATOR_HPP
#define QVEPAIR_INTEGRATOR_HPP

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace qvepair {

class StepUnderflow : public std::runtime_error {
public:
    StepUnderflow(double t, double h)
        : std::runtime_error("step size underflow at t = " + std::to_string(t) + " (h = " + std::to_string(h) + ")"),
          time(t),
          step(h) {}
    double time;
    double step;
};

struct DopriOptions {
    double rtol = 1e-8;
    double atol = 1e-12;
    double initial_step = 0.0;  ///< 0 picks h = min(max_step, 1e-3 * span)
    double max_step = std::numeric_limits<double>::infinity();
    double min_step_fraction = 1e-12;  ///< underflow threshold relative to |t1 - t0|
    // PI controller constants (Gustafsson form as used in DOPRI5)
    double safety = 0.9;
    double beta = 0.04;
    double fac_min = 0.2;  ///< largest allowed shrink is h * fac_min
    double fac_max = 10.0;
};

struct DopriStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t evaluations = 0;
};

/// Dormand-Prince 5(4) with FSAL and PI step control.
///
/// rhs(t, y) -> dy/dt; step_cap(t, y) -> largest admissible step from state y
/// at time t (on top of opts.max_step); observer(t, y) runs after every
/// accepted step and may throw to abort. y is advanced in place to t1.
template <typename Scalar, int N, typename Rhs, typename StepCap, typename Observer>
DopriStats integrate_dopri5(Rhs&& rhs, Eigen::Matrix<Scalar, N, 1>& y, Scalar t0, Scalar t1,
                            const DopriOptions& opts, StepCap&& step_cap, Observer&& observer) {
    using Vec = Eigen::Matrix<Scalar, N, 1>;

    constexpr Scalar c2 = Scalar(1) / 5, c3 = Scalar(3) / 10, c4 = Scalar(4) / 5, c5 = Scalar(8) / 9;
    constexpr Scalar a21 = Scalar(1) / 5;
    constexpr Scalar a31 = Scalar(3) / 40, a32 = Scalar(9) / 40;
    constexpr Scalar a41 = Scalar(44) / 45, a42 = Scalar(-56) / 15, a43 = Scalar(32) / 9;
    constexpr Scalar a51 = Scalar(19372) / 6561, a52 = Scalar(-25360) / 2187, a53 = Scalar(64448) / 6561,
                     a54 = Scalar(-212) / 729;
    constexpr Scalar a61 = Scalar(9017) / 3168, a62 = Scalar(-355) / 33, a63 = Scalar(46732) / 5247,
                     a64 = Scalar(49) / 176, a65 = Scalar(-5103) / 18656;
    constexpr Scalar a71 = Scalar(35) / 384, a73 = Scalar(500) / 1113, a74 = Scalar(125) / 192,
                     a75 = Scalar(-2187) / 6784, a76 = Scalar(11) / 84;
    // error coefficients: 5th order weights minus embedded 4th order weights
    constexpr Scalar e1 = Scalar(71) / 57600, e3 = Scalar(-71) / 16695, e4 = Scalar(71) / 1920,
                     e5 = Scalar(-17253) / 339200, e6 = Scalar(22) / 525, e7 = Scalar(-1) / 40;

    DopriStats stats;
    const Scalar span = t1 - t0;
    if (!(span > Scalar(0))) throw std::invalid_argument("integrate_dopri5: t1 must exceed t0");
    const Scalar h_floor = Scalar(opts.min_step_fraction) * span;
    const Scalar expo = Scalar(0.2) - Scalar(opts.beta) * Scalar(0.75);

    Scalar t = t0;
    Vec k1 = rhs(t, y);
    ++stats.evaluations;
    Scalar h = opts.initial_step > 0 ? Scalar(opts.initial_step) : Scalar(1e-3) * span;
    Scalar err_old = Scalar(1e-4);
    bool last_rejected = false;

    while (t < t1) {
        const Scalar cap = std::min<Scalar>(Scalar(opts.max_step), Scalar(step_cap(t, y)));
        h = std::min(h, cap);
        bool final_step = false;
        if (t + h >= t1 || t + Scalar(1.0000001) * h >= t1) {
            h = t1 - t;
            final_step = true;
        }
        if (h < h_floor) throw StepUnderflow(double(t), double(h));

        const Vec k2 = rhs(t + c2 * h, Vec(y + h * (a21 * k1)));
        const Vec k3 = rhs(t + c3 * h, Vec(y + h * (a31 * k1 + a32 * k2)));
        const Vec k4 = rhs(t + c4 * h, Vec(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
        const Vec k5 = rhs(t + c5 * h, Vec(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
        const Vec k6 = rhs(t + h, Vec(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
        const Vec y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const Vec k7 = rhs(final_step ? t1 : t + h, y_new);
        stats.evaluations += 6;

        const Vec local = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const Vec scale = (Scalar(opts.atol) + Scalar(opts.rtol) * y.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array())
                              .matrix();
        const Scalar err = local.cwiseQuotient(scale).cwiseAbs().maxCoeff();

        if (!(err == err)) throw StepUnderflow(double(t), double(h));  // NaN in the stages

        if (err <= Scalar(1)) {
            t = final_step ? t1 : t + h;
            y = y_new;
            k1 = k7;
            ++stats.accepted;
            observer(t, static_cast<const Vec&>(y));

            using std::pow;
            Scalar fac = pow(std::max(err, Scalar(1e-10)), expo) / pow(err_old, Scalar(opts.beta));
            fac = std::clamp(fac / Scalar(opts.safety), Scalar(1) / Scalar(opts.fac_max), Scalar(1) / Scalar(opts.fac_min));
            Scalar h_next = h / fac;
            if (last_rejected) h_next = std::min(h_next, h);
            err_old = std::max(err, Scalar(1e-4));
            last_rejected = false;
            h = h_next;
        } else {
            using std::pow;
            const Scalar fac = std::min(Scalar(1) / Scalar(opts.fac_min), pow(err, expo) / Scalar(opts.safety));
            h = h / fac;
            ++stats.rejected;
            last_rejected = true;
        }
    }
    return stats;
}

}  // namespace qvepair

#endif  // QVEPAIR_INTEGRATOR_HPP
