#include "qvepair/oracle.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qvepair {

StepTooLarge::StepTooLarge(double s, double l)
    : std::invalid_argument("oracle step " + std::to_string(s) + " exceeds limit " + std::to_string(l)),
      step(s),
      limit(l) {}

namespace {

std::pair<double, double> oracle_window(const OracleOptions& opts, const FieldConfig& field) {
    const auto [lo, hi] = default_window(field);
    const double t0 = opts.t_start.value_or(lo);
    const double t1 = opts.t_end.value_or(hi);
    if (!(t0 < t1)) throw std::invalid_argument("oracle: t_start must be < t_end");
    return {t0, t1};
}

struct Samples {
    Eigen::ArrayXd t, E, A, omega;
};

// Time grid with A accumulated by the trapezoidal rule from dA/dt = -E.
Samples sample(const ModeParams& params, const FieldConfig& field, double t0, double t1, long n) {
    Samples s;
    s.t = Eigen::ArrayXd::LinSpaced(n + 1, t0, t1);
    const double h = (t1 - t0) / static_cast<double>(n);
    s.E.resize(n + 1);
    s.A.resize(n + 1);
    s.omega.resize(n + 1);
    for (long i = 0; i <= n; ++i) s.E[i] = field_strength(field, s.t[i]);
    s.A[0] = 0.0;
    for (long i = 0; i < n; ++i) s.A[i + 1] = s.A[i] - 0.5 * h * (s.E[i] + s.E[i + 1]);
    for (long i = 0; i <= n; ++i) s.omega[i] = total_energy(params, s.A[i]);
    return s;
}

}  // namespace

double oracle_step_limit(const ModeParams& params, const FieldConfig& field, double t_start, double t_end) {
    // A coarse pass is enough to bound the energy: A varies on the pulse time scale.
    double tau_min = std::numeric_limits<double>::infinity();
    for (const auto& p : field.pulses) tau_min = std::min(tau_min, p.width);
    const long probe = std::max<long>(2000, static_cast<long>((t_end - t_start) / (0.01 * tau_min)));
    const Samples s = sample(params, field, t_start, t_end, probe);
    double omega_max = s.omega.maxCoeff();
    for (const auto& p : field.pulses)
        omega_max = std::max({omega_max, std::abs(instantaneous_frequency(p, t_start)),
                              std::abs(instantaneous_frequency(p, t_end)), p.carrier_frequency});
    return std::min(2.0 * std::numbers::pi / (64.0 * omega_max), tau_min / 1000.0);
}

OracleResult oracle_solve_mode(const ModeParams& params, const FieldConfig& field, const OracleOptions& opts) {
    if (field.pulses.empty()) throw std::invalid_argument("oracle: field has no pulses");
    const auto [t0, t1] = oracle_window(opts, field);
    const double limit = oracle_step_limit(params, field, t0, t1);
    if (!(opts.step > 0.0) || opts.step > limit) throw StepTooLarge(opts.step, limit);

    const long n = static_cast<long>(std::ceil((t1 - t0) / opts.step));
    const double h = (t1 - t0) / static_cast<double>(n);
    const Samples s = sample(params, field, t0, t1, n);

    const double eps_perp = params.transverse_energy();
    const Eigen::ArrayXd q = s.E * eps_perp / s.omega.square();

    // Phi by cumulative trapezoid; cos(2(Phi_n - Phi_j)) = c_n c_j + s_n s_j.
    Eigen::ArrayXd phi(n + 1);
    phi[0] = 0.0;
    for (long i = 0; i < n; ++i) phi[i + 1] = phi[i] + 0.5 * h * (s.omega[i] + s.omega[i + 1]);
    const Eigen::ArrayXd c = (2.0 * phi).cos();
    const Eigen::ArrayXd sn = (2.0 * phi).sin();

    // source_j = w_j q_j (1 - 2 f_j) without the end-point halving, stored as
    // separate cosine and sine projections.
    Eigen::ArrayXd src_c = Eigen::ArrayXd::Zero(n + 1);
    Eigen::ArrayXd src_s = Eigen::ArrayXd::Zero(n + 1);

    double f = 0.0;
    double rate_prev = 0.0;  // q_n I_n / 2 at the current node; I_0 = 0
    src_c[0] = 0.5 * h * q[0] * c[0];
    src_s[0] = 0.5 * h * q[0] * sn[0];

    for (long m = 1; m <= n; ++m) {
        // Trapezoid history sum over nodes 0..m-1 (node 0 half weight, already
        // folded into src), evaluated at the new time t_m.
        double sum_c = 0.0, sum_s = 0.0;
        for (long j = 0; j < m; ++j) {
            sum_c += src_c[j];
            sum_s += src_s[j];
        }
        const double history = c[m] * sum_c + sn[m] * sum_s;

        // f_m = f_{m-1} + h/2 (rate_{m-1} + q_m/2 [history + h/2 q_m (1 - 2 f_m)]) solved for f_m.
        const double a = 0.25 * h * q[m];
        const double b = 0.5 * h * q[m];
        const double rhs = f + 0.5 * h * rate_prev + a * history + a * b;
        f = rhs / (1.0 + 2.0 * a * b);

        const double integral = history + b * (1.0 - 2.0 * f);
        rate_prev = 0.5 * q[m] * integral;

        // Interior nodes carry full weight h once a later node exists.
        src_c[m] = h * q[m] * (1.0 - 2.0 * f) * c[m];
        src_s[m] = h * q[m] * (1.0 - 2.0 * f) * sn[m];
    }

    OracleResult out;
    out.final_f = f;
    out.final_A = s.A[n];
    out.step = h;
    out.steps = n;
    return out;
}

}  // namespace qvepair
