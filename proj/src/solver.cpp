#include "qvepair/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qvepair/integrator.hpp"
#include "qvepair/parallel.hpp"

namespace qvepair {

std::vector<std::string> validate(const SolverOptions& opts) {
    std::vector<std::string> out;
    if (!(opts.rtol > 0.0)) out.emplace_back("rtol must be > 0");
    if (!(opts.atol > 0.0)) out.emplace_back("atol must be > 0");
    if (!(opts.max_step > 0.0)) out.emplace_back("max_step must be > 0");
    if (opts.series_stride == 0) out.emplace_back("series_stride must be positive");
    if (opts.t_start && opts.t_end && !(*opts.t_start < *opts.t_end)) out.emplace_back("t_start must be < t_end");
    return out;
}

std::pair<double, double> resolve_window(const SolverOptions& opts, const FieldConfig& field) {
    const auto problems = validate(opts);
    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "invalid solver options:";
        for (const auto& p : problems) msg << "\n  " << p;
        throw std::invalid_argument(msg.str());
    }
    const auto [lo, hi] = default_window(field);
    const double t0 = opts.t_start.value_or(lo);
    const double t1 = opts.t_end.value_or(hi);
    if (!(t0 < t1)) throw std::invalid_argument("invalid solver options:\n  t_start must be < t_end");
    return {t0, t1};
}

double occupation_from_invariant(const ModeState& state) {
    const double gw = std::min(1.0, state[kG] * state[kG] + state[kW] * state[kW]);
    const double root = std::sqrt(1.0 - gw);
    if (1.0 - 2.0 * state[kF] >= 0.0) return gw / (2.0 * (1.0 + root));
    return 0.5 * (1.0 + root);
}

double oscillation_step_cap(const ModeParams& params, double A, double t, const FieldConfig& field,
                            double amplitude_floor) {
    // omega >= 1 keeps every cap below 0.1, so a 0.1 horizon covers the step.
    constexpr double horizon = 0.1;
    const double p_bound = std::abs(params.canonical_momentum - A) + total_amplitude(field) * horizon;
    const double eps = params.transverse_energy();
    const double omega_bound = std::sqrt(eps * eps + p_bound * p_bound);
    const double field_freq = max_field_frequency(field, t, t + horizon, amplitude_floor);
    return 0.1 / std::max(omega_bound, field_freq);
}

ModeResult solve_mode(const ModeParams& params, const FieldConfig& field, const SolverOptions& opts) {
    if (field.pulses.empty()) throw std::invalid_argument("solve_mode: field has no pulses");
    const auto [t0, t1] = resolve_window(opts, field);

    ModeResult result;
    ModeState y = ModeState::Zero();

    DopriOptions dopri;
    dopri.rtol = opts.rtol;
    dopri.atol = opts.atol;
    dopri.max_step = opts.max_step;

    const double residual_bound = 100.0 * opts.rtol;
    std::size_t since_sample = 0;
    if (opts.record_series) result.series.push_back({t0, 0.0, 0.0, 0.0, 0.0});

    auto rhs = [&](double t, const ModeState& s) { return mode_rhs(s, params, t, field); };
    auto cap = [&](double t, const ModeState& s) {
        return oscillation_step_cap(params, s[kA], t, field, opts.atol);
    };
    auto observe = [&](double t, const ModeState& s) {
        const double r = std::abs(conservation_residual(s));
        result.max_conservation_residual = std::max(result.max_conservation_residual, r);
        if (!(r <= residual_bound)) {
            std::ostringstream msg;
            msg.precision(6);
            msg << "conservation residual " << r << " exceeds " << residual_bound << " at t = " << t
                << " (P3 = " << params.canonical_momentum << ")";
            throw SolverError(SolverError::Kind::ToleranceViolation, msg.str());
        }
        if (opts.record_series && (++since_sample == opts.series_stride || t == t1)) {
            result.series.push_back({t, s[kF], s[kG], s[kW], s[kA]});
            since_sample = 0;
        }
    };

    DopriStats stats;
    try {
        stats = integrate_dopri5(rhs, y, t0, t1, dopri, cap, observe);
    } catch (const StepUnderflow& e) {
        throw SolverError(SolverError::Kind::NonConvergence,
                          std::string(e.what()) + " (P3 = " + std::to_string(params.canonical_momentum) + ")");
    }

    result.integrated_f = y[kF];
    result.final_f = occupation_from_invariant(y);
    result.final_g = y[kG];
    result.final_w = y[kW];
    result.final_A = y[kA];
    result.kinetic_momentum_final = params.canonical_momentum - y[kA];
    result.accepted_steps = stats.accepted;
    result.rejected_steps = stats.rejected;
    return result;
}

MomentumGrid MomentumGrid::uniform(double lo, double hi, Eigen::Index n, double transverse_momentum) {
    MomentumGrid grid;
    if (n == 1)
        grid.canonical_momentum = Eigen::VectorXd::Constant(1, lo);
    else
        grid.canonical_momentum = Eigen::VectorXd::LinSpaced(n, lo, hi);
    grid.transverse_momentum = transverse_momentum;
    return grid;
}

void check_grid(const MomentumGrid& grid) {
    const auto& p = grid.canonical_momentum;
    if (p.size() == 0) throw std::invalid_argument("momentum grid is empty");
    if (!p.allFinite()) throw std::invalid_argument("momentum grid has non-finite entries");
    for (Eigen::Index i = 1; i < p.size(); ++i)
        if (!(p[i] > p[i - 1]))
            throw std::invalid_argument("momentum grid must be strictly increasing (index " + std::to_string(i) + ")");
    if (!(grid.transverse_momentum >= 0.0)) throw std::invalid_argument("transverse momentum must be >= 0");
}

SpectrumRun solve_spectrum(const MomentumGrid& grid, const FieldConfig& field, const SolverOptions& opts,
                           unsigned threads) {
    check_grid(grid);
    resolve_window(opts, field);
    const Eigen::Index n = grid.canonical_momentum.size();

    SpectrumRun run;
    run.spectrum.canonical_momentum = grid.canonical_momentum;
    run.spectrum.kinetic_momentum.resize(n);
    run.spectrum.f.resize(n);
    run.spectrum.transverse_momentum = grid.transverse_momentum;
    run.spectrum.field_fingerprint = fingerprint(field);
    run.max_conservation_residual.resize(n);
    run.accepted_steps.resize(n);

    SolverOptions mode_opts = opts;
    mode_opts.record_series = false;

    const auto errors = parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
        const auto idx = static_cast<Eigen::Index>(i);
        const ModeParams params{grid.canonical_momentum[idx], grid.transverse_momentum};
        const ModeResult r = solve_mode(params, field, mode_opts);
        run.spectrum.kinetic_momentum[idx] = r.kinetic_momentum_final;
        run.spectrum.f[idx] = r.final_f;
        run.max_conservation_residual[idx] = r.max_conservation_residual;
        run.accepted_steps[idx] = r.accepted_steps;
    });

    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const SolverError& e) {
            throw SolverError(e.kind(), "grid index " + std::to_string(i) + ": " + e.what(), i);
        }
    }
    return run;
}

PotentialSummary potential_summary(const FieldConfig& field, const SolverOptions& opts) {
    const auto [t0, t1] = resolve_window(opts, field);
    Eigen::Matrix<double, 1, 1> A = Eigen::Matrix<double, 1, 1>::Zero();
    PotentialSummary out;
    DopriOptions dopri;
    dopri.rtol = 1e-10;
    dopri.atol = 1e-13;
    auto rhs = [&](double t, const Eigen::Matrix<double, 1, 1>&) {
        return Eigen::Matrix<double, 1, 1>::Constant(-field_strength(field, t));
    };
    // Resolve the carrier: ten steps per fastest local period.
    auto cap = [&](double t, const Eigen::Matrix<double, 1, 1>&) {
        const double freq = max_field_frequency(field, t, t + 1.0, 0.0);
        return freq > 0.0 ? 0.6 / freq : 1.0;
    };
    auto observe = [&](double, const Eigen::Matrix<double, 1, 1>& s) {
        out.min = std::min(out.min, s[0]);
        out.max = std::max(out.max, s[0]);
    };
    integrate_dopri5(rhs, A, t0, t1, dopri, cap, observe);
    out.final = A[0];
    return out;
}

}  // namespace qvepair
