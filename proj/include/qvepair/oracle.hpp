#ifndef QVEPAIR_ORACLE_HPP
#define QVEPAIR_ORACLE_HPP

#include <optional>
#include <stdexcept>

#include "qvepair/field.hpp"
#include "qvepair/kinematics.hpp"

namespace qvepair {

// Reference solver for the integro-differential form
//
//   df/dt = q(t)/2 int_{t0}^{t} q(t') [1 - 2 f(t')] cos(2 [Phi(t) - Phi(t')]) dt'
//
// on a uniform grid. A, Phi = int omega and the history integral all use the
// trapezoidal rule, so the method is second order and costs O(N^2). It shares
// no code with the ODE integrator and exists to check it.

struct OracleOptions {
    double step = 0.0;              ///< requested uniform step; the grid uses span / ceil(span / step)
    std::optional<double> t_start;  ///< unset: -8 tau_max
    std::optional<double> t_end;    ///< unset: +8 tau_max
};

class StepTooLarge : public std::invalid_argument {
public:
    StepTooLarge(double step, double limit);
    double step;
    double limit;
};

/// min(2 pi / (64 omega_max), tau_min / 1000), omega_max bounding both the
/// mode energy and the instantaneous field frequency over the window.
double oracle_step_limit(const ModeParams& params, const FieldConfig& field, double t_start, double t_end);

struct OracleResult {
    double final_f = 0.0;
    double final_A = 0.0;
    double step = 0.0;  ///< grid spacing actually used
    long steps = 0;
};

/// Throws StepTooLarge when opts.step exceeds oracle_step_limit.
OracleResult oracle_solve_mode(const ModeParams& params, const FieldConfig& field, const OracleOptions& opts);

}  // namespace qvepair

#endif  // QVEPAIR_ORACLE_HPP
