#ifndef QVEPAIR_SOLVER_HPP
#define QVEPAIR_SOLVER_HPP

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qvepair/field.hpp"
#include "qvepair/kinematics.hpp"
#include "qvepair/spectrum.hpp"

namespace qvepair {

struct SolverOptions {
    double rtol = 1e-8;
    double atol = 1e-12;
    std::optional<double> t_start;  ///< unset: -8 tau_max
    std::optional<double> t_end;    ///< unset: +8 tau_max
    double max_step = 1.0;
    bool record_series = false;
    std::size_t series_stride = 1;
};

/// Validates options against a field (fills the default window) and returns [t_start, t_end].
std::pair<double, double> resolve_window(const SolverOptions& opts, const FieldConfig& field);

/// Every violated option invariant as a human-readable message.
std::vector<std::string> validate(const SolverOptions& opts);

struct SeriesSample {
    double t, f, g, w, A;
};

struct ModeResult {
    double final_f = 0.0;       ///< occupation read out through the conservation law
    double integrated_f = 0.0;  ///< the f component of the integrated state
    double final_g = 0.0;
    double final_w = 0.0;
    double final_A = 0.0;
    double kinetic_momentum_final = 0.0;  ///< P3 - A(t_end)
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    double max_conservation_residual = 0.0;  ///< over every accepted step
    std::vector<SeriesSample> series;
};

class SolverError : public std::runtime_error {
public:
    enum class Kind { NonConvergence, ToleranceViolation };

    SolverError(Kind kind, const std::string& what, std::optional<std::size_t> grid_index = std::nullopt)
        : std::runtime_error(what), kind_(kind), grid_index_(grid_index) {}

    Kind kind() const { return kind_; }
    std::optional<std::size_t> grid_index() const { return grid_index_; }

private:
    Kind kind_;
    std::optional<std::size_t> grid_index_;
};

/// f from (g, w) via (1 - 2f)^2 = 1 - g^2 - w^2, taking the branch of the
/// integrated f. For f << 1 the (g, w) amplitude 2 sqrt(f) carries the
/// occupation with far less absolute error than the f component itself.
double occupation_from_invariant(const ModeState& state);

/// Largest step allowed from time t for a mode whose kinetic momentum is p_par:
/// 0.1 / max(bound on omega(p, t) over the step, fastest live field frequency).
double oscillation_step_cap(const ModeParams& params, double A, double t, const FieldConfig& field,
                            double amplitude_floor);

/// Integrates one mode from vacuum data f = g = w = A = 0 at t_start to t_end.
ModeResult solve_mode(const ModeParams& params, const FieldConfig& field, const SolverOptions& opts);

/// Canonical momenta at a single p_perp.
struct MomentumGrid {
    Eigen::VectorXd canonical_momentum;
    double transverse_momentum = 0.0;

    /// n uniformly spaced points on [lo, hi] inclusive.
    static MomentumGrid uniform(double lo, double hi, Eigen::Index n, double transverse_momentum = 0.0);
};

/// Throws std::invalid_argument unless non-empty, finite and strictly increasing.
void check_grid(const MomentumGrid& grid);

struct SpectrumRun {
    Spectrum spectrum;
    Eigen::VectorXd max_conservation_residual;  ///< per grid point
    Eigen::Matrix<std::size_t, Eigen::Dynamic, 1> accepted_steps;
};

/// solve_mode over every grid point. Output is ordered by grid index and
/// bit-identical for any thread count. The first failing grid index wins.
SpectrumRun solve_spectrum(const MomentumGrid& grid, const FieldConfig& field, const SolverOptions& opts,
                           unsigned threads = 0);

/// Vector potential A(t) = -int_{t_start}^t E over the window, integrated on
/// its own to high accuracy; returns (min A, max A, A(t_end)).
struct PotentialSummary {
    double min = 0.0;
    double max = 0.0;
    double final = 0.0;
};
PotentialSummary potential_summary(const FieldConfig& field, const SolverOptions& opts);

}  // namespace qvepair

#endif  // QVEPAIR_SOLVER_HPP
