#ifndef QVEPAIR_KINEMATICS_HPP
#define QVEPAIR_KINEMATICS_HPP

#include <Eigen/Core>
#include <cmath>

#include "qvepair/field.hpp"

namespace qvepair {

/// A momentum mode: conserved canonical longitudinal momentum P3 and p_perp.
struct ModeParams {
    double canonical_momentum = 0.0;
    double transverse_momentum = 0.0;

    /// eps_perp = sqrt(1 + p_perp^2)
    double transverse_energy() const { return std::sqrt(1.0 + transverse_momentum * transverse_momentum); }
};

/// State of one mode: (f, g, w) and the vector potential A with dA/dt = -E.
template <typename Scalar>
using ModeVector = Eigen::Matrix<Scalar, 4, 1>;

using ModeState = ModeVector<double>;

enum ModeComponent : Eigen::Index { kF = 0, kG = 1, kW = 2, kA = 3 };

/// omega(p, t) = sqrt(eps_perp^2 + (P3 - A)^2)
template <typename Scalar>
Scalar total_energy(const ModeParams& params, Scalar A) {
    using std::sqrt;
    const Scalar p_par = Scalar(params.canonical_momentum) - A;
    const Scalar pt = Scalar(params.transverse_momentum);
    return sqrt(Scalar(1) + pt * pt + p_par * p_par);
}

/// q(p, t) = E eps_perp / omega^2
template <typename Scalar>
Scalar coupling_q(const ModeParams& params, Scalar E, Scalar A) {
    const Scalar p_par = Scalar(params.canonical_momentum) - A;
    const Scalar pt = Scalar(params.transverse_momentum);
    const Scalar eps_perp_sq = Scalar(1) + pt * pt;
    using std::sqrt;
    return E * sqrt(eps_perp_sq) / (eps_perp_sq + p_par * p_par);
}

/// Right-hand side of the (f, g, w, A) system at time t.
template <typename Scalar>
ModeVector<Scalar> mode_rhs(const ModeVector<Scalar>& state, const ModeParams& params, Scalar t,
                            const FieldConfig& field) {
    const Scalar E = field_strength(field, t);
    const Scalar A = state[kA];
    const Scalar omega = total_energy(params, A);
    const Scalar q = coupling_q(params, E, A);
    ModeVector<Scalar> d;
    d[kF] = Scalar(0.5) * q * state[kG];
    d[kG] = q * (Scalar(1) - Scalar(2) * state[kF]) - Scalar(2) * omega * state[kW];
    d[kW] = Scalar(2) * omega * state[kG];
    d[kA] = -E;
    return d;
}

/// (1 - 2f)^2 + g^2 + w^2 - 1, zero along exact trajectories from vacuum data.
template <typename Derived>
typename Derived::Scalar conservation_residual(const Eigen::MatrixBase<Derived>& state) {
    using Scalar = typename Derived::Scalar;
    const Scalar u = Scalar(1) - Scalar(2) * state[kF];
    return u * u + state[kG] * state[kG] + state[kW] * state[kW] - Scalar(1);
}

}  // namespace qvepair

#endif  // QVEPAIR_KINEMATICS_HPP
