#ifndef QVEPAIR_SPECTRUM_HPP
#define QVEPAIR_SPECTRUM_HPP

#include <Eigen/Core>
#include <cstdint>

namespace qvepair {

/// Asymptotic distribution sampled on a longitudinal grid at fixed p_perp.
struct Spectrum {
    Eigen::VectorXd canonical_momentum;  ///< P3, strictly increasing
    Eigen::VectorXd kinetic_momentum;    ///< P3 - A(t_end)
    Eigen::VectorXd f;
    double transverse_momentum = 0.0;
    std::uint64_t field_fingerprint = 0;

    Eigen::Index size() const { return f.size(); }
};

/// Throws std::invalid_argument unless sizes agree, P3 is strictly increasing and f >= 0.
void check_spectrum(const Spectrum& spectrum);

}  // namespace qvepair

#endif  // QVEPAIR_SPECTRUM_HPP
