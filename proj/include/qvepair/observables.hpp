#ifndef QVEPAIR_OBSERVABLES_HPP
#define QVEPAIR_OBSERVABLES_HPP

#include <Eigen/Core>
#include <span>
#include <stdexcept>
#include <string>

#include "qvepair/spectrum.hpp"

namespace qvepair {

enum class DensityMode { Reduced1D, Cylindrical3D };

std::string to_string(DensityMode mode);
DensityMode density_mode_from_string(const std::string& text);  ///< throws std::invalid_argument

struct DensityResult {
    double value = 0.0;
    DensityMode mode = DensityMode::Reduced1D;
    Eigen::Index n_par = 0;
    Eigen::Index n_perp = 0;  ///< 0 for Reduced1D
    double range_lo = 0.0;    ///< longitudinal range of the grid
    double range_hi = 0.0;
    /// |n(full grid) - n(every other point)| / n(full grid): the change a
    /// doubling of resolution produced on the data at hand.
    double refinement_change = 0.0;
};

class GridTooCoarse : public std::runtime_error {
public:
    GridTooCoarse(double change, double tolerance);
    double change;
    double tolerance;
};

struct DensityOptions {
    double refinement_tolerance = 0.01;
    bool strict = true;  ///< throw GridTooCoarse instead of only reporting refinement_change
};

/// 2/(2 pi) int f dP3 by composite trapezoid: the p_perp = 0 line density.
DensityResult number_density_reduced(const Spectrum& spectrum, const DensityOptions& opts = {});

/// 2/(2 pi)^2 int int f(P3, p_perp) p_perp dp_perp dP3 assuming cylindrical
/// symmetry. Sheets share one P3 grid and have p_perp strictly increasing from 0.
DensityResult number_density_3d(std::span<const Spectrum> sheets, const DensityOptions& opts = {});

enum class MomentumAxis { Canonical, Kinetic };

struct Peak {
    double momentum = 0.0;
    double f_max = 0.0;
    Eigen::Index index = 0;
};

/// Grid point with maximal f; ties go to the smallest momentum.
Peak spectrum_peak(const Spectrum& spectrum, MomentumAxis axis = MomentumAxis::Canonical);

/// peak(spectrum).momentum - peak(reference).momentum
double spectrum_shift(const Spectrum& spectrum, const Spectrum& reference,
                      MomentumAxis axis = MomentumAxis::Canonical);

/// max |f(P3) - f(2 center - P3)| / f_max over grid points whose mirror
/// image lies inside the grid; the mirrored value is linearly interpolated.
double mirror_asymmetry(const Spectrum& spectrum, double center);

/// Composite trapezoid of y over strictly increasing x.
template <typename DerivedX, typename DerivedY>
double trapezoid(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y) {
    const Eigen::Index n = x.size();
    if (n < 2) return 0.0;
    const auto dx = x.tail(n - 1) - x.head(n - 1);
    const auto mid = 0.5 * (y.tail(n - 1) + y.head(n - 1));
    return (dx.array() * mid.array()).sum();
}

}  // namespace qvepair

#endif  // QVEPAIR_OBSERVABLES_HPP
