#include "qvepair/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace qvepair {

std::string to_string(DensityMode mode) { return mode == DensityMode::Reduced1D ? "reduced1d" : "cylindrical3d"; }

DensityMode density_mode_from_string(const std::string& text) {
    if (text == "reduced1d") return DensityMode::Reduced1D;
    if (text == "cylindrical3d") return DensityMode::Cylindrical3D;
    throw std::invalid_argument("unknown density mode '" + text + "' (expected reduced1d or cylindrical3d)");
}

namespace {

std::string coarse_message(double change, double tolerance) {
    std::ostringstream msg;
    msg << "momentum grid too coarse: halving the resolution changes the density by " << 100.0 * change
        << "% (tolerance " << 100.0 * tolerance << "%)";
    return msg.str();
}

// 0, 2, 4, ... plus the last index when it is odd.
std::vector<Eigen::Index> every_other(Eigen::Index n) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < n; i += 2) idx.push_back(i);
    if (n > 0 && idx.back() != n - 1) idx.push_back(n - 1);
    return idx;
}

double relative_change(double fine, double coarse) {
    if (fine == 0.0) return coarse == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(fine - coarse) / std::abs(fine);
}

void finish(DensityResult& r, const DensityOptions& opts) {
    if (opts.strict && r.refinement_change > opts.refinement_tolerance)
        throw GridTooCoarse(r.refinement_change, opts.refinement_tolerance);
}

}  // namespace

GridTooCoarse::GridTooCoarse(double c, double t) : std::runtime_error(coarse_message(c, t)), change(c), tolerance(t) {}

DensityResult number_density_reduced(const Spectrum& spectrum, const DensityOptions& opts) {
    check_spectrum(spectrum);
    const auto& p = spectrum.canonical_momentum;
    const auto& f = spectrum.f;
    const double norm = 2.0 / (2.0 * std::numbers::pi);

    DensityResult r;
    r.mode = DensityMode::Reduced1D;
    r.n_par = p.size();
    r.range_lo = p[0];
    r.range_hi = p[p.size() - 1];
    r.value = norm * trapezoid(p, f);

    const auto idx = every_other(p.size());
    const double coarse = norm * trapezoid(p(idx), f(idx));
    r.refinement_change = relative_change(r.value, coarse);
    finish(r, opts);
    return r;
}

DensityResult number_density_3d(std::span<const Spectrum> sheets, const DensityOptions& opts) {
    if (sheets.size() < 2) throw std::invalid_argument("3-D density needs at least two transverse-momentum sheets");
    for (const auto& s : sheets) check_spectrum(s);
    if (sheets.front().transverse_momentum != 0.0)
        throw std::invalid_argument("transverse momenta must start at 0");
    const Eigen::VectorXd& p = sheets.front().canonical_momentum;
    const auto n_perp = static_cast<Eigen::Index>(sheets.size());
    Eigen::VectorXd pt(n_perp);
    for (Eigen::Index k = 0; k < n_perp; ++k) {
        const auto& s = sheets[static_cast<std::size_t>(k)];
        if (s.canonical_momentum.size() != p.size() || s.canonical_momentum != p)
            throw std::invalid_argument("all sheets must share the longitudinal grid");
        pt[k] = s.transverse_momentum;
        if (k > 0 && !(pt[k] > pt[k - 1])) throw std::invalid_argument("transverse momenta must be strictly increasing");
    }

    const double norm = 2.0 / std::pow(2.0 * std::numbers::pi, 2);
    // Inner integral over P3 on each sheet, outer over p_perp with weight p_perp.
    auto integrate = [&](const std::vector<Eigen::Index>& ip, const std::vector<Eigen::Index>& ik) {
        Eigen::VectorXd inner(static_cast<Eigen::Index>(ik.size()));
        Eigen::VectorXd pts(static_cast<Eigen::Index>(ik.size()));
        for (std::size_t j = 0; j < ik.size(); ++j) {
            const auto& s = sheets[static_cast<std::size_t>(ik[j])];
            inner[static_cast<Eigen::Index>(j)] = trapezoid(p(ip), s.f(ip)) * s.transverse_momentum;
            pts[static_cast<Eigen::Index>(j)] = s.transverse_momentum;
        }
        return norm * trapezoid(pts, inner);
    };

    std::vector<Eigen::Index> all_p(static_cast<std::size_t>(p.size())), all_k(static_cast<std::size_t>(n_perp));
    for (Eigen::Index i = 0; i < p.size(); ++i) all_p[static_cast<std::size_t>(i)] = i;
    for (Eigen::Index k = 0; k < n_perp; ++k) all_k[static_cast<std::size_t>(k)] = k;

    DensityResult r;
    r.mode = DensityMode::Cylindrical3D;
    r.n_par = p.size();
    r.n_perp = n_perp;
    r.range_lo = p[0];
    r.range_hi = p[p.size() - 1];
    r.value = integrate(all_p, all_k);
    r.refinement_change = relative_change(r.value, integrate(every_other(p.size()), every_other(n_perp)));
    finish(r, opts);
    return r;
}

Peak spectrum_peak(const Spectrum& spectrum, MomentumAxis axis) {
    if (spectrum.size() == 0) throw std::invalid_argument("spectrum_peak: empty spectrum");
    const Eigen::VectorXd& momentum =
        axis == MomentumAxis::Canonical ? spectrum.canonical_momentum : spectrum.kinetic_momentum;
    Peak best{momentum[0], spectrum.f[0], 0};
    for (Eigen::Index i = 1; i < spectrum.size(); ++i) {
        const double f = spectrum.f[i];
        if (f > best.f_max || (f == best.f_max && momentum[i] < best.momentum)) best = {momentum[i], f, i};
    }
    return best;
}

double spectrum_shift(const Spectrum& spectrum, const Spectrum& reference, MomentumAxis axis) {
    return spectrum_peak(spectrum, axis).momentum - spectrum_peak(reference, axis).momentum;
}

double mirror_asymmetry(const Spectrum& spectrum, double center) {
    check_spectrum(spectrum);
    const auto& p = spectrum.canonical_momentum;
    const auto& f = spectrum.f;
    const double f_max = f.maxCoeff();
    if (f_max == 0.0) return 0.0;
    const Eigen::Index n = p.size();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double mirror = 2.0 * center - p[i];
        if (mirror < p[0] || mirror > p[n - 1]) continue;
        const auto* it = std::lower_bound(p.data(), p.data() + n, mirror);
        Eigen::Index j = it - p.data();
        double value;
        if (p[j] == mirror) {
            value = f[j];
        } else {
            const double w = (mirror - p[j - 1]) / (p[j] - p[j - 1]);
            value = (1.0 - w) * f[j - 1] + w * f[j];
        }
        worst = std::max(worst, std::abs(f[i] - value));
    }
    return worst / f_max;
}

}  // namespace qvepair
