#include "qvepair/spectrum.hpp"

#include <stdexcept>
#include <string>

namespace qvepair {

void check_spectrum(const Spectrum& s) {
    const Eigen::Index n = s.f.size();
    if (n == 0) throw std::invalid_argument("spectrum is empty");
    if (s.canonical_momentum.size() != n || s.kinetic_momentum.size() != n)
        throw std::invalid_argument("spectrum columns have mismatched lengths");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(s.f[i] >= 0.0)) throw std::invalid_argument("spectrum f < 0 at index " + std::to_string(i));
        if (i > 0 && !(s.canonical_momentum[i] > s.canonical_momentum[i - 1]))
            throw std::invalid_argument("spectrum momenta not strictly increasing at index " + std::to_string(i));
    }
}

}  // namespace qvepair
