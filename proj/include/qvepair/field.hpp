#ifndef QVEPAIR_FIELD_HPP
#define QVEPAIR_FIELD_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qvepair {

// Natural units throughout: m_e = hbar = c = 1, field strengths in units of
// the critical field, so e*E is the dimensionless field value.

enum class ChirpProfile {
    Constant,  ///< b(t) = chirp for all t
    SignFlip,  ///< b(t) = sign*chirp for t <= 0, -sign*chirp for t > 0
};

/// One Gaussian pulse E0 exp(-t^2/2tau^2) cos(b(t) t^2 + omega t).
struct ChirpedPulse {
    double amplitude = 0.0;
    double carrier_frequency = 0.0;
    double width = 1.0;
    double chirp = 0.0;
    ChirpProfile profile = ChirpProfile::Constant;
    int first_half_sign = +1;  ///< only read for SignFlip

    /// Chirp parameter in effect at time t (the t <= 0 branch takes the first-half sign).
    template <typename Scalar>
    Scalar chirp_at(Scalar t) const {
        if (profile == ChirpProfile::Constant) return Scalar(chirp);
        const Scalar signed_chirp = Scalar(first_half_sign) * Scalar(chirp);
        return t <= Scalar(0) ? signed_chirp : -signed_chirp;
    }

    template <typename Scalar>
    Scalar envelope(Scalar t) const {
        using std::exp;
        const Scalar s = t / Scalar(width);
        return exp(Scalar(-0.5) * s * s);
    }

    template <typename Scalar>
    Scalar phase(Scalar t) const {
        return chirp_at(t) * t * t + Scalar(carrier_frequency) * t;
    }

    template <typename Scalar>
    Scalar operator()(Scalar t) const {
        using std::cos;
        return Scalar(amplitude) * envelope(t) * cos(phase(t));
    }
};

/// Superposition of chirped pulses; one entry is a one-color field, two a two-color field.
struct FieldConfig {
    std::vector<ChirpedPulse> pulses;
};

template <typename Scalar>
Scalar field_strength(const FieldConfig& config, Scalar t) {
    Scalar sum(0);
    for (const auto& pulse : config.pulses) sum += pulse(t);
    return sum;
}

/// Exact phase derivative 2 b(t) t + omega of one pulse. Equals omega at t = 0.
double instantaneous_frequency(const ChirpedPulse& pulse, double t);

/// Largest |instantaneous frequency| over [t0, t1] among pulses whose
/// envelope-weighted amplitude anywhere in the interval reaches `floor`.
double max_field_frequency(const FieldConfig& config, double t0, double t1, double floor = 0.0);

double total_amplitude(const FieldConfig& config);
double max_width(const FieldConfig& config);

/// Default integration window [-8 tau_max, 8 tau_max].
std::pair<double, double> default_window(const FieldConfig& config);

struct FieldViolation {
    std::size_t pulse_index = 0;  ///< meaningless for config-level violations
    std::string field;            ///< offending member, e.g. "chirp"
    std::string message;
};

struct ValidationPolicy {
    /// Require |chirp| < carrier_frequency / width. The published parameter
    /// sets exceed this bound in several experiments, so it can be waived.
    bool enforce_chirp_bound = true;
};

/// Every violated invariant, in pulse order. Empty means valid.
std::vector<FieldViolation> validate(const FieldConfig& config, const ValidationPolicy& policy = {});

/// Throws std::invalid_argument listing all violations when validate() is non-empty.
void require_valid(const FieldConfig& config, const ValidationPolicy& policy = {});

/// FNV-1a hash over the bit patterns of every pulse parameter.
std::uint64_t fingerprint(const FieldConfig& config);

std::string to_string(ChirpProfile profile);

}  // namespace qvepair

#endif  // QVEPAIR_FIELD_HPP
