#include "qvepair/field.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace qvepair {

double instantaneous_frequency(const ChirpedPulse& pulse, double t) {
    return 2.0 * pulse.chirp_at(t) * t + pulse.carrier_frequency;
}

double max_field_frequency(const FieldConfig& config, double t0, double t1, double floor) {
    double result = 0.0;
    for (const auto& pulse : config.pulses) {
        // Envelope is largest at the point of the interval closest to 0.
        const double t_near = (t0 <= 0.0 && t1 >= 0.0) ? 0.0 : (std::abs(t0) < std::abs(t1) ? t0 : t1);
        if (pulse.amplitude * pulse.envelope(t_near) < floor) continue;
        // 2 b(t) t + omega is piecewise linear in t: extremes sit at the ends or at 0.
        double f = std::max(std::abs(instantaneous_frequency(pulse, t0)),
                            std::abs(instantaneous_frequency(pulse, t1)));
        if (t0 <= 0.0 && t1 >= 0.0) f = std::max(f, std::abs(pulse.carrier_frequency));
        result = std::max(result, f);
    }
    return result;
}

double total_amplitude(const FieldConfig& config) {
    double sum = 0.0;
    for (const auto& pulse : config.pulses) sum += std::abs(pulse.amplitude);
    return sum;
}

double max_width(const FieldConfig& config) {
    double w = 0.0;
    for (const auto& pulse : config.pulses) w = std::max(w, pulse.width);
    return w;
}

std::pair<double, double> default_window(const FieldConfig& config) {
    const double half = 8.0 * max_width(config);
    return {-half, half};
}

std::vector<FieldViolation> validate(const FieldConfig& config, const ValidationPolicy& policy) {
    std::vector<FieldViolation> out;
    if (config.pulses.empty()) {
        out.push_back({0, "pulses", "field must contain at least one pulse"});
        return out;
    }
    for (std::size_t k = 0; k < config.pulses.size(); ++k) {
        const auto& p = config.pulses[k];
        auto add = [&](std::string member, std::string msg) { out.push_back({k, std::move(member), std::move(msg)}); };
        if (!std::isfinite(p.amplitude) || p.amplitude < 0.0) add("amplitude", "amplitude must be finite and >= 0");
        if (!std::isfinite(p.width) || p.width <= 0.0) add("width", "width must be finite and > 0");
        if (!std::isfinite(p.carrier_frequency) || p.carrier_frequency < 0.0)
            add("carrier_frequency", "carrier frequency must be finite and >= 0");
        if (!std::isfinite(p.chirp)) add("chirp", "chirp must be finite");
        if (p.profile == ChirpProfile::SignFlip && p.first_half_sign != 1 && p.first_half_sign != -1)
            add("first_half_sign", "first_half_sign must be +1 or -1");
        if (policy.enforce_chirp_bound && std::isfinite(p.chirp) && p.width > 0.0 &&
            !(std::abs(p.chirp) < p.carrier_frequency / p.width)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "chirp bound violated: |b| = " << std::abs(p.chirp)
                << " must be < omega/tau = " << p.carrier_frequency / p.width;
            add("chirp", msg.str());
        }
    }
    return out;
}

void require_valid(const FieldConfig& config, const ValidationPolicy& policy) {
    const auto violations = validate(config, policy);
    if (violations.empty()) return;
    std::ostringstream msg;
    msg << "invalid field configuration:";
    for (const auto& v : violations) msg << "\n  pulse " << v.pulse_index << " " << v.field << ": " << v.message;
    throw std::invalid_argument(msg.str());
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void mix(std::uint64_t& h, std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
        h ^= (word >> (8 * i)) & 0xffU;
        h *= kFnvPrime;
    }
}

}  // namespace

std::uint64_t fingerprint(const FieldConfig& config) {
    std::uint64_t h = kFnvOffset;
    for (const auto& p : config.pulses) {
        mix(h, std::bit_cast<std::uint64_t>(p.amplitude));
        mix(h, std::bit_cast<std::uint64_t>(p.carrier_frequency));
        mix(h, std::bit_cast<std::uint64_t>(p.width));
        mix(h, std::bit_cast<std::uint64_t>(p.chirp));
        mix(h, static_cast<std::uint64_t>(p.profile));
        mix(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(p.first_half_sign)));
    }
    return h;
}

std::string to_string(ChirpProfile profile) {
    return profile == ChirpProfile::Constant ? "constant" : "sign_flip";
}

}  // namespace qvepair
