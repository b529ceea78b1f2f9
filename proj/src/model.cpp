#include "ehnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace ehnet {

namespace {

void check_probability(const char* name, double value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        std::ostringstream msg;
        msg << name << " = " << value << " is outside [0, 1]";
        throw Error(ErrorCode::OutOfRange, msg.str());
    }
}

} // namespace

void validate(const EHProbabilities& probs) {
    check_probability("p00", probs.p00);
    check_probability("p10", probs.p10);
    check_probability("p01", probs.p01);
    check_probability("p11", probs.p11);
    const double sum = probs.p00 + probs.p10 + probs.p01 + probs.p11;
    if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "p00 + p10 + p01 + p11 = " << sum << ", expected 1";
        throw Error(ErrorCode::NonStochastic, msg.str());
    }
}

namespace presets {

EHProbabilities high_negative(double p) { return {0.0, p, 1.0 - p, 0.0}; }
EHProbabilities high_positive(double p) { return {1.0 - p, 0.0, 0.0, p}; }
EHProbabilities independent() { return {0.25, 0.25, 0.25, 0.25}; }

} // namespace presets

void validate(const NetworkConfig& config) {
    validate(config.probs);
    for (std::size_t n = 0; n < 2; ++n) {
        if (config.caps[n] < 1) {
            throw Error(ErrorCode::OutOfRange,
                        "cap" + std::to_string(n + 1) + " = " + std::to_string(config.caps[n]) + " must be >= 1");
        }
        if (config.gammas[n] < 1 || config.gammas[n] > config.caps[n]) {
            throw Error(ErrorCode::OutOfRange, "gamma" + std::to_string(n + 1) + " = " +
                                                   std::to_string(config.gammas[n]) + " must lie in [1, " +
                                                   std::to_string(config.caps[n]) + "]");
        }
    }
    if (!(config.delta_prime > 0.0) || !std::isfinite(config.delta_prime)) {
        throw Error(ErrorCode::NonPositiveInput, "delta_prime must be a positive finite number");
    }
}

double compute_delta_prime(double delta, double epsilon, double noise) {
    if (!(delta > 0.0) || !(epsilon > 0.0) || !(noise > 0.0)) {
        throw Error(ErrorCode::NonPositiveInput, "delta, epsilon and noise must all be > 0");
    }
    return (delta / epsilon) / noise;
}

double transmission_rate(int units, double delta_prime) noexcept {
    return std::log1p(static_cast<double>(units) * delta_prime);
}

Harvest sample_harvest(const EHProbabilities& probs, Rng& rng) {
    // Cumulative order (0,0), (1,0), (0,1), (1,1); u lies in [0,1) so a
    // zero-probability outcome can never be selected.
    const double u = rng.uniform();
    double acc = probs.p00;
    if (u < acc) return {0, 0};
    acc += probs.p10;
    if (u < acc) return {1, 0};
    acc += probs.p01;
    if (u < acc) return {0, 1};
    if (probs.p11 == 0.0) {
        // Only reachable when the cumulative sum rounds just below 1.
        if (probs.p01 > 0.0) return {0, 1};
        if (probs.p10 > 0.0) return {1, 0};
        return {0, 0};
    }
    return {1, 1};
}

SlotOutcome step(const BatteryState& state, const Harvest& harvest, const NetworkConfig& config) {
    SlotOutcome out;
    std::array<int, 2> candidate{};
    for (std::size_t n = 0; n < 2; ++n) {
        const int level = state.level[n];
        if (level < 0 || level >= config.gammas[n]) {
            throw Error(ErrorCode::InvalidState, "battery level b" + std::to_string(n + 1) + " = " +
                                                     std::to_string(level) + " outside [0, " +
                                                     std::to_string(config.gammas[n] - 1) + "]");
        }
        if (harvest[n] != 0 && harvest[n] != 1) {
            throw Error(ErrorCode::InvalidState, "harvest e" + std::to_string(n + 1) + " must be 0 or 1");
        }
        candidate[n] = std::min(config.caps[n], level + harvest[n]);
        out.tx[n] = candidate[n] >= config.gammas[n];
        out.next.level[n] = out.tx[n] ? 0 : candidate[n];
    }
    out.collision = out.tx[0] && out.tx[1];
    if (!out.collision) {
        for (std::size_t n = 0; n < 2; ++n) {
            if (out.tx[n]) out.rate[n] = transmission_rate(candidate[n], config.delta_prime);
        }
    }
    return out;
}

} // namespace ehnet
