#pragma once

#include "ehnet/error.hpp"
#include "ehnet/rng.hpp"

#include <array>
#include <cstddef>

namespace ehnet {

inline constexpr double kProbabilitySumTolerance = 1e-12;

/// Joint Bernoulli law of the per-slot harvests: p_ab = Pr{E1 = a, E2 = b}
/// in units of one energy quantum.
struct EHProbabilities {
    double p00 = 1.0;
    double p10 = 0.0;
    double p01 = 0.0;
    double p11 = 0.0;

    /// Probability that node n (0 or 1) harvests a quantum in a slot.
    double harvest(std::size_t node) const noexcept { return node == 0 ? p10 + p11 : p01 + p11; }
    /// Probability that only node n harvests.
    double solo(std::size_t node) const noexcept { return node == 0 ? p10 : p01; }

    bool operator==(const EHProbabilities&) const = default;
};

/// Throws Error{OutOfRange} if a field lies outside [0,1] (or is NaN) and
/// Error{NonStochastic} if the fields do not sum to one.
void validate(const EHProbabilities& probs);

namespace presets {
/// Exactly one node harvests per slot: (0, p, 1-p, 0).
EHProbabilities high_negative(double p);
/// Both nodes harvest together or not at all: (1-p, 0, 0, p).
EHProbabilities high_positive(double p);
/// Independent fair harvests: 1/4 each.
EHProbabilities independent();
} // namespace presets

using Thresholds = std::array<int, 2>;
using Capacities = std::array<int, 2>;

struct NetworkConfig {
    Capacities caps{1, 1};
    Thresholds gammas{1, 1};
    double delta_prime = 1.0;
    EHProbabilities probs{};
};

/// Checks probs, 1 <= gamma_n <= cap_n and delta_prime > 0.
void validate(const NetworkConfig& config);

/// Normalized SNR per energy quantum, (delta / epsilon) / noise.
double compute_delta_prime(double delta, double epsilon, double noise);

/// Shannon rate of a transmission that spends `units` quanta, log(1 + units * delta').
double transmission_rate(int units, double delta_prime) noexcept;

struct BatteryState {
    std::array<int, 2> level{0, 0};
    bool operator==(const BatteryState&) const = default;
};

/// Quanta harvested by each node in one slot (0 or 1).
using Harvest = std::array<int, 2>;

Harvest sample_harvest(const EHProbabilities& probs, Rng& rng);

struct SlotOutcome {
    BatteryState next;
    std::array<bool, 2> tx{false, false};
    bool collision = false;
    std::array<double, 2> rate{0.0, 0.0};
};

/// One slot: harvest, threshold check, transmit. A node whose level reaches
/// its threshold transmits immediately and empties its battery; simultaneous
/// transmissions collide and earn nothing.
///
/// Throws Error{InvalidState} if a level is outside [0, gamma_n - 1] or a
/// harvest is not 0/1. The config is assumed already validated.
SlotOutcome step(const BatteryState& state, const Harvest& harvest, const NetworkConfig& config);

} // namespace ehnet
