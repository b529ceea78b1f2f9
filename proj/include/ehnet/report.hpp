#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace ehnet {

/// Which model produced a throughput figure.
enum class ModelSource {
    lemma1,                // closed form under uniform occupancy (p01, p10 > 0)
    renewal,               // renewal-reward form for p01 = p10 = 0
    stationary_accounting, // per-state accounting over a numerically solved chain
    simulated,
    approx_small_delta,
    approx_large_delta,
};

std::string_view to_string(ModelSource source) noexcept;
std::optional<ModelSource> model_source_from_string(std::string_view name) noexcept;

/// Long-term average successful rates in nats/s/Hz.
struct ThroughputReport {
    std::array<double, 2> rate{0.0, 0.0};
    double total = 0.0;
    ModelSource source = ModelSource::lemma1;

    static ThroughputReport make(double r1, double r2, ModelSource source) noexcept {
        return {{r1, r2}, r1 + r2, source};
    }
};

} // namespace ehnet
