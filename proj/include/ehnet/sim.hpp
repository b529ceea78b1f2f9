#pragma once

#include "ehnet/markov.hpp"
#include "ehnet/model.hpp"
#include "ehnet/report.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace ehnet {

struct SimulationConfig {
    std::uint64_t horizon = 10'000; // slots
    std::uint64_t seed = 1;
    NetworkConfig network{};
    std::size_t batches = 20; // batch-means standard error
};

struct SimulationResult {
    ThroughputReport report;   // source == simulated
    std::array<double, 2> std_error{0.0, 0.0};
    double total_std_error = 0.0;
    std::array<std::uint64_t, 2> successes{0, 0};
    std::uint64_t collisions = 0;
    std::uint64_t harvest_slots = 0; // slots in which at least one node harvested
    std::uint64_t horizon = 0;
    StateGrid grid;
    std::vector<double> occupancy; // pre-step state frequency, row-major
};

/// Slot-level Monte Carlo from (0,0) without warm-up. Deterministic in the seed.
SimulationResult run(const SimulationConfig& config);

/// Runs each config on its own thread-pool slot; results keep input order.
std::vector<SimulationResult> run_all(std::span<const SimulationConfig> configs, std::size_t threads);

/// %RE = (analytic - simulated) / analytic * 100, undefined when analytic == 0;
/// %AE = (analytic - simulated) * 100.
struct ErrorMetrics {
    std::optional<double> re_percent;
    double ae_percent = 0.0;
};

ErrorMetrics compare(double analytic, double simulated) noexcept;

struct Comparison {
    std::array<ErrorMetrics, 2> node;
    ErrorMetrics total;
};

Comparison compare(const SimulationResult& result, const ThroughputReport& analytic) noexcept;

/// gamma1,gamma2,p00,p10,p01,p11,delta_prime,horizon,seed,r1_sim,r2_sim,
/// total_sim,collisions,re_total,ae_total (re_total empty when undefined)
void write_simulation_csv_header(std::ostream& out);
void write_simulation_csv_row(std::ostream& out, const SimulationConfig& config, const SimulationResult& result,
                              const Comparison& comparison);

} // namespace ehnet
