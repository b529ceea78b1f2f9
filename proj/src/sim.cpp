#include "ehnet/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>

namespace ehnet {

namespace {

struct BatchAccumulator {
    std::vector<double> means;
    double sum = 0.0;
    std::uint64_t count = 0;

    void add(double value) {
        sum += value;
        ++count;
    }
    void close() {
        if (count > 0) means.push_back(sum / static_cast<double>(count));
        sum = 0.0;
        count = 0;
    }
    double std_error() const {
        const std::size_t b = means.size();
        if (b < 2) return 0.0;
        double mean = 0.0;
        for (double m : means) mean += m;
        mean /= static_cast<double>(b);
        double ss = 0.0;
        for (double m : means) ss += (m - mean) * (m - mean);
        return std::sqrt(ss / static_cast<double>(b - 1) / static_cast<double>(b));
    }
};

} // namespace

SimulationResult run(const SimulationConfig& config) {
    validate(config.network);
    if (config.horizon < 1) throw Error(ErrorCode::OutOfRange, "horizon must be >= 1");

    const auto& net = config.network;
    SimulationResult out;
    out.horizon = config.horizon;
    out.grid = {net.gammas[0], net.gammas[1]};
    std::vector<std::uint64_t> visits(out.grid.size(), 0);

    const std::uint64_t batches = std::clamp<std::uint64_t>(config.batches, 1, config.horizon);
    const std::uint64_t batch_len = config.horizon / batches;
    std::array<BatchAccumulator, 3> acc; // node 1, node 2, total

    Rng rng(config.seed);
    BatteryState state;
    for (std::uint64_t t = 0; t < config.horizon; ++t) {
        ++visits[out.grid.index(state.level[0], state.level[1])];
        const Harvest harvest = sample_harvest(net.probs, rng);
        if (harvest[0] + harvest[1] > 0) ++out.harvest_slots;
        const SlotOutcome slot = step(state, harvest, net);
        if (slot.collision) ++out.collisions;
        for (std::size_t n = 0; n < 2; ++n) {
            if (slot.rate[n] > 0.0) ++out.successes[n];
        }
        acc[0].add(slot.rate[0]);
        acc[1].add(slot.rate[1]);
        acc[2].add(slot.rate[0] + slot.rate[1]);
        state = slot.next;
        // The last batch absorbs the remainder of horizon / batches.
        if ((t + 1) % batch_len == 0 && (t + 1) / batch_len < batches) {
            for (auto& a : acc) a.close();
        }
    }
    for (auto& a : acc) a.close();

    const auto horizon = static_cast<double>(config.horizon);
    const double r1 = static_cast<double>(out.successes[0]) * transmission_rate(net.gammas[0], net.delta_prime) / horizon;
    const double r2 = static_cast<double>(out.successes[1]) * transmission_rate(net.gammas[1], net.delta_prime) / horizon;
    out.report = ThroughputReport::make(r1, r2, ModelSource::simulated);
    out.std_error = {acc[0].std_error(), acc[1].std_error()};
    out.total_std_error = acc[2].std_error();

    out.occupancy.resize(visits.size());
    for (std::size_t s = 0; s < visits.size(); ++s) out.occupancy[s] = static_cast<double>(visits[s]) / horizon;
    return out;
}

std::vector<SimulationResult> run_all(std::span<const SimulationConfig> configs, std::size_t threads) {
    std::vector<SimulationResult> results(configs.size());
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(configs.size(), 1));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(configs.size());
    auto worker = [&] {
        for (std::size_t k = next++; k < configs.size(); k = next++) {
            try {
                results[k] = run(configs[k]);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

ErrorMetrics compare(double analytic, double simulated) noexcept {
    ErrorMetrics m;
    // (a - s) / a * 100 and (a - s) * 100, rearranged.
    if (analytic != 0.0) m.re_percent = 100.0 - 100.0 * (simulated / analytic);
    m.ae_percent = 100.0 * analytic - 100.0 * simulated;
    return m;
}

Comparison compare(const SimulationResult& result, const ThroughputReport& analytic) noexcept {
    return {{compare(analytic.rate[0], result.report.rate[0]), compare(analytic.rate[1], result.report.rate[1])},
            compare(analytic.total, result.report.total)};
}

void write_simulation_csv_header(std::ostream& out) {
    out << "gamma1,gamma2,p00,p10,p01,p11,delta_prime,horizon,seed,r1_sim,r2_sim,total_sim,collisions,re_total,"
           "ae_total\n";
}

void write_simulation_csv_row(std::ostream& out, const SimulationConfig& config, const SimulationResult& result,
                              const Comparison& comparison) {
    const auto old_precision = out.precision(17);
    const auto& net = config.network;
    out << net.gammas[0] << ',' << net.gammas[1] << ',' << net.probs.p00 << ',' << net.probs.p10 << ','
        << net.probs.p01 << ',' << net.probs.p11 << ',' << net.delta_prime << ',' << config.horizon << ','
        << config.seed << ',' << result.report.rate[0] << ',' << result.report.rate[1] << ','
        << result.report.total << ',' << result.collisions << ',';
    if (comparison.total.re_percent) out << *comparison.total.re_percent;
    out << ',' << comparison.total.ae_percent << '\n';
    out.precision(old_precision);
}

} // namespace ehnet
