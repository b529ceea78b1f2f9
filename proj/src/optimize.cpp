#include "ehnet/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>

namespace ehnet {

namespace {

NetworkConfig grid_config(int g1, int g2, const EHProbabilities& probs, double delta_prime) {
    NetworkConfig c;
    c.caps = {g1, g2};
    c.gammas = {g1, g2};
    c.delta_prime = delta_prime;
    c.probs = probs;
    return c;
}

OptimizationOutcome single_point(Thresholds gammas, double value, ModelSource source) {
    OptimizationOutcome out;
    out.best = gammas;
    out.best_value = value;
    out.ties = {gammas};
    out.evaluated = 1;
    out.model_used = source;
    return out;
}

void require_caps(const Capacities& caps) {
    if (caps[0] < 1 || caps[1] < 1) throw Error(ErrorCode::OutOfRange, "capacities must be >= 1");
}

} // namespace

std::vector<SurfacePoint> evaluate_surface(std::array<int, 2> gamma1_range, std::array<int, 2> gamma2_range,
                                           const EHProbabilities& probs, double delta_prime, std::size_t threads) {
    validate(probs);
    if (gamma1_range[0] < 1 || gamma2_range[0] < 1 || gamma1_range[1] < gamma1_range[0] ||
        gamma2_range[1] < gamma2_range[0]) {
        throw Error(ErrorCode::OutOfRange, "threshold ranges must satisfy 1 <= lo <= hi");
    }
    const int n1 = gamma1_range[1] - gamma1_range[0] + 1;
    const int n2 = gamma2_range[1] - gamma2_range[0] + 1;
    std::vector<SurfacePoint> surface(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2));

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(surface.size());
    auto worker = [&] {
        for (std::size_t k = next++; k < surface.size(); k = next++) {
            const int g1 = gamma1_range[0] + static_cast<int>(k / static_cast<std::size_t>(n2));
            const int g2 = gamma2_range[0] + static_cast<int>(k % static_cast<std::size_t>(n2));
            try {
                surface[k] = {{g1, g2}, model_throughput(grid_config(g1, g2, probs, delta_prime))};
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    threads = std::clamp<std::size_t>(threads, 1, surface.size());
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return surface;
}

std::vector<SurfacePoint> evaluate_surface(const Capacities& caps, const EHProbabilities& probs, double delta_prime,
                                           std::size_t threads) {
    require_caps(caps);
    return evaluate_surface({1, caps[0]}, {1, caps[1]}, probs, delta_prime, threads);
}

void write_surface_csv(std::ostream& out, const std::vector<SurfacePoint>& surface) {
    const auto old_precision = out.precision(17);
    out << "gamma1,gamma2,r1,r2,total,model_used\n";
    for (const auto& pt : surface) {
        out << pt.gammas[0] << ',' << pt.gammas[1] << ',' << pt.report.rate[0] << ',' << pt.report.rate[1] << ','
            << pt.report.total << ',' << to_string(pt.report.source) << '\n';
    }
    out.precision(old_precision);
}

OptimizationOutcome best_of(const std::vector<SurfacePoint>& surface) {
    if (surface.empty()) throw Error(ErrorCode::OutOfRange, "empty surface");
    OptimizationOutcome out;
    out.evaluated = surface.size();
    out.model_used = surface.front().report.source;
    out.best_value = surface.front().report.total;
    for (const auto& pt : surface) out.best_value = std::max(out.best_value, pt.report.total);
    for (const auto& pt : surface) {
        if (pt.report.total >= out.best_value - kTieTolerance) out.ties.push_back(pt.gammas);
    }
    std::sort(out.ties.begin(), out.ties.end());
    // Report the exact maximizer as `best`; ties are already ordered.
    for (const auto& pt : surface) {
        if (pt.report.total == out.best_value) {
            out.best = pt.gammas;
            break;
        }
    }
    return out;
}

OptimizationOutcome exhaustive_search(const Capacities& caps, const EHProbabilities& probs, double delta_prime,
                                      std::size_t threads) {
    return best_of(evaluate_surface(caps, probs, delta_prime, threads));
}

OptimizationOutcome closed_form_negative(const Capacities& caps, double p, double delta_prime) {
    require_caps(caps);
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::PreconditionViolated, "high negative correlation needs 0 < p < 1");
    return single_point({1, 1}, negative_corr_z(1, 1, p, delta_prime), ModelSource::lemma1);
}

OptimizationOutcome closed_form_positive_small(const Capacities& caps, double p, double delta_prime) {
    require_caps(caps);
    if (caps[0] == caps[1]) {
        throw Error(ErrorCode::AmbiguousCase, "equal capacities; use exhaustive_search");
    }
    const std::size_t small = caps[0] < caps[1] ? 0 : 1;
    const int c_small = caps[small];
    int j = caps[1 - small];
    while (j > 1 && gcd(c_small, j) != 1) --j;
    Thresholds gammas{};
    gammas[small] = c_small;
    gammas[1 - small] = j;
    return single_point(gammas, positive_small_delta_z(gammas[0], gammas[1], p, delta_prime),
                        ModelSource::approx_small_delta);
}

OptimizationOutcome closed_form_positive_large(const Capacities& caps, double p, double delta_prime) {
    require_caps(caps);
    if (!(delta_prime > 1.0)) {
        throw Error(ErrorCode::ApproximationDomain, "large-delta' thresholds need delta' > 1");
    }
    if (caps[0] == caps[1]) {
        const int c = caps[0];
        if (c == 1) return single_point({1, 1}, 0.0, ModelSource::approx_large_delta);
        OptimizationOutcome out = single_point({c, 1}, positive_large_delta_z(c, 1, p, delta_prime),
                                               ModelSource::approx_large_delta);
        out.ties = {Thresholds{1, c}, Thresholds{c, 1}};
        out.evaluated = 2;
        return out;
    }
    const Thresholds gammas = caps[0] > caps[1] ? Thresholds{caps[0], 1} : Thresholds{1, caps[1]};
    return single_point(gammas, positive_large_delta_z(gammas[0], gammas[1], p, delta_prime),
                        ModelSource::approx_large_delta);
}

ClosedFormCheck check_closed_form(const OptimizationOutcome& closed, const OptimizationOutcome& exhaustive,
                                  const EHProbabilities& probs, double delta_prime) {
    ClosedFormCheck check;
    check.exhaustive_best = exhaustive.best_value;
    check.exact_at_closed =
        model_throughput(grid_config(closed.best[0], closed.best[1], probs, delta_prime)).total;
    auto closed_ties = closed.ties;
    std::sort(closed_ties.begin(), closed_ties.end());
    check.ties_equal = closed_ties == exhaustive.ties;
    check.best_in_ties =
        std::find(exhaustive.ties.begin(), exhaustive.ties.end(), closed.best) != exhaustive.ties.end();
    check.dominated = exhaustive.best_value >= check.exact_at_closed - kTieTolerance;
    return check;
}

} // namespace ehnet
