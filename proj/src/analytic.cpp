#include "ehnet/analytic.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace ehnet {

namespace {

void require_thresholds(int gamma1, int gamma2) {
    if (gamma1 < 1 || gamma2 < 1) throw Error(ErrorCode::OutOfRange, "thresholds must be >= 1");
}

void require_renewal_p(double p) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::PreconditionViolated, "renewal model needs 0 < p <= 1, got " + std::to_string(p));
    }
}

} // namespace

std::int64_t gcd(std::int64_t a, std::int64_t b) {
    if (a < 1 || b < 1) throw Error(ErrorCode::OutOfRange, "gcd needs positive arguments");
    return std::gcd(a, b);
}

std::int64_t lcm(std::int64_t a, std::int64_t b) {
    const std::int64_t g = gcd(a, b);
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a / g, b, &out)) {
        throw Error(ErrorCode::Overflow, "lcm(" + std::to_string(a) + ", " + std::to_string(b) + ") overflows int64");
    }
    return out;
}

ThroughputReport lemma1_throughput(const NetworkConfig& config) {
    validate(config);
    const auto& p = config.probs;
    if (!(p.p01 > 0.0 && p.p10 > 0.0)) {
        throw Error(ErrorCode::PreconditionViolated, "uniform-occupancy closed form needs p01 > 0 and p10 > 0");
    }
    const int g1 = config.gammas[0];
    const int g2 = config.gammas[1];
    const double cells = static_cast<double>(g1) * static_cast<double>(g2);
    const double r1 = transmission_rate(g1, config.delta_prime) * ((g2 - 1) * (p.p10 + p.p11) + p.p10) / cells;
    const double r2 = transmission_rate(g2, config.delta_prime) * ((g1 - 1) * (p.p01 + p.p11) + p.p01) / cells;
    return ThroughputReport::make(r1, r2, ModelSource::lemma1);
}

double objective_z(const NetworkConfig& config) { return lemma1_throughput(config).total; }

double negative_corr_z_relaxed(double gamma1, double gamma2, double p, double delta_prime) {
    return p * std::log1p(gamma1 * delta_prime) / gamma1 + (1.0 - p) * std::log1p(gamma2 * delta_prime) / gamma2;
}

double negative_corr_z(int gamma1, int gamma2, double p, double delta_prime) {
    require_thresholds(gamma1, gamma2);
    return negative_corr_z_relaxed(gamma1, gamma2, p, delta_prime);
}

std::array<double, 2> negative_corr_gradient(double gamma1, double gamma2, double p, double delta_prime) {
    const auto partial = [delta_prime](double g, double weight) {
        const double x = delta_prime * g;
        return weight * (x - (1.0 + x) * std::log1p(x)) / (g * g * (1.0 + x));
    };
    return {partial(gamma1, p), partial(gamma2, 1.0 - p)};
}

ThroughputReport renewal_throughput(int gamma1, int gamma2, double p, double delta_prime) {
    require_thresholds(gamma1, gamma2);
    require_renewal_p(p);
    const std::int64_t period = lcm(gamma1, gamma2);
    const auto rate = [&](int gamma) {
        const std::int64_t successes = period / gamma - 1;
        return p * static_cast<double>(successes) / static_cast<double>(period) * transmission_rate(gamma, delta_prime);
    };
    return ThroughputReport::make(rate(gamma1), rate(gamma2), ModelSource::renewal);
}

double positive_small_delta_z(int gamma1, int gamma2, double p, double delta_prime) {
    require_thresholds(gamma1, gamma2);
    require_renewal_p(p);
    const auto g = static_cast<double>(gcd(gamma1, gamma2));
    return 2.0 * delta_prime * p - g * (1.0 / gamma1 + 1.0 / gamma2) * delta_prime * p;
}

double positive_large_delta_z(int gamma1, int gamma2, double p, double delta_prime) {
    require_thresholds(gamma1, gamma2);
    require_renewal_p(p);
    if (!(gamma1 * delta_prime > 1.0 && gamma2 * delta_prime > 1.0)) {
        throw Error(ErrorCode::ApproximationDomain, "large-delta' form needs gamma_n * delta' > 1");
    }
    const auto g = gcd(gamma1, gamma2);
    const double cells = static_cast<double>(gamma1) * static_cast<double>(gamma2);
    return (static_cast<double>(gamma2 - g) * std::log(gamma1 * delta_prime) +
            static_cast<double>(gamma1 - g) * std::log(gamma2 * delta_prime)) *
           p / cells;
}

ModelSource select_model(const EHProbabilities& probs) noexcept {
    if (probs.p01 > 0.0 && probs.p10 > 0.0) return ModelSource::lemma1;
    if (probs.p01 == 0.0 && probs.p10 == 0.0 && probs.p11 > 0.0) return ModelSource::renewal;
    return ModelSource::stationary_accounting;
}

ThroughputReport model_throughput(const NetworkConfig& config, const SolveOptions& options) {
    validate(config);
    switch (select_model(config.probs)) {
    case ModelSource::lemma1: return lemma1_throughput(config);
    case ModelSource::renewal:
        return renewal_throughput(config.gammas[0], config.gammas[1], config.probs.p11, config.delta_prime);
    default: return markov_throughput(config, options);
    }
}

} // namespace ehnet
