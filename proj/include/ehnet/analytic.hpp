#pragma once

#include "ehnet/markov.hpp"
#include "ehnet/model.hpp"
#include "ehnet/report.hpp"

#include <cstdint>

namespace ehnet {

/// gcd of two positive integers. Throws Error{OutOfRange} for a or b < 1.
std::int64_t gcd(std::int64_t a, std::int64_t b);
/// lcm of two positive integers. Throws Error{Overflow} if it does not fit.
std::int64_t lcm(std::int64_t a, std::int64_t b);

/// Closed-form rates under uniform occupancy of the gamma1 x gamma2 grid:
///   R1 = log(1 + gamma1 d') [ (gamma2 - 1)(p10 + p11) + p10 ] / (gamma1 gamma2)
/// Requires p01 > 0 and p10 > 0, otherwise Error{PreconditionViolated}.
ThroughputReport lemma1_throughput(const NetworkConfig& config);

/// Aggregate objective z(gamma1, gamma2) = R1 + R2 of lemma1_throughput.
double objective_z(const NetworkConfig& config);

/// Total throughput for (p00, p10, p01, p11) = (0, p, 1-p, 0):
///   p log(1 + g1 d') / g1 + (1 - p) log(1 + g2 d') / g2
double negative_corr_z(int gamma1, int gamma2, double p, double delta_prime);

/// The same expression with real-valued thresholds (continuous relaxation).
double negative_corr_z_relaxed(double gamma1, double gamma2, double p, double delta_prime);

/// Closed-form gradient of negative_corr_z_relaxed.
std::array<double, 2> negative_corr_gradient(double gamma1, double gamma2, double p, double delta_prime);

/// Renewal-reward rates for (p00, p10, p01, p11) = (1-p, 0, 0, p): both
/// nodes reach their thresholds together every LCM(g1, g2) harvest events,
/// so node n delivers LCM/g_n - 1 packets per period:
///   R_n = p (LCM / g_n - 1) / LCM * log(1 + g_n d')
/// Requires 0 < p <= 1.
ThroughputReport renewal_throughput(int gamma1, int gamma2, double p, double delta_prime);

/// Small-d' form of the renewal total (log(1 + x) ~ x):
///   2 d' p - GCD(g1, g2) (1/g1 + 1/g2) d' p
double positive_small_delta_z(int gamma1, int gamma2, double p, double delta_prime);

/// Large-d' form of the renewal total (log(1 + x) ~ log x):
///   [ (g2 - GCD) log(g1 d') + (g1 - GCD) log(g2 d') ] p / (g1 g2)
/// Throws Error{ApproximationDomain} unless g_n d' > 1 for both nodes.
double positive_large_delta_z(int gamma1, int gamma2, double p, double delta_prime);

/// Model used for a given harvest law: lemma1 when p01, p10 > 0; renewal when
/// p01 = p10 = 0 and p11 > 0; stationary accounting otherwise.
ModelSource select_model(const EHProbabilities& probs) noexcept;

/// Long-term throughput via the model chosen by select_model.
ThroughputReport model_throughput(const NetworkConfig& config, const SolveOptions& options = {});

} // namespace ehnet
