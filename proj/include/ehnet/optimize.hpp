#pragma once

#include "ehnet/analytic.hpp"
#include "ehnet/model.hpp"
#include "ehnet/report.hpp"

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace ehnet {

inline constexpr double kTieTolerance = 1e-12;

struct OptimizationOutcome {
    Thresholds best{1, 1};
    double best_value = 0.0;
    std::vector<Thresholds> ties; // sorted lexicographically, contains best
    std::size_t evaluated = 0;
    ModelSource model_used = ModelSource::lemma1;
};

struct SurfacePoint {
    Thresholds gammas{1, 1};
    ThroughputReport report;
};

/// Exact throughput at every (g1, g2) in [1, cap1] x [1, cap2], row-major in
/// g1. Grid points are evaluated on up to `threads` threads.
std::vector<SurfacePoint> evaluate_surface(const Capacities& caps, const EHProbabilities& probs, double delta_prime,
                                           std::size_t threads = 1);

/// As above over an arbitrary rectangle of thresholds.
std::vector<SurfacePoint> evaluate_surface(std::array<int, 2> gamma1_range, std::array<int, 2> gamma2_range,
                                           const EHProbabilities& probs, double delta_prime, std::size_t threads = 1);

/// gamma1,gamma2,r1,r2,total,model_used
void write_surface_csv(std::ostream& out, const std::vector<SurfacePoint>& surface);

/// Argmax of the exact aggregate throughput with every pair within
/// kTieTolerance of the best value.
OptimizationOutcome exhaustive_search(const Capacities& caps, const EHProbabilities& probs, double delta_prime,
                                      std::size_t threads = 1);
OptimizationOutcome best_of(const std::vector<SurfacePoint>& surface);

/// High negative correlation: transmit on every harvested quantum, (1, 1).
OptimizationOutcome closed_form_negative(const Capacities& caps, double p, double delta_prime);

/// High positive correlation, small delta': the smaller-capacity node uses
/// its full capacity C_s, the other the largest j <= C_l with gcd(C_s, j) = 1.
/// Throws Error{AmbiguousCase} when the capacities are equal.
OptimizationOutcome closed_form_positive_small(const Capacities& caps, double p, double delta_prime);

/// High positive correlation, large delta': the larger-capacity node uses its
/// capacity and the other threshold 1; equal capacities give both orders as
/// ties. Throws Error{ApproximationDomain} unless delta' > 1.
OptimizationOutcome closed_form_positive_large(const Capacities& caps, double p, double delta_prime);

/// Closed form checked against an exhaustive search of the exact model.
struct ClosedFormCheck {
    bool ties_equal = false;     // identical tie sets
    bool best_in_ties = false;   // closed-form best is an exact optimum
    bool dominated = false;      // exhaustive best >= exact value at closed-form best
    double exact_at_closed = 0.0;
    double exhaustive_best = 0.0;
};

ClosedFormCheck check_closed_form(const OptimizationOutcome& closed, const OptimizationOutcome& exhaustive,
                                  const EHProbabilities& probs, double delta_prime);

} // namespace ehnet
