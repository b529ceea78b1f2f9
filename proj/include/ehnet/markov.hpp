#pragma once

#include "ehnet/model.hpp"
#include "ehnet/report.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace ehnet {

/// Joint battery state (i, j) is stored at index i * gamma2 + j.
struct StateGrid {
    int gamma1 = 1;
    int gamma2 = 1;

    std::size_t size() const noexcept { return static_cast<std::size_t>(gamma1) * static_cast<std::size_t>(gamma2); }
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(gamma2) + static_cast<std::size_t>(j);
    }
    BatteryState state(std::size_t index) const noexcept {
        return {{static_cast<int>(index / static_cast<std::size_t>(gamma2)),
                 static_cast<int>(index % static_cast<std::size_t>(gamma2))}};
    }
    bool operator==(const StateGrid&) const = default;
};

struct Transition {
    std::size_t to = 0;
    double prob = 0.0;
};

/// Row-stochastic transition matrix of the joint battery chain. Rows hold at
/// most four entries, sorted by target and with duplicate targets merged.
class TransitionMatrix {
public:
    TransitionMatrix(StateGrid grid, std::vector<std::vector<Transition>> rows);

    const StateGrid& grid() const noexcept { return grid_; }
    std::size_t dim() const noexcept { return rows_.size(); }
    std::span<const Transition> row(std::size_t from) const { return rows_.at(from); }
    double at(std::size_t from, std::size_t to) const;

    /// Largest |row sum - 1| over all rows.
    double max_row_defect() const noexcept;

    /// CSV rows "row,col,probability" for non-zero entries, full precision.
    void write_csv(std::ostream& out) const;

private:
    StateGrid grid_;
    std::vector<std::vector<Transition>> rows_;
};

/// From (i, j): p00 stays, p10 advances node 1, p01 advances node 2, p11
/// advances both; a node advancing past gamma_n - 1 transmits and wraps to 0.
TransitionMatrix build_chain(const NetworkConfig& config);

enum class SolveMethod { linear_solve, cesaro_power_iteration };

struct SolveOptions {
    double tolerance = 1e-12;
    std::size_t max_iterations = 20'000'000;
    double support_tolerance = 1e-12;
};

struct SteadyState {
    StateGrid grid;
    std::vector<double> pi;
    std::vector<bool> support;
    double residual = 0.0; // max |(pi P - pi)_s|
    SolveMethod method = SolveMethod::linear_solve;
    std::size_t period = 1;     // period of the class reachable from (0,0)
    std::size_t iterations = 0; // power iterations used, 0 for the linear solve

    double at(int i, int j) const { return pi.at(grid.index(i, j)); }
};

/// Stationary distribution. Irreducible chains are solved directly; reducible
/// ones are power-iterated from the empty-battery state (0,0) and averaged
/// over one period, which yields the long-run time-average occupancy from
/// that start. Throws Error{NoConvergence} when the residual target is missed.
SteadyState solve_steady_state(const TransitionMatrix& chain, const SolveOptions& options = {});

/// Largest violation of the torus balance equations
///   pi(i,j)(1 - p00) = pi(i-1,j) p10 + pi(i,j-1) p01 + pi(i-1,j-1) p11
/// with indices taken modulo gamma_n. Covers the interior, both edges and the
/// corner state (0,0). Independent of the matrix built by build_chain.
double balance_residual(const SteadyState& steady, const EHProbabilities& probs);

/// Per-state accounting of successful transmissions:
///   R1 = log(1 + gamma1 d') [ (p10 + p11) sum_{j < gamma2-1} pi(gamma1-1, j) + p10 pi(gamma1-1, gamma2-1) ]
/// and symmetrically for node 2. Valid for any stationary pi.
/// Throws Error{DimensionMismatch} when the grid does not match the thresholds.
ThroughputReport stationary_throughput(const SteadyState& steady, const NetworkConfig& config);

/// build_chain + solve_steady_state + stationary_throughput.
ThroughputReport markov_throughput(const NetworkConfig& config, const SolveOptions& options = {});

} // namespace ehnet
