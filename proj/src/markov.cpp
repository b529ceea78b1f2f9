#include "ehnet/markov.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <queue>
#include <string>

namespace ehnet {

TransitionMatrix::TransitionMatrix(StateGrid grid, std::vector<std::vector<Transition>> rows)
    : grid_(grid), rows_(std::move(rows)) {
    if (rows_.size() != grid_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "row count " + std::to_string(rows_.size()) +
                                                      " != gamma1 * gamma2 = " + std::to_string(grid_.size()));
    }
    for (auto& row : rows_) {
        std::sort(row.begin(), row.end(), [](const Transition& a, const Transition& b) { return a.to < b.to; });
        std::vector<Transition> merged;
        for (const auto& t : row) {
            if (t.to >= rows_.size()) throw Error(ErrorCode::DimensionMismatch, "transition target out of range");
            if (t.prob == 0.0) continue;
            if (!merged.empty() && merged.back().to == t.to) {
                merged.back().prob += t.prob;
            } else {
                merged.push_back(t);
            }
        }
        row = std::move(merged);
    }
}

double TransitionMatrix::at(std::size_t from, std::size_t to) const {
    for (const auto& t : rows_.at(from)) {
        if (t.to == to) return t.prob;
    }
    return 0.0;
}

double TransitionMatrix::max_row_defect() const noexcept {
    double worst = 0.0;
    for (const auto& row : rows_) {
        double sum = 0.0;
        for (const auto& t : row) sum += t.prob;
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
}

void TransitionMatrix::write_csv(std::ostream& out) const {
    const auto old_precision = out.precision(17);
    out << "row,col,probability\n";
    for (std::size_t s = 0; s < rows_.size(); ++s) {
        for (const auto& t : rows_[s]) out << s << ',' << t.to << ',' << t.prob << '\n';
    }
    out.precision(old_precision);
}

TransitionMatrix build_chain(const NetworkConfig& config) {
    validate(config);
    const StateGrid grid{config.gammas[0], config.gammas[1]};
    const auto wrap = [](int x, int gamma) { return x >= gamma ? 0 : x; };
    const auto& p = config.probs;

    std::vector<std::vector<Transition>> rows(grid.size());
    for (int i = 0; i < grid.gamma1; ++i) {
        for (int j = 0; j < grid.gamma2; ++j) {
            const int i1 = wrap(i + 1, grid.gamma1);
            const int j1 = wrap(j + 1, grid.gamma2);
            rows[grid.index(i, j)] = {
                {grid.index(i, j), p.p00},
                {grid.index(i1, j), p.p10},
                {grid.index(i, j1), p.p01},
                {grid.index(i1, j1), p.p11},
            };
        }
    }
    return TransitionMatrix(grid, std::move(rows));
}

namespace {

std::vector<bool> reachable_from(const TransitionMatrix& chain, std::size_t start, bool reverse) {
    const std::size_t n = chain.dim();
    std::vector<std::vector<std::size_t>> incoming;
    if (reverse) {
        incoming.resize(n);
        for (std::size_t s = 0; s < n; ++s) {
            for (const auto& t : chain.row(s)) incoming[t.to].push_back(s);
        }
    }
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> frontier;
    seen[start] = true;
    frontier.push(start);
    while (!frontier.empty()) {
        const std::size_t s = frontier.front();
        frontier.pop();
        auto visit = [&](std::size_t v) {
            if (!seen[v]) {
                seen[v] = true;
                frontier.push(v);
            }
        };
        if (reverse) {
            for (std::size_t v : incoming[s]) visit(v);
        } else {
            for (const auto& t : chain.row(s)) visit(t.to);
        }
    }
    return seen;
}

// gcd of (level(u) + 1 - level(v)) over edges of the BFS tree's reach.
std::size_t period_from(const TransitionMatrix& chain, std::size_t start) {
    const std::size_t n = chain.dim();
    std::vector<long> level(n, -1);
    std::queue<std::size_t> frontier;
    level[start] = 0;
    frontier.push(start);
    long d = 0;
    while (!frontier.empty()) {
        const std::size_t u = frontier.front();
        frontier.pop();
        for (const auto& t : chain.row(u)) {
            if (level[t.to] < 0) {
                level[t.to] = level[u] + 1;
                frontier.push(t.to);
            } else {
                d = std::gcd(d, std::labs(level[u] + 1 - level[t.to]));
            }
        }
    }
    return d == 0 ? 1 : static_cast<std::size_t>(d);
}

void multiply(const TransitionMatrix& chain, const std::vector<double>& x, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t s = 0; s < x.size(); ++s) {
        if (x[s] == 0.0) continue;
        for (const auto& t : chain.row(s)) out[t.to] += x[s] * t.prob;
    }
}

double stationarity_residual(const TransitionMatrix& chain, const std::vector<double>& pi) {
    std::vector<double> next(pi.size());
    multiply(chain, pi, next);
    double worst = 0.0;
    for (std::size_t s = 0; s < pi.size(); ++s) worst = std::max(worst, std::abs(next[s] - pi[s]));
    return worst;
}

std::vector<double> linear_solve(const TransitionMatrix& chain) {
    // Rows of (I - P)^T with the last equation replaced by sum(pi) = 1.
    const auto n = static_cast<Eigen::Index>(chain.dim());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(chain.dim() * 5);
    for (Eigen::Index s = 0; s < n; ++s) {
        for (const auto& t : chain.row(static_cast<std::size_t>(s))) {
            const auto to = static_cast<Eigen::Index>(t.to);
            if (to != n - 1) triplets.emplace_back(to, s, -t.prob);
        }
        if (s != n - 1) triplets.emplace_back(s, s, 1.0);
        triplets.emplace_back(n - 1, s, 1.0);
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(triplets.begin(), triplets.end());
    a.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success) {
        throw Error(ErrorCode::NoConvergence, "stationarity system is singular");
    }
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    const Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "sparse solve failed");
    return {x.data(), x.data() + x.size()};
}

std::vector<double> cesaro_iteration(const TransitionMatrix& chain, std::size_t period, const SolveOptions& options,
                                     std::size_t& iterations) {
    const std::size_t n = chain.dim();
    // window[k] holds x_{m + k} for the current offset m; `oldest` rotates.
    std::vector<std::vector<double>> window(period, std::vector<double>(n, 0.0));
    window[0][0] = 1.0;
    for (std::size_t k = 1; k < period; ++k) multiply(chain, window[k - 1], window[k]);

    std::vector<double> next(n);
    std::size_t oldest = 0;
    iterations = period - 1;
    const double target = 0.5 * options.tolerance * static_cast<double>(period);
    bool converged = false;
    while (iterations < options.max_iterations) {
        const std::size_t newest = (oldest + period - 1) % period;
        multiply(chain, window[newest], next);
        ++iterations;
        double change = 0.0;
        for (std::size_t s = 0; s < n; ++s) change = std::max(change, std::abs(next[s] - window[oldest][s]));
        std::swap(window[oldest], next);
        oldest = (oldest + 1) % period;
        // (average) P - average == (x_{m+period} - x_m) / period
        if (change <= target) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw Error(ErrorCode::NoConvergence,
                    "Cesaro power iteration did not converge in " + std::to_string(options.max_iterations) + " steps");
    }
    std::vector<double> avg(n, 0.0);
    for (const auto& x : window) {
        for (std::size_t s = 0; s < n; ++s) avg[s] += x[s];
    }
    for (double& v : avg) v /= static_cast<double>(period);
    return avg;
}

} // namespace

SteadyState solve_steady_state(const TransitionMatrix& chain, const SolveOptions& options) {
    if (chain.max_row_defect() > kProbabilitySumTolerance) {
        throw Error(ErrorCode::NonStochastic, "transition matrix rows do not sum to 1");
    }
    SteadyState out;
    out.grid = chain.grid();
    out.period = period_from(chain, 0);

    const auto forward = reachable_from(chain, 0, false);
    const auto backward = reachable_from(chain, 0, true);
    const bool irreducible = std::all_of(forward.begin(), forward.end(), [](bool b) { return b; }) &&
                             std::all_of(backward.begin(), backward.end(), [](bool b) { return b; });

    if (irreducible) {
        out.method = SolveMethod::linear_solve;
        out.pi = linear_solve(chain);
    } else {
        out.method = SolveMethod::cesaro_power_iteration;
        out.pi = cesaro_iteration(chain, out.period, options, out.iterations);
    }

    for (double& v : out.pi) v = std::max(v, 0.0);
    const double total = std::accumulate(out.pi.begin(), out.pi.end(), 0.0);
    for (double& v : out.pi) v /= total;

    out.residual = stationarity_residual(chain, out.pi);
    if (!(out.residual <= options.tolerance)) {
        throw Error(ErrorCode::NoConvergence, "stationarity residual " + std::to_string(out.residual) +
                                                  " exceeds tolerance");
    }
    out.support.resize(out.pi.size());
    for (std::size_t s = 0; s < out.pi.size(); ++s) out.support[s] = out.pi[s] > options.support_tolerance;
    return out;
}

double balance_residual(const SteadyState& steady, const EHProbabilities& probs) {
    const auto& g = steady.grid;
    const auto prev = [](int x, int gamma) { return x == 0 ? gamma - 1 : x - 1; };
    double worst = 0.0;
    for (int i = 0; i < g.gamma1; ++i) {
        for (int j = 0; j < g.gamma2; ++j) {
            const int im = prev(i, g.gamma1);
            const int jm = prev(j, g.gamma2);
            const double lhs = steady.at(i, j) * (1.0 - probs.p00);
            const double rhs = steady.at(im, j) * probs.p10 + steady.at(i, jm) * probs.p01 + steady.at(im, jm) * probs.p11;
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

ThroughputReport stationary_throughput(const SteadyState& steady, const NetworkConfig& config) {
    const int g1 = config.gammas[0];
    const int g2 = config.gammas[1];
    if (steady.grid.gamma1 != g1 || steady.grid.gamma2 != g2 || steady.pi.size() != steady.grid.size()) {
        throw Error(ErrorCode::DimensionMismatch, "steady state grid does not match thresholds (" +
                                                      std::to_string(g1) + ", " + std::to_string(g2) + ")");
    }
    const auto& p = config.probs;

    double edge1 = 0.0; // sum_{j < g2-1} pi(g1-1, j)
    for (int j = 0; j + 1 < g2; ++j) edge1 += steady.at(g1 - 1, j);
    double edge2 = 0.0; // sum_{i < g1-1} pi(i, g2-1)
    for (int i = 0; i + 1 < g1; ++i) edge2 += steady.at(i, g2 - 1);
    const double corner = steady.at(g1 - 1, g2 - 1);

    const double r1 = transmission_rate(g1, config.delta_prime) * (p.harvest(0) * edge1 + p.p10 * corner);
    const double r2 = transmission_rate(g2, config.delta_prime) * (p.harvest(1) * edge2 + p.p01 * corner);
    return ThroughputReport::make(r1, r2, ModelSource::stationary_accounting);
}

ThroughputReport markov_throughput(const NetworkConfig& config, const SolveOptions& options) {
    const auto steady = solve_steady_state(build_chain(config), options);
    return stationary_throughput(steady, config);
}

} // namespace ehnet
