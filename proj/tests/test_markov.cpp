#include "ehnet/markov.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace ehnet;

namespace {

NetworkConfig grid_config(int g1, int g2, EHProbabilities probs, double delta_prime = 1.0) {
    return {{g1, g2}, {g1, g2}, delta_prime, probs};
}

} // namespace

TEST_CASE("single-state chain") {
    const auto chain = build_chain(grid_config(1, 1, presets::independent()));
    REQUIRE(chain.dim() == 1);
    CHECK(chain.at(0, 0) == doctest::Approx(1.0));
    const auto steady = solve_steady_state(chain);
    CHECK(steady.pi[0] == doctest::Approx(1.0));
}

TEST_CASE("2x2 chain from (1,1) follows the wrap rule") {
    const EHProbabilities p{0.1, 0.2, 0.3, 0.4};
    const auto chain = build_chain(grid_config(2, 2, p));
    const auto& g = chain.grid();
    const std::size_t from = g.index(1, 1);
    CHECK(chain.at(from, g.index(0, 0)) == doctest::Approx(p.p11));
    CHECK(chain.at(from, g.index(0, 1)) == doctest::Approx(p.p10));
    CHECK(chain.at(from, g.index(1, 0)) == doctest::Approx(p.p01));
    CHECK(chain.at(from, g.index(1, 1)) == doctest::Approx(p.p00));
}

TEST_CASE("build_chain equals the step() enumeration and rows are stochastic") {
    Rng rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const int g1 = 1 + static_cast<int>(rng.next_u64() % 10);
        const int g2 = 1 + static_cast<int>(rng.next_u64() % 10);
        const auto config = grid_config(g1, g2, oracle::random_law(rng));
        const auto chain = build_chain(config);
        const auto dense = oracle::step_matrix(config);
        CHECK(chain.max_row_defect() <= 1e-12);
        for (std::size_t s = 0; s < chain.dim(); ++s) {
            for (std::size_t t = 0; t < chain.dim(); ++t) {
                CHECK(chain.at(s, t) == doctest::Approx(dense[s][t]).epsilon(1e-15));
                CHECK(chain.at(s, t) >= 0.0);
                CHECK(chain.at(s, t) <= 1.0);
            }
        }
    }
}

TEST_CASE("uniform occupancy when both nodes can harvest alone") {
    const auto steady = solve_steady_state(build_chain(grid_config(3, 2, {0.1, 0.3, 0.2, 0.4})));
    CHECK(steady.method == SolveMethod::linear_solve);
    for (double v : steady.pi) CHECK(v == doctest::Approx(1.0 / 6).epsilon(1e-12));
    CHECK(steady.residual <= 1e-12);
}

TEST_CASE("periodic irreducible chain (high negative correlation) is still uniform") {
    const auto steady = solve_steady_state(build_chain(grid_config(2, 2, presets::high_negative(0.5))));
    CHECK(steady.period == 2);
    for (double v : steady.pi) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("high positive correlation visits the lcm cycle only") {
    const EHProbabilities p = presets::high_positive(0.5);
    const auto steady = solve_steady_state(build_chain(grid_config(4, 6, p)));
    CHECK(steady.method == SolveMethod::cesaro_power_iteration);
    const auto expected = oracle::positive_cycle_occupancy(4, 6);
    std::size_t visited = 0;
    for (std::size_t s = 0; s < expected.size(); ++s) {
        CHECK(steady.pi[s] == doctest::Approx(expected[s]).epsilon(1e-10));
        CHECK(steady.support[s] == (expected[s] > 0.0));
        visited += steady.support[s];
    }
    CHECK(visited == 12);
    CHECK(steady.residual <= 1e-12);
    CHECK(balance_residual(steady, p) <= 1e-10);
}

TEST_CASE("strictly periodic reducible chain needs the Cesaro average") {
    // p11 = 1: deterministic walk on a 12-cycle with period 12.
    const auto steady = solve_steady_state(build_chain(grid_config(4, 6, {0, 0, 0, 1})));
    CHECK(steady.period == 12);
    const auto expected = oracle::positive_cycle_occupancy(4, 6);
    for (std::size_t s = 0; s < expected.size(); ++s) CHECK(steady.pi[s] == doctest::Approx(expected[s]).epsilon(1e-12));
}

TEST_CASE("nothing harvested keeps all mass at (0,0)") {
    const auto steady = solve_steady_state(build_chain(grid_config(3, 4, {1, 0, 0, 0})));
    CHECK(steady.pi[0] == doctest::Approx(1.0));
    for (std::size_t s = 1; s < steady.pi.size(); ++s) CHECK(steady.pi[s] == doctest::Approx(0.0));
}

TEST_CASE("NoConvergence when the iteration budget is too small") {
    SolveOptions opts;
    opts.max_iterations = 5;
    try {
        (void)solve_steady_state(build_chain(grid_config(4, 6, presets::high_positive(0.5))), opts);
        FAIL("expected NoConvergence");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoConvergence);
    }
}

TEST_CASE("steady state is stationary, normalized and balanced for random laws") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int g1 = 1 + static_cast<int>(rng.next_u64() % 8);
        const int g2 = 1 + static_cast<int>(rng.next_u64() % 8);
        auto law = oracle::random_law(rng);
        // Knock out components to exercise reducible patterns too.
        const auto mask = rng.next_u64() % 4;
        if (mask == 1) law = {law.p00 + law.p10 + law.p01, 0.0, 0.0, law.p11};
        if (mask == 2) law = {law.p00 + law.p01, law.p10, 0.0, law.p11};
        const auto config = grid_config(g1, g2, law);
        const auto steady = solve_steady_state(build_chain(config));
        double sum = 0.0;
        for (double v : steady.pi) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(steady.residual <= 1e-12);
        CHECK(balance_residual(steady, law) <= 1e-10);
    }
}

TEST_CASE("stationary_throughput on the 2x2 independent grid") {
    const auto config = grid_config(2, 2, presets::independent(), 5.0);
    const auto report = stationary_throughput(solve_steady_state(build_chain(config)), config);
    const double expected = std::log(11.0) * (0.5 * 0.25 + 0.25 * 0.25);
    CHECK(report.rate[0] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(report.rate[1] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(report.rate[0] == doctest::Approx(0.4496).epsilon(1e-4));
    CHECK(report.source == ModelSource::stationary_accounting);
}

TEST_CASE("stationary_throughput: a node that never harvests earns nothing") {
    const auto config = grid_config(3, 3, {0.5, 0.0, 0.5, 0.0}, 2.0);
    const auto report = markov_throughput(config);
    CHECK(report.rate[0] == 0.0);
    CHECK(report.rate[1] > 0.0);
}

TEST_CASE("stationary_throughput matches the replayed renewal period") {
    const auto config = grid_config(4, 6, presets::high_positive(0.5), 1.0);
    const auto report = markov_throughput(config);
    const auto replay = oracle::replayed_renewal_rates(4, 6, 0.5, 1.0);
    CHECK(report.rate[0] == doctest::Approx(replay[0]).epsilon(1e-9));
    CHECK(report.rate[1] == doctest::Approx(replay[1]).epsilon(1e-9));
}

TEST_CASE("stationary_throughput rejects mismatched grids") {
    const auto steady = solve_steady_state(build_chain(grid_config(2, 3, presets::independent())));
    try {
        (void)stationary_throughput(steady, grid_config(3, 2, presets::independent()));
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
}

TEST_CASE("CSV dump lists non-zero entries row-major") {
    const auto chain = build_chain(grid_config(1, 2, {0.5, 0.0, 0.5, 0.0}));
    std::ostringstream out;
    chain.write_csv(out);
    CHECK(out.str() == "row,col,probability\n0,0,0.5\n0,1,0.5\n1,0,0.5\n1,1,0.5\n");
}
