// Acceptance suite. Prints one PASS/FAIL line per criterion; `--only N` runs a
// single criterion. Exit status is 1 if any selected criterion fails.

#include "ehnet/analytic.hpp"
#include "ehnet/markov.hpp"
#include "ehnet/optimize.hpp"
#include "ehnet/rng.hpp"
#include "ehnet/sim.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace ehnet;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;
};

std::size_t threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(double x, int digits = 6) {
    std::ostringstream s;
    s.precision(digits);
    s << x;
    return s.str();
}

std::string pairs_text(const std::vector<Thresholds>& ties) {
    std::string s = "{";
    for (std::size_t k = 0; k < ties.size(); ++k) {
        if (k) s += ", ";
        s += "(" + std::to_string(ties[k][0]) + "," + std::to_string(ties[k][1]) + ")";
    }
    return s + "}";
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 1. Uniform stationary law whenever both single-node harvest events have mass.
Outcome uniformity() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(20240601);
    double worst = 0.0;
    std::size_t solved = 0;
    for (int law = 0; law < 50; ++law) {
        EHProbabilities probs = oracle::random_law(rng);
        while (!(probs.p01 > 0.0 && probs.p10 > 0.0)) probs = oracle::random_law(rng);
        for (int g1 = 1; g1 <= 10; ++g1) {
            for (int g2 = 1; g2 <= 10; ++g2) {
                const NetworkConfig c{{g1, g2}, {g1, g2}, 1.0, probs};
                const auto ss = solve_steady_state(build_chain(c));
                const double target = 1.0 / (g1 * g2);
                for (double x : ss.pi) worst = std::max(worst, std::abs(x - target));
                ++solved;
            }
        }
    }
    const double elapsed = seconds_since(start);
    return {worst <= 1e-9 && elapsed < 30.0, std::to_string(solved) + " chains, max |pi - 1/(g1 g2)| = " + fmt(worst) +
                                                 ", " + fmt(elapsed, 3) + " s (limit 30 s)"};
}

// 2. Closed form against simulation for random configs with p01, p10 > 0.
Outcome closed_form_vs_simulation() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(77);
    std::vector<SimulationConfig> runs;
    for (int k = 0; k < 20; ++k) {
        EHProbabilities probs = oracle::random_law(rng);
        while (!(probs.p01 > 0.0 && probs.p10 > 0.0)) probs = oracle::random_law(rng);
        const int g1 = 1 + static_cast<int>(rng.uniform() * 10.0);
        const int g2 = 1 + static_cast<int>(rng.uniform() * 10.0);
        const double dp = 0.1 + rng.uniform() * (50.0 - 0.1);
        runs.push_back({1'000'000, stream_seed(5150, static_cast<std::uint64_t>(k)), {{g1, g2}, {g1, g2}, dp, probs}, 20});
    }
    const auto results = run_all(runs, threads());
    Outcome o;
    double worst_sigma = 0.0, worst_re = 0.0;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const auto exact = lemma1_throughput(runs[k].network);
        for (std::size_t n = 0; n < 2; ++n) {
            const double diff = std::abs(results[k].report.rate[n] - exact.rate[n]);
            const double sigma = results[k].std_error[n] > 0.0 ? diff / results[k].std_error[n] : (diff == 0.0 ? 0.0 : 1e300);
            const auto m = compare(exact.rate[n], results[k].report.rate[n]);
            const double re = m.re_percent ? std::abs(*m.re_percent) : 0.0;
            worst_sigma = std::max(worst_sigma, sigma);
            worst_re = std::max(worst_re, re);
            if (sigma > 3.0 || re > 2.0) {
                o.passed = false;
                o.detail += "config " + std::to_string(k) + " node " + std::to_string(n + 1) + ": " + fmt(sigma, 3) +
                            " SE, |%RE| " + fmt(re, 3) + "; ";
            }
        }
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 120.0) o.passed = false;
    o.detail += "max deviation " + fmt(worst_sigma, 3) + " SE, max |%RE| " + fmt(worst_re, 3) + "%, " + fmt(elapsed, 3) +
                " s (limit 120 s)";
    return o;
}

// 3. High negative correlation optimum.
Outcome negative_optimum() {
    const auto exhaustive = exhaustive_search({10, 10}, presets::high_negative(0.5), 5.0, threads());
    const auto closed = closed_form_negative({10, 10}, 0.5, 5.0);
    const std::vector<Thresholds> expected{{1, 1}};
    const bool ok = exhaustive.ties == expected && closed.ties == exhaustive.ties;
    return {ok, "exhaustive " + pairs_text(exhaustive.ties) + ", closed form " + pairs_text(closed.ties)};
}

// 4. High positive correlation optimum at large delta'.
Outcome positive_large_optimum() {
    const auto exhaustive = exhaustive_search({10, 10}, presets::high_positive(0.5), 30.0, threads());
    const std::vector<Thresholds> expected{{1, 10}, {10, 1}};
    return {exhaustive.ties == expected, "tie set " + pairs_text(exhaustive.ties) + ", best " + fmt(exhaustive.best_value)};
}

// 5. Renewal formula, chain accounting and simulation on the same network.
Outcome renewal_triangle() {
    const NetworkConfig c{{4, 6}, {4, 6}, 1.0, presets::high_positive(0.5)};
    const auto renewal = renewal_throughput(4, 6, 0.5, 1.0);
    const auto ss = solve_steady_state(build_chain(c));
    const auto chain = stationary_throughput(ss, c);
    const auto sim = run({1'000'000, 4242, c, 20});
    Outcome o;
    o.passed = ss.method == SolveMethod::cesaro_power_iteration;
    std::string sigmas;
    for (std::size_t n = 0; n < 2; ++n) {
        const double gap = std::abs(renewal.rate[n] - chain.rate[n]);
        const double sigma = std::abs(sim.report.rate[n] - renewal.rate[n]) / sim.std_error[n];
        o.passed = o.passed && gap <= 1e-9 && sigma <= 3.0;
        sigmas += " node" + std::to_string(n + 1) + " |renewal-chain| " + fmt(gap, 3) + ", sim " + fmt(sigma, 3) + " SE;";
    }
    o.passed = o.passed && std::abs(renewal.rate[0] - 0.1341) < 5e-5 && std::abs(renewal.rate[1] - 0.0811) < 5e-5;
    o.detail = "renewal (" + fmt(renewal.rate[0]) + ", " + fmt(renewal.rate[1]) + "), chain (" + fmt(chain.rate[0]) + ", " +
               fmt(chain.rate[1]) + "), sim (" + fmt(sim.report.rate[0]) + ", " + fmt(sim.report.rate[1]) + ");" + sigmas +
               " chain solved by " + (ss.method == SolveMethod::cesaro_power_iteration ? "Cesaro" : "linear solve");
    return o;
}

std::vector<SurfacePoint> read_surface_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::vector<SurfacePoint> rows;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string cell[6];
        for (auto& s : cell) std::getline(fields, s, ',');
        SurfacePoint p;
        p.gammas = {std::stoi(cell[0]), std::stoi(cell[1])};
        p.report.rate = {std::stod(cell[2]), std::stod(cell[3])};
        p.report.total = std::stod(cell[4]);
        rows.push_back(p);
    }
    return rows;
}

// 6. Small-delta' closed form against the exact argmax, and GCD drops in the surface.
Outcome positive_small_optimum() {
    const double dp = 0.04;
    const auto probs = presets::high_positive(0.5);
    Outcome o;
    for (const Capacities caps : {Capacities{4, 6}, Capacities{9, 10}, Capacities{5, 12}}) {
        const auto closed = closed_form_positive_small(caps, 0.5, dp);
        const auto exhaustive = exhaustive_search(caps, probs, dp, threads());
        const bool same = closed.ties == exhaustive.ties;
        o.passed = o.passed && same;
        o.detail += "caps (" + std::to_string(caps[0]) + "," + std::to_string(caps[1]) + "): closed " +
                    pairs_text(closed.ties) + " exhaustive " + pairs_text(exhaustive.ties) + (same ? " ok" : " MISMATCH") +
                    "; ";

        std::ostringstream csv;
        write_surface_csv(csv, evaluate_surface(caps, probs, dp, threads()));
        const auto rows = read_surface_csv(csv.str());
        const auto total_at = [&](int a, int b) { return rows[static_cast<std::size_t>((a - 1) * caps[1] + (b - 1))].report.total; };
        int checked = 0, dropped = 0;
        for (int a = 1; a <= caps[0]; ++a) {
            for (int b = 1; b <= caps[1]; ++b) {
                if (std::gcd(a, b) < 2) continue;
                bool below_all = true, any = false;
                for (const auto [da, db] : {std::pair{1, 0}, std::pair{-1, 0}, std::pair{0, 1}, std::pair{0, -1}}) {
                    const int na = a + da, nb = b + db;
                    if (na < 1 || nb < 1 || na > caps[0] || nb > caps[1] || std::gcd(na, nb) != 1) continue;
                    any = true;
                    below_all = below_all && total_at(a, b) < total_at(na, nb);
                }
                ++checked;
                if (any && below_all) ++dropped;
            }
        }
        o.passed = o.passed && checked == dropped;
        o.detail += "GCD drops " + std::to_string(dropped) + "/" + std::to_string(checked) + "; ";
    }
    return o;
}

// 7. Finite-difference gradient of the negative-correlation objective.
Outcome gradient_negativity() {
    Rng rng(909);
    int negative = 0, total = 0;
    double largest = -1e300;
    for (double p : {0.1, 0.5, 0.9}) {
        for (double dp : {0.1, 1.0, 10.0}) {
            for (int k = 0; k < 200; ++k) {
                const double g1 = 1.0 + 49.0 * rng.uniform();
                const double g2 = 1.0 + 49.0 * rng.uniform();
                const double h1 = 1e-5 * g1, h2 = 1e-5 * g2;
                const double d1 = (negative_corr_z_relaxed(g1 + h1, g2, p, dp) - negative_corr_z_relaxed(g1 - h1, g2, p, dp)) /
                                  (2.0 * h1);
                const double d2 = (negative_corr_z_relaxed(g1, g2 + h2, p, dp) - negative_corr_z_relaxed(g1, g2 - h2, p, dp)) /
                                  (2.0 * h2);
                largest = std::max({largest, d1, d2});
                total += 2;
                negative += (d1 < 0.0) + (d2 < 0.0);
            }
        }
    }
    return {negative == total, std::to_string(negative) + "/" + std::to_string(total) +
                                   " partials negative, largest " + fmt(largest)};
}

// 8. Same seed gives the same CSV bytes; a different seed does not.
Outcome determinism() {
    const NetworkConfig net{{5, 9}, {5, 9}, 30.0, presets::independent()};
    const auto csv_for = [&](std::uint64_t seed) {
        const SimulationConfig cfg{100'000, seed, net, 20};
        const auto result = run(cfg);
        std::ostringstream s;
        write_simulation_csv_header(s);
        write_simulation_csv_row(s, cfg, result, compare(result, lemma1_throughput(net)));
        return s.str();
    };
    const auto a = csv_for(7), b = csv_for(7), c = csv_for(8);
    return {a == b && a != c, std::string("seed 7 twice ") + (a == b ? "identical" : "DIFFERENT") + ", seed 8 " +
                                  (a != c ? "differs" : "IDENTICAL")};
}

// 9. Error metric definitions.
Outcome metric_definitions() {
    const auto m = compare(2.0, 1.9);
    const bool ok = m.re_percent && *m.re_percent == 5.0 && m.ae_percent == 10.0;
    return {ok, "compare(2.0, 1.9) = (" + (m.re_percent ? fmt(*m.re_percent, 17) : std::string("undefined")) + ", " +
                    fmt(m.ae_percent, 17) + ")"};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
};

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int k = 1; k < argc; ++k) {
        if (std::string(argv[k]) == "--only" && k + 1 < argc) only = std::atoi(argv[++k]);
    }
    const std::vector<Criterion> criteria = {
        {1, "uniform stationary law", uniformity},
        {2, "closed form vs simulation", closed_form_vs_simulation},
        {3, "negative-correlation optimum (1,1)", negative_optimum},
        {4, "positive-correlation large-delta' tie set", positive_large_optimum},
        {5, "renewal / chain / simulation agreement", renewal_triangle},
        {6, "positive-correlation small-delta' closed form and GCD drops", positive_small_optimum},
        {7, "negative-correlation gradient sign", gradient_negativity},
        {8, "simulator determinism", determinism},
        {9, "%RE and %AE definitions", metric_definitions},
    };
    bool all = true;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail << '\n';
        all = all && o.passed;
    }
    return all ? 0 : 1;
}
