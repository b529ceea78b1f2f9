#include "ehnet/verify.hpp"

#include "ehnet/analytic.hpp"
#include "ehnet/markov.hpp"
#include "ehnet/optimize.hpp"
#include "ehnet/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ehnet {

namespace {

std::string pair_text(const Thresholds& g) {
    return "(" + std::to_string(g[0]) + "," + std::to_string(g[1]) + ")";
}

std::string ties_text(const std::vector<Thresholds>& ties) {
    std::string s = "{";
    for (std::size_t k = 0; k < ties.size(); ++k) s += (k ? "," : "") + pair_text(ties[k]);
    return s + "}";
}

NetworkConfig at(const VerifyOptions& o, int g1, int g2) {
    return {o.caps, {g1, g2}, o.delta_prime, o.probs};
}

CheckResult check_chains(const VerifyOptions& o) {
    CheckResult r{"chain-structure", true, false, {}};
    double worst_defect = 0.0;
    std::size_t mismatches = 0;
    for (int g1 = 1; g1 <= o.caps[0]; ++g1) {
        for (int g2 = 1; g2 <= o.caps[1]; ++g2) {
            const auto config = at(o, g1, g2);
            const auto chain = build_chain(config);
            worst_defect = std::max(worst_defect, chain.max_row_defect());
            const StateGrid& grid = chain.grid();
            for (std::size_t s = 0; s < grid.size(); ++s) {
                for (int e1 = 0; e1 <= 1; ++e1) {
                    for (int e2 = 0; e2 <= 1; ++e2) {
                        const double mass = e1 ? (e2 ? o.probs.p11 : o.probs.p10) : (e2 ? o.probs.p01 : o.probs.p00);
                        if (mass == 0.0) continue;
                        const auto next = step(grid.state(s), {e1, e2}, config).next;
                        if (chain.at(s, grid.index(next.level[0], next.level[1])) < mass) ++mismatches;
                    }
                }
            }
        }
    }
    r.passed = worst_defect <= 1e-12 && mismatches == 0;
    std::ostringstream d;
    d << "max row defect " << worst_defect << ", step/chain mismatches " << mismatches;
    r.detail = d.str();
    return r;
}

std::vector<CheckResult> check_steady_states(const VerifyOptions& o) {
    CheckResult balance{"steady-state-balance", true, false, {}};
    CheckResult uniform{"uniform-occupancy", true, false, {}};
    CheckResult accounting{"model-vs-accounting", true, false, {}};
    const bool expect_uniform = o.probs.p01 > 0.0 && o.probs.p10 > 0.0;
    double worst_balance = 0.0;
    double worst_uniform = 0.0;
    double worst_accounting = 0.0;
    try {
        for (int g1 = 1; g1 <= o.caps[0]; ++g1) {
            for (int g2 = 1; g2 <= o.caps[1]; ++g2) {
                const auto config = at(o, g1, g2);
                const auto steady = solve_steady_state(build_chain(config));
                worst_balance = std::max(worst_balance, balance_residual(steady, o.probs));
                if (expect_uniform) {
                    const double u = 1.0 / (static_cast<double>(g1) * g2);
                    for (double v : steady.pi) worst_uniform = std::max(worst_uniform, std::abs(v - u));
                }
                const auto acc = stationary_throughput(steady, config);
                const auto model = model_throughput(config);
                for (std::size_t n = 0; n < 2; ++n) {
                    worst_accounting = std::max(worst_accounting, std::abs(acc.rate[n] - model.rate[n]));
                }
            }
        }
    } catch (const Error& e) {
        balance.passed = false;
        balance.detail = e.what();
        return {balance};
    }
    std::ostringstream d;
    d << "max balance residual " << worst_balance;
    balance.detail = d.str();
    balance.passed = worst_balance <= 1e-10;

    std::vector<CheckResult> out{balance};
    if (expect_uniform) {
        std::ostringstream du;
        du << "max |pi - 1/(g1 g2)| " << worst_uniform;
        uniform.detail = du.str();
        uniform.passed = worst_uniform <= 1e-9;
        out.push_back(uniform);
    }
    std::ostringstream da;
    da << "model " << to_string(select_model(o.probs)) << ", max rate gap " << worst_accounting;
    accounting.detail = da.str();
    accounting.passed = worst_accounting <= 1e-9;
    out.push_back(accounting);
    return out;
}

CheckResult check_simulation(const VerifyOptions& o) {
    CheckResult r{"simulation-re", true, false, {}};
    std::vector<SimulationConfig> configs;
    const int g2 = o.caps[1];
    for (int g1 = 1; g1 <= o.caps[0]; ++g1) {
        configs.push_back({o.horizon, stream_seed(o.seed, configs.size()), at(o, g1, g2)});
    }
    const auto results = run_all(configs, o.threads);
    double worst_re = 0.0;
    std::size_t failures = 0;
    for (std::size_t k = 0; k < configs.size(); ++k) {
        const auto analytic = model_throughput(configs[k].network);
        const auto metrics = compare(results[k], analytic);
        if (metrics.total.re_percent) {
            worst_re = std::max(worst_re, std::abs(*metrics.total.re_percent));
            if (std::abs(*metrics.total.re_percent) > o.max_abs_re_percent) ++failures;
        } else if (results[k].report.total != 0.0) {
            ++failures;
        }
    }
    r.passed = failures == 0;
    std::ostringstream d;
    d << "gamma2=" << g2 << ", gamma1 in [1," << o.caps[0] << "], T=" << o.horizon << ", max |%RE| " << worst_re
      << " (limit " << o.max_abs_re_percent << "), failures " << failures;
    r.detail = d.str();
    return r;
}

std::vector<CheckResult> check_closed_forms(const VerifyOptions& o) {
    const auto& p = o.probs;
    const auto exhaustive = exhaustive_search(o.caps, p, o.delta_prime, o.threads);
    std::vector<CheckResult> out;

    auto describe = [&](CheckResult& r, const OptimizationOutcome& closed, const ClosedFormCheck& c) {
        r.detail = "closed " + ties_text(closed.ties) + ", exhaustive " + ties_text(exhaustive.ties) +
                   (c.ties_equal ? ", agree" : ", disagree");
    };

    const bool negative = p.p00 == 0.0 && p.p11 == 0.0 && p.p10 > 0.0 && p.p01 > 0.0;
    const bool positive = p.p10 == 0.0 && p.p01 == 0.0 && p.p11 > 0.0;
    if (negative) {
        CheckResult r{"closed-form-negative", true, false, {}};
        const auto closed = closed_form_negative(o.caps, p.p10, o.delta_prime);
        const auto c = check_closed_form(closed, exhaustive, p, o.delta_prime);
        describe(r, closed, c);
        r.passed = c.ties_equal;
        out.push_back(r);
    } else if (positive) {
        if (o.caps[0] != o.caps[1]) {
            CheckResult r{"closed-form-positive-small", true, true, {}};
            const auto closed = closed_form_positive_small(o.caps, p.p11, o.delta_prime);
            const auto c = check_closed_form(closed, exhaustive, p, o.delta_prime);
            describe(r, closed, c);
            r.passed = c.dominated;
            r.informational = c.dominated;
            out.push_back(r);
        }
        if (o.delta_prime > 1.0) {
            CheckResult r{"closed-form-positive-large", true, true, {}};
            const auto closed = closed_form_positive_large(o.caps, p.p11, o.delta_prime);
            const auto c = check_closed_form(closed, exhaustive, p, o.delta_prime);
            describe(r, closed, c);
            r.passed = c.dominated;
            r.informational = c.dominated;
            out.push_back(r);
        }
    }
    CheckResult complete{"search-completeness", true, false, {}};
    complete.passed = exhaustive.evaluated == static_cast<std::size_t>(o.caps[0]) * o.caps[1];
    complete.detail = "evaluated " + std::to_string(exhaustive.evaluated) + " points, best " +
                      pair_text(exhaustive.best);
    out.push_back(complete);
    return out;
}

} // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
    std::vector<CheckResult> out;
    out.push_back(check_chains(options));
    for (auto& r : check_steady_states(options)) out.push_back(std::move(r));
    out.push_back(check_simulation(options));
    for (auto& r : check_closed_forms(options)) out.push_back(std::move(r));
    return out;
}

} // namespace ehnet
