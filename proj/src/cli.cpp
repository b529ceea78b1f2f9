#include "ehnet/cli.hpp"

#include "ehnet/analytic.hpp"
#include "ehnet/optimize.hpp"
#include "ehnet/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace ehnet::cli {

namespace {

using nlohmann::json;

// Values as given on the command line or in the config file; empty means
// "not supplied at this level".
struct RawOptions {
    std::optional<std::string> preset;
    std::optional<double> p;
    std::vector<double> probs;
    std::vector<int> caps;
    std::vector<int> gammas;
    std::optional<double> delta_prime;
    std::optional<std::uint64_t> horizon;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> batches;
    std::vector<int> gamma1_range;
    std::vector<int> gamma2_range;
    std::vector<double> delta_primes;
    std::optional<std::string> output;
    std::optional<std::string> config_path;
    bool verify = false;
};

[[noreturn]] void usage_error(const std::string& message) { throw CliError(kUsageError, "usage error: " + message); }
[[noreturn]] void validation_error(const std::string& message) {
    throw CliError(kValidationError, "validation error: " + message);
}

void add_network_options(CLI::App* sub, RawOptions& raw) {
    sub->add_option("--config", raw.config_path, "JSON config file; flags override its values");
    sub->add_option("--preset", raw.preset, "high-negative | high-positive | independent");
    sub->add_option("--p", raw.p, "Harvest probability used by the high-* presets (default 0.5)");
    sub->add_option("--probs", raw.probs, "Joint harvest law p00 p10 p01 p11")->expected(4);
    sub->add_option("--caps", raw.caps, "Battery capacities B1 B2")->expected(2);
    sub->add_option("--delta-prime", raw.delta_prime, "Normalized SNR per energy unit");
    sub->add_option("--output", raw.output, "Output file (CSV)");
}

void add_gammas(CLI::App* sub, RawOptions& raw) {
    sub->add_option("--gammas", raw.gammas, "Thresholds gamma1 gamma2")->expected(2);
}

void add_sim_options(CLI::App* sub, RawOptions& raw) {
    sub->add_option("--horizon", raw.horizon, "Simulated slots");
    sub->add_option("--seed", raw.seed, "Random seed (default 1)");
    sub->add_option("--batches", raw.batches, "Batches for the batch-means standard error (default 20)");
}

template <typename T>
T json_get(const json& doc, const char* key) {
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        validation_error(std::string("config: ") + key + ": " + e.what());
    }
}

template <typename T>
void fill(std::optional<T>& slot, const json& doc, const char* key) {
    if (!slot && doc.contains(key)) slot = json_get<T>(doc, key);
}

template <typename T>
void fill(std::vector<T>& slot, const json& doc, const char* key, std::size_t arity) {
    if (!slot.empty() || !doc.contains(key)) return;
    slot = json_get<std::vector<T>>(doc, key);
    if (arity != 0 && slot.size() != arity) {
        validation_error(std::string("config: ") + key + ": expected " + std::to_string(arity) + " values");
    }
}

void merge_config(RawOptions& raw, const json& doc, bool flag_probs) {
    if (!doc.is_object()) validation_error("config: top level must be a JSON object");
    static const std::vector<std::string> known = {"command", "preset", "p",      "probs",   "caps",
                                                   "gammas",  "delta_prime", "horizon", "seed", "batches",
                                                   "sweep",   "output"};
    for (const auto& [key, value] : doc.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) validation_error("config: unknown key '" + key + "'");
    }
    // A law given by flags (either --probs or --preset) replaces the file's law.
    if (!flag_probs) {
        fill(raw.preset, doc, "preset");
        if (doc.contains("probs")) {
            const auto& node = doc.at("probs");
            if (node.is_object()) {
                raw.probs = {json_get<double>(node, "p00"), json_get<double>(node, "p10"), json_get<double>(node, "p01"),
                             json_get<double>(node, "p11")};
            } else {
                fill(raw.probs, doc, "probs", 4);
            }
        }
    }
    fill(raw.p, doc, "p");
    fill(raw.caps, doc, "caps", 2);
    fill(raw.gammas, doc, "gammas", 2);
    fill(raw.delta_prime, doc, "delta_prime");
    fill(raw.horizon, doc, "horizon");
    fill(raw.seed, doc, "seed");
    fill(raw.batches, doc, "batches");
    fill(raw.output, doc, "output");
    if (doc.contains("sweep")) {
        const auto& sweep = doc.at("sweep");
        if (!sweep.is_object()) validation_error("config: sweep must be an object");
        fill(raw.gamma1_range, sweep, "gamma1", 2);
        fill(raw.gamma2_range, sweep, "gamma2", 2);
        fill(raw.delta_primes, sweep, "delta_primes", 0);
    }
}

EHProbabilities resolve_probs(const RawOptions& raw) {
    if (raw.preset && !raw.probs.empty()) usage_error("--preset and --probs are mutually exclusive");
    if (!raw.probs.empty()) return {raw.probs[0], raw.probs[1], raw.probs[2], raw.probs[3]};
    const double p = raw.p.value_or(0.5);
    if (!(p >= 0.0 && p <= 1.0)) validation_error("p: " + std::to_string(p) + " is outside [0, 1]");
    const std::string preset = raw.preset.value_or("independent");
    if (preset == "high-negative") return presets::high_negative(p);
    if (preset == "high-positive") return presets::high_positive(p);
    if (preset == "independent") return presets::independent();
    validation_error("preset: unknown preset '" + preset + "'");
}

RunSpec build_spec(Command command, const RawOptions& raw) {
    RunSpec spec;
    spec.command = command;
    spec.threads = thread_budget();
    spec.output_path = raw.output;
    spec.verify_closed_form = raw.verify;

    auto& net = spec.network;
    net.probs = resolve_probs(raw);
    if (!raw.delta_prime) usage_error("--delta-prime is required");
    net.delta_prime = *raw.delta_prime;

    const bool needs_gammas = command == Command::analytic || command == Command::simulate;
    if (needs_gammas) {
        if (raw.gammas.empty()) usage_error("--gammas is required");
        net.gammas = {raw.gammas[0], raw.gammas[1]};
        net.caps = raw.caps.empty() ? net.gammas : Capacities{raw.caps[0], raw.caps[1]};
    } else {
        net.caps = raw.caps.empty() ? Capacities{10, 10} : Capacities{raw.caps[0], raw.caps[1]};
        net.gammas = {1, 1};
    }

    try {
        validate(net);
    } catch (const Error& e) {
        validation_error(e.what());
    }

    if (command == Command::simulate || command == Command::verify) {
        if (command == Command::simulate && !raw.horizon) usage_error("--horizon is required for simulate");
        SimulationConfig sim;
        sim.horizon = raw.horizon.value_or(100'000);
        sim.seed = raw.seed.value_or(1);
        sim.batches = raw.batches.value_or(20);
        sim.network = net;
        if (sim.horizon < 1) validation_error("horizon: must be >= 1");
        if (sim.batches < 1) validation_error("batches: must be >= 1");
        spec.sim = sim;
    }

    if (command == Command::sweep) {
        SweepAxes axes;
        axes.gamma1 = raw.gamma1_range.empty() ? std::array<int, 2>{1, net.caps[0]}
                                               : std::array<int, 2>{raw.gamma1_range[0], raw.gamma1_range[1]};
        axes.gamma2 = raw.gamma2_range.empty() ? std::array<int, 2>{1, net.caps[1]}
                                               : std::array<int, 2>{raw.gamma2_range[0], raw.gamma2_range[1]};
        for (const auto& [name, range] : {std::pair{"gamma1-range", axes.gamma1}, std::pair{"gamma2-range", axes.gamma2}}) {
            if (range[0] < 1 || range[1] < range[0]) validation_error(std::string(name) + ": need 1 <= lo <= hi");
        }
        axes.delta_primes = raw.delta_primes.empty() ? std::vector<double>{net.delta_prime} : raw.delta_primes;
        for (double dp : axes.delta_primes) {
            if (!(dp > 0.0)) validation_error("delta-primes: values must be > 0");
        }
        spec.sweep_axes = axes;
    }
    return spec;
}

std::string pair_text(const Thresholds& g) {
    return "(" + std::to_string(g[0]) + ", " + std::to_string(g[1]) + ")";
}

void print_report(std::ostream& out, const ThroughputReport& r) {
    out << "model        " << to_string(r.source) << '\n'
        << "r1           " << r.rate[0] << '\n'
        << "r2           " << r.rate[1] << '\n'
        << "total        " << r.total << '\n';
}

void print_metrics(std::ostream& out, const char* label, const ErrorMetrics& m) {
    out << label << " %RE " << (m.re_percent ? std::to_string(*m.re_percent) : std::string("undefined"))
        << "  %AE " << m.ae_percent << '\n';
}

std::ofstream open_output(const std::string& path) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
    return file;
}

void print_outcome(std::ostream& out, const char* label, const OptimizationOutcome& o) {
    out << label << '\n'
        << "  model      " << to_string(o.model_used) << '\n'
        << "  best       " << pair_text(o.best) << '\n'
        << "  value      " << o.best_value << '\n'
        << "  evaluated  " << o.evaluated << '\n'
        << "  ties      ";
    for (const auto& t : o.ties) out << ' ' << pair_text(t);
    out << '\n';
}

int execute_analytic(const RunSpec& spec, std::ostream& out) {
    const auto& net = spec.network;
    out << "gammas       " << pair_text(net.gammas) << '\n' << "delta_prime  " << net.delta_prime << '\n';
    print_report(out, model_throughput(net));
    return kOk;
}

int execute_simulate(const RunSpec& spec, std::ostream& out) {
    const auto& sim = *spec.sim;
    const auto result = run(sim);
    const auto analytic = model_throughput(sim.network);
    const auto metrics = compare(result, analytic);
    out << "gammas       " << pair_text(sim.network.gammas) << '\n'
        << "horizon      " << sim.horizon << '\n'
        << "seed         " << sim.seed << '\n'
        << "successes    " << result.successes[0] << ' ' << result.successes[1] << '\n'
        << "collisions   " << result.collisions << '\n'
        << "r1_sim       " << result.report.rate[0] << " +/- " << result.std_error[0] << '\n'
        << "r2_sim       " << result.report.rate[1] << " +/- " << result.std_error[1] << '\n'
        << "total_sim    " << result.report.total << " +/- " << result.total_std_error << '\n'
        << "analytic     " << to_string(analytic.source) << ' ' << analytic.rate[0] << ' ' << analytic.rate[1] << ' '
        << analytic.total << '\n';
    print_metrics(out, "node1 ", metrics.node[0]);
    print_metrics(out, "node2 ", metrics.node[1]);
    print_metrics(out, "total ", metrics.total);
    if (spec.output_path) {
        auto file = open_output(*spec.output_path);
        write_simulation_csv_header(file);
        write_simulation_csv_row(file, sim, result, metrics);
    }
    return kOk;
}

int execute_optimize(const RunSpec& spec, std::ostream& out) {
    const auto& net = spec.network;
    const auto surface = evaluate_surface(net.caps, net.probs, net.delta_prime, spec.threads);
    const auto exhaustive = best_of(surface);
    print_outcome(out, "exhaustive", exhaustive);
    if (spec.output_path) {
        auto file = open_output(*spec.output_path);
        write_surface_csv(file, surface);
    }
    if (!spec.verify_closed_form) return kOk;

    const auto& p = net.probs;
    auto report = [&](const char* label, const OptimizationOutcome& closed) {
        print_outcome(out, label, closed);
        const auto check = check_closed_form(closed, exhaustive, p, net.delta_prime);
        out << "  exact      " << check.exact_at_closed << '\n'
            << "  agreement  " << (check.ties_equal ? "agree" : "disagree (reported)") << '\n';
    };
    if (p.p00 == 0.0 && p.p11 == 0.0 && p.p10 > 0.0 && p.p01 > 0.0) {
        report("closed-form negative", closed_form_negative(net.caps, p.p10, net.delta_prime));
    } else if (p.p10 == 0.0 && p.p01 == 0.0 && p.p11 > 0.0) {
        try {
            report("closed-form positive small-delta", closed_form_positive_small(net.caps, p.p11, net.delta_prime));
        } catch (const Error& e) {
            out << "closed-form positive small-delta: " << e.what() << '\n';
        }
        try {
            report("closed-form positive large-delta", closed_form_positive_large(net.caps, p.p11, net.delta_prime));
        } catch (const Error& e) {
            out << "closed-form positive large-delta: " << e.what() << '\n';
        }
    } else {
        out << "no closed form applies to this harvest law\n";
    }
    return kOk;
}

std::string with_suffix(const std::string& path, double dp) {
    std::ostringstream tag;
    tag << "_dp" << dp;
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + tag.str();
    return path.substr(0, dot) + tag.str() + path.substr(dot);
}

int execute_sweep(const RunSpec& spec, std::ostream& out) {
    const auto& axes = *spec.sweep_axes;
    const bool many = axes.delta_primes.size() > 1;
    for (double dp : axes.delta_primes) {
        const auto surface = evaluate_surface(axes.gamma1, axes.gamma2, spec.network.probs, dp, spec.threads);
        if (spec.output_path) {
            const std::string path = many ? with_suffix(*spec.output_path, dp) : *spec.output_path;
            auto file = open_output(path);
            write_surface_csv(file, surface);
            out << "wrote " << surface.size() << " rows to " << path << '\n';
        } else {
            if (many) out << "# delta_prime=" << dp << '\n';
            write_surface_csv(out, surface);
        }
    }
    return kOk;
}

int execute_verify(const RunSpec& spec, std::ostream& out) {
    VerifyOptions options;
    options.caps = spec.network.caps;
    options.probs = spec.network.probs;
    options.delta_prime = spec.network.delta_prime;
    options.horizon = spec.sim->horizon;
    options.seed = spec.sim->seed;
    options.threads = spec.threads;
    bool ok = true;
    for (const auto& check : run_verification(options)) {
        const char* tag = check.informational ? "INFO" : (check.passed ? "PASS" : "FAIL");
        out << tag << ' ' << check.name << ": " << check.detail << '\n';
        ok = ok && check.passed;
    }
    out << (ok ? "verification passed" : "verification FAILED") << '\n';
    return ok ? kOk : kVerificationFailure;
}

} // namespace

std::size_t thread_budget() {
    std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("EHNET_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap >= 1) threads = std::min(threads, static_cast<std::size_t>(cap));
    }
    return threads;
}

namespace {

RunSpec parse_impl(const std::vector<std::string>& args, const std::optional<std::string>& config_text) {
    CLI::App app{"Two-node energy-harvesting random-access network: throughput, simulation and threshold search",
                 "ehnet"};
    app.require_subcommand(1);
    RawOptions raw;

    auto* analytic = app.add_subcommand("analytic", "Long-term throughput from the matching analytic model");
    add_network_options(analytic, raw);
    add_gammas(analytic, raw);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation compared against the analytic value");
    add_network_options(simulate, raw);
    add_gammas(simulate, raw);
    add_sim_options(simulate, raw);

    auto* optimize = app.add_subcommand("optimize", "Exhaustive threshold search with the full tie set");
    add_network_options(optimize, raw);
    optimize->add_flag("--verify", raw.verify, "Cross-check the closed-form thresholds against the search");

    auto* sweep = app.add_subcommand("sweep", "Write the objective surface as CSV");
    add_network_options(sweep, raw);
    sweep->add_option("--gamma1-range", raw.gamma1_range, "lo hi")->expected(2);
    sweep->add_option("--gamma2-range", raw.gamma2_range, "lo hi")->expected(2);
    sweep->add_option("--delta-primes", raw.delta_primes, "One surface per value")->expected(1, 1 << 20);

    auto* verify = app.add_subcommand("verify", "Run the invariant suite; exit 4 on any failure");
    add_network_options(verify, raw);
    add_sim_options(verify, raw);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested(app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::ParseError& e) {
        usage_error(e.what());
    }

    Command command = Command::analytic;
    for (const auto& [sub, cmd] : {std::pair{analytic, Command::analytic}, std::pair{simulate, Command::simulate},
                                   std::pair{optimize, Command::optimize}, std::pair{sweep, Command::sweep},
                                   std::pair{verify, Command::verify}}) {
        if (sub->parsed()) command = cmd;
    }

    std::optional<std::string> text = config_text;
    if (!text && raw.config_path) {
        std::ifstream file(*raw.config_path);
        if (!file) validation_error("config: cannot read '" + *raw.config_path + "'");
        std::ostringstream buf;
        buf << file.rdbuf();
        text = buf.str();
    }
    if (text) {
        json doc;
        try {
            doc = json::parse(*text);
        } catch (const json::parse_error& e) {
            validation_error(std::string("config: ") + e.what());
        }
        merge_config(raw, doc, raw.preset.has_value() || !raw.probs.empty());
    }
    return build_spec(command, raw);
}

} // namespace

RunSpec parse(const std::vector<std::string>& args) { return parse_impl(args, std::nullopt); }

RunSpec parse(const std::vector<std::string>& args, const std::string& config_json) {
    return parse_impl(args, config_json);
}

int execute(const RunSpec& spec, std::ostream& out, std::ostream& err) {
    const auto flags = out.flags();
    const auto precision = out.precision(6);
    int code = kInternalFailure;
    try {
        switch (spec.command) {
        case Command::analytic: code = execute_analytic(spec, out); break;
        case Command::simulate: code = execute_simulate(spec, out); break;
        case Command::optimize: code = execute_optimize(spec, out); break;
        case Command::sweep: code = execute_sweep(spec, out); break;
        case Command::verify: code = execute_verify(spec, out); break;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        code = kInternalFailure;
    }
    out.flags(flags);
    out.precision(precision);
    return code;
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return execute(parse(args), out, err);
    } catch (const HelpRequested& help) {
        out << help.what();
        return kOk;
    } catch (const CliError& e) {
        err << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInternalFailure;
    }
}

} // namespace ehnet::cli
