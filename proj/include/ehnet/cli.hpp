#pragma once

#include "ehnet/model.hpp"
#include "ehnet/sim.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ehnet::cli {

enum ExitCode : int {
    kOk = 0,
    kInternalFailure = 1,
    kUsageError = 2,
    kValidationError = 3,
    kVerificationFailure = 4,
};

enum class Command { analytic, simulate, optimize, sweep, verify };

struct SweepAxes {
    std::array<int, 2> gamma1{1, 10};
    std::array<int, 2> gamma2{1, 10};
    std::vector<double> delta_primes;
};

struct RunSpec {
    Command command = Command::analytic;
    NetworkConfig network{};
    std::optional<SimulationConfig> sim;
    std::optional<SweepAxes> sweep_axes;
    std::optional<std::string> output_path;
    bool verify_closed_form = false; // optimize --verify
    std::size_t threads = 1;
};

/// Parse failure carrying the process exit code (kUsageError or kValidationError).
class CliError : public std::runtime_error {
public:
    CliError(int exit_code, const std::string& message) : std::runtime_error(message), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

/// `--help` was requested; what() holds the help text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses arguments (without the program name). A `--config FILE` JSON
/// document is read first and flags override its values.
RunSpec parse(const std::vector<std::string>& args);

/// The parsed document applied to a JSON config; exposed for tests.
RunSpec parse(const std::vector<std::string>& args, const std::string& config_json);

int execute(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// parse + execute with error reporting; returns the process exit code.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Thread budget: hardware concurrency capped by EHNET_THREADS when set.
std::size_t thread_budget();

} // namespace ehnet::cli
