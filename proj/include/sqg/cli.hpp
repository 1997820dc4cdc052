#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include "sqg/optimize.hpp"

namespace sqg::cli {

enum class Command { payoff, value, sep_value, mu_bar, witness, reconstruct_demo, monotonicity, ppt };
enum class Format { json, csv };

struct RunConfig {
    Command command = Command::payoff;
    std::string game_path;
    std::string state_path;
    std::string losr_path;
    std::optional<std::uint64_t> seed;
    SeesawOptions opts;
    std::string out_path;  // empty: stdout
    Format format = Format::json;
    std::optional<std::string> tol_override;  // raw SQG_TOL_OVERRIDE
};

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConvergence = 2;

/// Parse argv. On --help or a usage error prints to out/err and returns the exit code instead of a config.
std::variant<RunConfig, int> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Run one command. The report goes to config.out_path (or `out`); diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Report body without writing it anywhere; throws the library errors.
std::string render_report(const RunConfig& config);

/// The report with its provenance timestamp removed, for determinism checks.
std::string strip_timestamp(const std::string& json_report);

int main(int argc, const char* const* argv);

}  // namespace sqg::cli
