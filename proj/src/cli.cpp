#include "sqg/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <variant>

#include <CLI11.hpp>

#include "sqg/io.hpp"

#ifndef SQG_VERSION
#define SQG_VERSION "unknown"
#endif

namespace sqg::cli {

using io::json;

namespace {

const std::map<std::string, Command>& command_names() {
    static const std::map<std::string, Command> names{
        {"payoff", Command::payoff},       {"value", Command::value},
        {"sep-value", Command::sep_value}, {"mu-bar", Command::mu_bar},
        {"witness", Command::witness},     {"reconstruct-demo", Command::reconstruct_demo},
        {"monotonicity", Command::monotonicity}, {"ppt", Command::ppt}};
    return names;
}

std::string command_name(Command c) {
    for (const auto& [name, cmd] : command_names())
        if (cmd == c) return name;
    return "?";
}

bool is_stochastic(Command c) {
    return c == Command::value || c == Command::sep_value || c == Command::witness || c == Command::monotonicity;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json provenance(const RunConfig& c) {
    json p;
    p["version"] = SQG_VERSION;
    p["command"] = command_name(c.command);
    p["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    p["restarts"] = c.opts.restarts;
    p["tolerances"] = {{"herm", kDefaultTolerances.herm},
                       {"psd", kDefaultTolerances.psd},
                       {"eq", kDefaultTolerances.eq},
                       {"gap_tol", c.opts.gap_tol},
                       {"improve_tol", c.opts.improve_tol}};
    p["tol_override"] = c.tol_override ? json(*c.tol_override) : json(nullptr);
    p["timestamp"] = utc_timestamp();
    return p;
}

void require(const std::string& path, const char* flag, Command c) {
    if (path.empty()) throw ArgumentError(std::string(flag) + " is required for " + command_name(c));
}

json cmd_payoff(const RunConfig& c) {
    require(c.game_path, "--game", c.command);
    const json file = io::load_file(c.game_path);
    const auto g = io::game_from_json(file);
    const auto strategy = io::strategy_from_json(file);
    if (!strategy) throw ArgumentError("payoff: game file has no \"strategy\" block with p and q");
    const DensityMatrix rho = c.state_path.empty() ? trivial_shared_state() : io::state_from_json(io::load_file(c.state_path));
    const auto mu = joint_distribution(g, rho, strategy->p, strategy->q);
    return {{"payoff", expected_payoff(g, mu)}, {"mu", io::to_json(mu)}};
}

json cmd_value(const RunConfig& c) {
    require(c.game_path, "--game", c.command);
    require(c.state_path, "--state", c.command);
    const auto g = io::game_from_json(io::load_file(c.game_path));
    const auto rho = io::state_from_json(io::load_file(c.state_path));
    play_dims(g, rho);
    return io::to_json(seesaw_value(g, rho, c.opts));
}

json cmd_sep_value(const RunConfig& c) {
    require(c.game_path, "--game", c.command);
    const json file = io::load_file(c.game_path);
    const auto g = io::game_from_json(file);
    json out = io::to_json(separable_value(g, c.opts));
    if (io::is_classical_game(file)) {
        try {
            out["classical_exact"] = brute_force_classical(io::classical_game_from_json(file));
        } catch (const SizeError&) {
            out["classical_exact"] = nullptr;
        }
    }
    return out;
}

json cmd_mu_bar(const ConditionalDistribution& mu) {
    double worst = 0;
    for (std::size_t s = 0; s < mu.ns(); ++s)
        for (std::size_t t = 0; t < mu.nt(); ++t) {
            double sum = 0;
            for (std::size_t x = 0; x < mu.nx(); ++x)
                for (std::size_t y = 0; y < mu.ny(); ++y) sum += mu(x, y, s, t);
            worst = std::max(worst, std::abs(sum - 1.0));
        }
    json out = io::to_json(mu);
    out["max_normalization_error"] = worst;
    return out;
}

json cmd_witness(const RunConfig& c) {
    require(c.state_path, "--state", c.command);
    const auto rho = io::state_from_json(io::load_file(c.state_path));
    const auto wg = build_witness_game(witness_from_ppt(rho));
    return {{"witness_game", io::to_json(wg)}, {"report", io::to_json(witness_gap(rho, wg, c.opts))}};
}

json cmd_reconstruct(const RunConfig& c) {
    require(c.state_path, "--state", c.command);
    const auto rho = io::state_from_json(io::load_file(c.state_path));
    if (rho.dims() != DimVector{2, 2}) throw ArgumentError("reconstruct-demo: state must be on 2 (x) 2");
    const auto z = exact_bell_strategy(2, 2);
    const auto teleported = teleport_reconstruct(rho, z);
    const auto m = build_losr_from_strategy(z, alice_corrections(2), bob_corrections(2));
    const auto via_losr = apply_losr(m, rho);
    const CMatrix tomo = reconstruct_from_mu_bar(mu_bar(rho));
    return {{"teleport_error", (teleported.mat() - rho.mat()).norm()},
            {"losr_error", (via_losr.mat() - rho.mat()).norm()},
            {"tomography_error", (tomo - rho.mat()).norm()},
            {"reconstructed", io::to_json(teleported)},
            {"ppt", io::to_json(ppt_entangled(rho))}};
}

json cmd_monotonicity(const RunConfig& c) {
    require(c.state_path, "--state", c.command);
    require(c.losr_path, "--losr", c.command);
    const auto rho = io::state_from_json(io::load_file(c.state_path));
    const auto m = io::losr_from_json(io::load_file(c.losr_path));
    std::vector<SemiQuantumGame> games;
    if (!c.game_path.empty()) {
        games.push_back(io::game_from_json(io::load_file(c.game_path)));
    } else {
        // five random games with qubit questions on both sides
        for (std::uint64_t k = 0; k < 5; ++k) games.push_back(random_game(2, 2, 2, 2, 2, 2, c.opts.seed + 1000 * (k + 1)));
    }
    return io::to_json(check_monotonicity(rho, m, games, c.opts));
}

json cmd_ppt(const RunConfig& c) {
    require(c.state_path, "--state", c.command);
    return io::to_json(ppt_entangled(io::state_from_json(io::load_file(c.state_path))));
}

}  // namespace

std::variant<RunConfig, int> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Semi-quantum game toolkit"};
    app.set_version_flag("--version", std::string(SQG_VERSION));
    std::string command, format = "json";
    std::optional<std::uint64_t> seed;
    int restarts = SeesawOptions{}.restarts;
    RunConfig cfg;
    std::vector<std::string> names;
    for (const auto& [name, cmd] : command_names()) names.push_back(name);
    app.add_option("command", command, "payoff | value | sep-value | mu-bar | witness | reconstruct-demo | monotonicity | ppt")
        ->required()
        ->check(CLI::IsMember(names));
    app.add_option("--game", cfg.game_path, "game JSON file")->check(CLI::ExistingFile);
    app.add_option("--state", cfg.state_path, "state JSON file")->check(CLI::ExistingFile);
    app.add_option("--losr", cfg.losr_path, "LOSR map JSON file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "64-bit seed (required for stochastic commands)");
    app.add_option("--restarts", restarts, "see-saw restarts")->check(CLI::PositiveNumber);
    app.add_option("--out", cfg.out_path, "report path (default stdout)");
    app.add_option("--format", format, "json | csv (csv only for mu-bar)")->check(CLI::IsMember({"json", "csv"}));
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }
    cfg.command = command_names().at(command);
    cfg.format = format == "csv" ? Format::csv : Format::json;
    cfg.seed = seed;
    cfg.opts.restarts = restarts;
    if (seed) cfg.opts.seed = *seed;
    if (const char* env = std::getenv("SQG_TOL_OVERRIDE")) cfg.tol_override = std::string(env);
    return cfg;
}

std::string render_report(const RunConfig& c) {
    if (is_stochastic(c.command) && !c.seed) throw ArgumentError("--seed is required for " + command_name(c.command));
    if (c.format == Format::csv && c.command != Command::mu_bar) throw ArgumentError("--format csv is only available for mu-bar");
    RunConfig cfg = c;
    if (cfg.tol_override) {
        // the override replaces the per-subproblem dual gap tolerance
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(*cfg.tol_override, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != cfg.tol_override->size() || !(v > 0)) throw ArgumentError("SQG_TOL_OVERRIDE must be a positive number");
        cfg.opts.gap_tol = v;
    }
    cfg.opts.validate();

    if (cfg.command == Command::mu_bar) {
        require(cfg.state_path, "--state", cfg.command);
        const auto mu = mu_bar(io::state_from_json(io::load_file(cfg.state_path)));
        if (cfg.format == Format::csv) return io::to_csv(mu);
        json report = cmd_mu_bar(mu);
        report["provenance"] = provenance(cfg);
        return report.dump(2) + "\n";
    }

    json report;
    switch (cfg.command) {
        case Command::payoff: report = cmd_payoff(cfg); break;
        case Command::value: report = cmd_value(cfg); break;
        case Command::sep_value: report = cmd_sep_value(cfg); break;
        case Command::witness: report = cmd_witness(cfg); break;
        case Command::reconstruct_demo: report = cmd_reconstruct(cfg); break;
        case Command::monotonicity: report = cmd_monotonicity(cfg); break;
        case Command::ppt: report = cmd_ppt(cfg); break;
        case Command::mu_bar: break;
    }
    report["provenance"] = provenance(cfg);
    return report.dump(2) + "\n";
}

std::string strip_timestamp(const std::string& json_report) {
    json j = json::parse(json_report);
    if (j.contains("provenance")) j["provenance"].erase("timestamp");
    return j.dump(2);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::string report;
    try {
        report = render_report(config);
    } catch (const ConvergenceError& e) {
        err << json{{"error", "convergence"}, {"message", e.what()}, {"best_gap", e.best_gap()}}.dump() << "\n";
        return kExitConvergence;
    } catch (const Error& e) {
        err << json{{"error", "validation"}, {"message", e.what()}}.dump() << "\n";
        return kExitValidation;
    } catch (const json::exception& e) {
        err << json{{"error", "validation"}, {"message", std::string("malformed input: ") + e.what()}}.dump() << "\n";
        return kExitValidation;
    }
    if (config.out_path.empty()) {
        out << report;
    } else {
        std::ofstream f(config.out_path);
        if (!f) {
            err << json{{"error", "validation"}, {"message", "cannot write " + config.out_path}}.dump() << "\n";
            return kExitValidation;
        }
        f << report;
    }
    return kExitOk;
}

int main(int argc, const char* const* argv) {
    auto parsed = parse_args(argc, argv, std::cout, std::cerr);
    if (std::holds_alternative<int>(parsed)) return std::get<int>(parsed);
    return run(std::get<RunConfig>(parsed), std::cout, std::cerr);
}

}  // namespace sqg::cli
