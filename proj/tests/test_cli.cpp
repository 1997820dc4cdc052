#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sqg/cli.hpp"
#include "sqg/io.hpp"
#include "test_util.hpp"

using namespace sqg;
using namespace sqg::testing;
using sqg::io::json;

namespace {

const std::string kData = SQG_DATA_DIR;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "sqg");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    auto parsed = cli::parse_args(static_cast<int>(argv.size()), argv.data(), out, err);
    if (std::holds_alternative<int>(parsed)) return {std::get<int>(parsed), out.str(), err.str()};
    const int code = cli::run(std::get<cli::RunConfig>(parsed), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / ("sqg_test_" + name);
    std::ofstream(path) << content;
    return path.string();
}

}  // namespace

TEST(Io, MatrixRoundTrip) {
    std::mt19937_64 rng(1);
    const CMatrix m = random_matrix(3, 2, rng);
    const CMatrix back = io::matrix_from_json(json::parse(io::to_json(m).dump()));
    EXPECT_EQ(back, m);  // full precision
}

TEST(Io, RealEntriesAccepted) {
    const auto m = io::matrix_from_json(json{{"rows", 1}, {"cols", 2}, {"data", {0.5, {0.0, 1.0}}}});
    EXPECT_EQ(m(0, 0), Complex(0.5, 0));
    EXPECT_EQ(m(0, 1), Complex(0, 1));
    EXPECT_THROW(io::matrix_from_json(json{{"rows", 2}, {"cols", 2}, {"data", {1.0}}}), ContractError);
}

TEST(Io, ObjectRoundTrips) {
    const auto rho = random_state({2, 2}, 2, std::uint64_t{3});
    EXPECT_EQ(io::state_from_json(io::to_json(rho)).mat(), rho.mat());
    const auto p = random_povm({2, 3}, 3, std::uint64_t{4});
    const auto pb = io::povm_from_json(io::to_json(p));
    EXPECT_EQ(pb.labels(), p.labels());
    EXPECT_EQ(pb[2], p[2]);
    const auto g = random_game(2, 3, 2, 2, 2, 2, 5);
    const auto gb = io::game_from_json(io::to_json(g));
    EXPECT_EQ(gb.payoff().values(), g.payoff().values());
    EXPECT_EQ(gb.omega().states()[2].mat(), g.omega().states()[2].mat());
    const auto m = random_losr({2, 2}, {2, 2}, 2, std::uint64_t{6});
    const auto mb = io::losr_from_json(io::to_json(m));
    EXPECT_EQ(mb.weights(), m.weights());
    EXPECT_EQ(mb.pairs()[1].second.kraus_ops()[0], m.pairs()[1].second.kraus_ops()[0]);
}

TEST(Io, ClassicalGameEmbeds) {
    const json j = io::to_json(chsh_game());
    EXPECT_TRUE(io::is_classical_game(j));
    EXPECT_EQ(io::game_from_json(j).payoff().values(), chsh_game().payoff().values());
}

TEST(Io, InvalidStateRejected) {
    json j = io::to_json(werner_state(0.5));
    j["mat"]["data"][0] = {5.0, 0.0};
    EXPECT_THROW(io::state_from_json(j), ContractError);
}

TEST(Io, CsvShape) {
    const auto csv = io::to_csv(mu_bar(werner_state(0.5)));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 17);
    EXPECT_EQ(csv.substr(0, 9), "s,t,x0y0,");
}

TEST(Cli, ValueChshSinglet) {
    const auto r = run_cli({"value", "--game", kData + "/chsh.json", "--state", kData + "/werner1.json", "--seed", "7"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_GE(j.at("value").get<double>(), 0.85335);
    EXPECT_EQ(j.at("provenance").at("seed").get<std::uint64_t>(), 7u);
    EXPECT_EQ(j.at("provenance").at("version").get<std::string>(), SQG_VERSION);
}

TEST(Cli, PptWerner034) {
    const auto r = run_cli({"ppt", "--state", kData + "/werner034.json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j.at("flag").get<bool>());
    EXPECT_NEAR(j.at("min_pt_eig").get<double>(), (1 - 3 * 0.34) / 4, 1e-12);
}

TEST(Cli, MuBarProductFactorizes) {
    const auto r = run_cli({"mu-bar", "--state", kData + "/product00.json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto table = json::parse(r.out).at("table");
    for (const auto& row : table) {
        // row is indexed x*4+y: check p(x,y) = p(x) p(y)
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y) {
                double px = 0, py = 0;
                for (int k = 0; k < 4; ++k) {
                    px += row[x * 4 + k].get<double>();
                    py += row[k * 4 + y].get<double>();
                }
                EXPECT_NEAR(row[x * 4 + y].get<double>(), px * py, 1e-12);
            }
    }
}

TEST(Cli, MuBarCsv) {
    const auto r = run_cli({"mu-bar", "--state", kData + "/product00.json", "--format", "csv"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, 4), "s,t,");
}

TEST(Cli, PayoffUsesStrategyBlock) {
    const auto r = run_cli({"payoff", "--game", kData + "/chsh_strategy.json"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(json::parse(r.out).at("payoff").get<double>(), 0.75, 1e-15);
    EXPECT_EQ(run_cli({"payoff", "--game", kData + "/chsh.json"}).code, cli::kExitValidation);
}

TEST(Cli, SepValueReportsExactClassicalValue) {
    const auto r = run_cli({"sep-value", "--game", kData + "/chsh.json", "--seed", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j.at("value").get<double>(), 0.75, 1e-6);
    EXPECT_DOUBLE_EQ(j.at("classical_exact").get<double>(), 0.75);
}

TEST(Cli, WitnessAndReconstruct) {
    auto r = run_cli({"witness", "--state", kData + "/werner08.json", "--seed", "2", "--restarts", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rep = json::parse(r.out).at("report");
    EXPECT_GT(rep.at("gap").get<double>(), 0.01 * rep.at("scale_c").get<double>());
    r = run_cli({"reconstruct-demo", "--state", kData + "/werner08.json"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_LE(json::parse(r.out).at("teleport_error").get<double>(), 1e-10);
}

TEST(Cli, Monotonicity) {
    const auto r = run_cli({"monotonicity", "--state", kData + "/werner1.json", "--losr", kData + "/dephase_losr.json",
                            "--seed", "42", "--restarts", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out).at("violations").get<int>(), 0);
}

TEST(Cli, ValidationFailures) {
    EXPECT_EQ(run_cli({"value", "--game", kData + "/chsh.json", "--state", kData + "/werner1.json"}).code,
              cli::kExitValidation);  // missing seed
    EXPECT_EQ(run_cli({"ppt", "--state", kData + "/does_not_exist.json"}).code, cli::kExitValidation);
    EXPECT_EQ(run_cli({"bogus"}).code, cli::kExitValidation);
    EXPECT_EQ(run_cli({"ppt", "--state", kData + "/werner1.json", "--format", "csv"}).code, cli::kExitValidation);
    EXPECT_EQ(run_cli({"witness", "--state", kData + "/product00.json", "--seed", "1"}).code, cli::kExitValidation);
    const auto bad = temp_file("bad_state.json", R"({"dims":[2],"mat":{"rows":2,"cols":2,"data":[1,0,0,1]}})");
    const auto r = run_cli({"ppt", "--state", bad});
    EXPECT_EQ(r.code, cli::kExitValidation);
    EXPECT_TRUE(r.out.empty());  // no partial report
    EXPECT_NE(r.err.find("trace"), std::string::npos) << r.err;
}

TEST(Cli, ConvergenceFailureExitCode) {
    setenv("SQG_TOL_OVERRIDE", "1e-300", 1);
    const auto r = run_cli({"value", "--game", kData + "/chsh.json", "--state", kData + "/werner1.json", "--seed", "7",
                            "--restarts", "3"});
    unsetenv("SQG_TOL_OVERRIDE");
    EXPECT_EQ(r.code, cli::kExitConvergence);
    EXPECT_NE(r.err.find("best_gap"), std::string::npos);
}

TEST(Cli, OverrideEchoedInProvenance) {
    setenv("SQG_TOL_OVERRIDE", "1e-6", 1);
    const auto r = run_cli({"ppt", "--state", kData + "/werner1.json"});
    unsetenv("SQG_TOL_OVERRIDE");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out).at("provenance").at("tol_override").get<std::string>(), "1e-6");
}

TEST(Cli, DeterministicModuloTimestamp) {
    const std::vector<std::string> args{"value", "--game", kData + "/chsh.json", "--state", kData + "/werner034.json",
                                        "--seed", "11", "--restarts", "4"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(cli::strip_timestamp(a.out), cli::strip_timestamp(b.out));
}

TEST(Cli, WritesOutFile) {
    const auto path = (std::filesystem::temp_directory_path() / "sqg_test_out.json").string();
    std::filesystem::remove(path);
    const auto r = run_cli({"ppt", "--state", kData + "/werner1.json", "--out", path});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_TRUE(json::parse(std::ifstream(path)).at("flag").get<bool>());
}
