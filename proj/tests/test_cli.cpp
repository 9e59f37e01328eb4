#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "raindrop/analysis.hpp"
#include "raindrop/cli.hpp"

namespace {

using namespace raindrop;
using nlohmann::json;
namespace fs = std::filesystem;

struct Invocation {
    int status = -1;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    Invocation inv;
    inv.status = cli::run_cli(args, out, err);
    inv.out = out.str();
    inv.err = err.str();
    return inv;
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::path(RAINDROP_TEST_TMPDIR) / "cli" / name;
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

TEST(FormatNumber, ShortestRoundTrip)
{
    EXPECT_EQ(cli::format_number(0.1), "0.1");
    EXPECT_EQ(cli::format_number(2.5), "2.5");
    EXPECT_EQ(cli::format_number(-2.0), "-2");
    EXPECT_EQ(cli::format_number(1e-3), "0.001");
    const double third = 1.0 / 3.0;
    EXPECT_EQ(std::stod(cli::format_number(third)), third);
}

TEST(ParseBounds, Valid)
{
    EXPECT_EQ(cli::parse_bounds("-5,5;-1,2"), BoxDomain({-5, -1}, {5, 2}));
    EXPECT_EQ(cli::parse_bounds("0, 1"), BoxDomain({0}, {1}));
    EXPECT_EQ(cli::parse_bounds("+0.5,1e1"), BoxDomain({0.5}, {10}));
}

TEST(ParseBounds, Malformed)
{
    for (const char* text : {"", "1", "1,2,3", "a,b", "1,0", "0,1;", "0,1;2", "0,1x"})
        EXPECT_THROW(cli::parse_bounds(text), std::invalid_argument) << text;
}

TEST(CmdRun, WritesTraceAndReport)
{
    const fs::path dir = scratch("run_basic");
    const auto inv = invoke({"run", "--objective", "sinc2d", "--n", "30", "--seed", "7", "--out", dir.string()});
    ASSERT_EQ(inv.status, 0) << inv.err;
    EXPECT_NE(inv.out.find("global_best_f"), std::string::npos);

    const json report = json::parse(slurp(dir / "report.json"));
    EXPECT_EQ(report["objective"], "sinc2d");
    EXPECT_EQ(report["n_raindrops"], 30);
    EXPECT_EQ(report["v0"], 2.5);
    EXPECT_EQ(report["seed"], 7);
    EXPECT_EQ(report["converged"], true);
    EXPECT_EQ(report["trace_path"], "trace.csv");
    const Point best = report["global_best_x"].get<Point>();
    EXPECT_LT(euclidean_distance(best, Point{0, 0}), 1e-2);
    EXPECT_FALSE(report["clusters"].empty());
    EXPECT_EQ(report["clusters"][0]["value"], report["global_best_f"]);

    const auto rows = lines(slurp(dir / "trace.csv"));
    ASSERT_GE(rows.size(), 2u);
    EXPECT_EQ(rows[0], "iteration,velocity_l2,best_f,best_x_0,best_x_1");
    EXPECT_EQ(rows.size() - 1, report["iterations_used"].get<std::size_t>());
    EXPECT_EQ(slurp(dir / "trace.csv").find('\r'), std::string::npos);

    double previous = INFINITY;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double v = std::stod(rows[i].substr(rows[i].find(',') + 1));
        EXPECT_LE(v, previous);
        previous = v;
    }
    EXPECT_LE(previous, 1e-3);
}

TEST(CmdRun, ByteIdenticalReruns)
{
    const fs::path a = scratch("rerun_a");
    const fs::path b = scratch("rerun_b");
    const std::vector<std::string> flags{"run", "--objective", "rastrigin", "--dim", "3", "--n", "12", "--seed", "42"};
    auto with_out = [&](const fs::path& dir) {
        auto args = flags;
        args.insert(args.end(), {"--out", dir.string()});
        return args;
    };
    ASSERT_EQ(invoke(with_out(a)).status, 0);
    ASSERT_EQ(invoke(with_out(b)).status, 0);
    EXPECT_EQ(slurp(a / "trace.csv"), slurp(b / "trace.csv"));
    EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
}

TEST(CmdRun, ThreadsDoNotChangeOutputs)
{
    const fs::path a = scratch("threads_1");
    const fs::path b = scratch("threads_4");
    ASSERT_EQ(invoke({"run", "--n", "40", "--seed", "3", "--out", a.string()}).status, 0);
    ASSERT_EQ(invoke({"run", "--n", "40", "--seed", "3", "--threads", "4", "--out", b.string()}).status, 0);
    EXPECT_EQ(slurp(a / "trace.csv"), slurp(b / "trace.csv"));
    EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
}

TEST(CmdRun, ReportReproducesItselfAsConfig)
{
    const fs::path a = scratch("reproduce_a");
    const fs::path b = scratch("reproduce_b");
    ASSERT_EQ(invoke({"run", "--objective", "ackley", "--bounds", "-3,3;-2,4", "--n", "9", "--v0", "0.7",
                      "--epsilon", "1e-4", "--seed", "123", "--out", a.string()})
                  .status,
              0);
    ASSERT_EQ(invoke({"run", "--config", (a / "report.json").string(), "--out", b.string()}).status, 0);
    EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
    EXPECT_EQ(slurp(a / "trace.csv"), slurp(b / "trace.csv"));
}

TEST(CmdRun, FlagsOverrideConfigFile)
{
    const fs::path dir = scratch("override");
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "config.json");
        cfg << R"({"objective": "sphere", "n_raindrops": 3, "seed": 9, "epsilon": 0.01, "bounds": "-1,1;-1,1"})";
    }
    ASSERT_EQ(invoke({"run", "--config", (dir / "config.json").string(), "--seed", "10", "--out", dir.string()})
                  .status,
              0);
    const json report = json::parse(slurp(dir / "report.json"));
    EXPECT_EQ(report["objective"], "sphere");
    EXPECT_EQ(report["n_raindrops"], 3);
    EXPECT_EQ(report["seed"], 10);
    EXPECT_EQ(report["epsilon"], 0.01);
    EXPECT_EQ(report["v0"], 0.5);
    EXPECT_EQ(report["upper"], json({1.0, 1.0}));
}

TEST(CmdRun, ConstantObjectiveTraceLength)
{
    const fs::path dir = scratch("constant");
    ASSERT_EQ(invoke({"run", "--objective", "constant", "--n", "4", "--v0", "1", "--epsilon", "1e-3", "--out",
                      dir.string()})
                  .status,
              0);
    EXPECT_EQ(lines(slurp(dir / "trace.csv")).size(), 1 + expected_halvings(1.0, 1e-3, 4));
}

TEST(CmdRun, Snapshots)
{
    const fs::path dir = scratch("snapshots");
    ASSERT_EQ(invoke({"run", "--n", "5", "--snapshot-every", "10", "--out", dir.string()}).status, 0);
    const auto rows = lines(slurp(dir / "positions_0.csv"));
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0], "raindrop,x_0,x_1,speed");
    EXPECT_EQ(rows[1].substr(0, 2), "0,");
    EXPECT_EQ(rows[1].substr(rows[1].rfind(',') + 1), "2.5");
    EXPECT_TRUE(fs::exists(dir / "positions_10.csv"));
    EXPECT_FALSE(fs::exists(dir / "positions_5.csv"));
}

TEST(CmdRun, ExitCodes)
{
    const fs::path dir = scratch("exit_codes");
    const auto capped = invoke({"run", "--max-iters", "1", "--out", dir.string()});
    EXPECT_EQ(capped.status, 2);
    EXPECT_EQ(json::parse(slurp(dir / "report.json"))["converged"], false);

    const auto unknown = invoke({"run", "--objective", "nosuchfn", "--out", dir.string()});
    EXPECT_EQ(unknown.status, 1);
    EXPECT_NE(unknown.err.find("sinc2d"), std::string::npos);
    EXPECT_EQ(lines(unknown.err).size(), 1u);

    EXPECT_EQ(invoke({"run", "--bounds", "1,0", "--out", dir.string()}).status, 1);
    EXPECT_EQ(invoke({"run", "--bounds", "-1,1", "--objective", "sinc2d", "--out", dir.string()}).status, 1);
    EXPECT_EQ(invoke({"run", "--n", "abc"}).status, 1);
    EXPECT_EQ(invoke({"run", "--epsilon", "100", "--out", dir.string()}).status, 1);
    EXPECT_EQ(invoke({"nosuchcommand"}).status, 1);
    EXPECT_EQ(invoke({}).status, 1);
    EXPECT_EQ(invoke({"run", "--config", "/nonexistent/config.json"}).status, 1);
}

TEST(CmdSuccessProb, UnimodalRateIsOne)
{
    const fs::path dir = scratch("success_sphere");
    const auto inv = invoke({"success-prob", "--objective", "sphere", "--n", "1", "--trials", "50", "--resolution",
                             "21", "--out", dir.string()});
    ASSERT_EQ(inv.status, 0) << inv.err;
    const json report = json::parse(slurp(dir / "success.json"));
    EXPECT_EQ(report["rate"], 1.0);
    EXPECT_EQ(report["successes"], 50);
    EXPECT_EQ(report["ratio"], 1.0);
    EXPECT_EQ(report["ratio_source"], "oracle");
    EXPECT_EQ(report["absolute_gap"], 0.0);
}

TEST(CmdSuccessProb, SuppliedRatioPrintsPrediction)
{
    const fs::path dir = scratch("success_supplied");
    const auto inv = invoke({"success-prob", "--theoretical-ratio", "0.1", "--n", "10", "--trials", "20", "--out",
                             dir.string()});
    ASSERT_EQ(inv.status, 0) << inv.err;
    EXPECT_NE(inv.out.find("theoretical_success_probability 0.65132"), std::string::npos) << inv.out;
    const json report = json::parse(slurp(dir / "success.json"));
    EXPECT_EQ(report["ratio_source"], "supplied");
    EXPECT_EQ(report["theoretical_curve"].size(), 10u);
    EXPECT_NEAR(report["theoretical_curve"][9].get<double>(), 0.6513215599, 1e-10);
}

TEST(CmdSuccessProb, NeedsKnownOptimum)
{
    const auto inv = invoke({"success-prob", "--objective", "constant", "--trials", "5", "--out",
                             scratch("success_constant").string()});
    EXPECT_EQ(inv.status, 1);
}

TEST(CmdOracle, GridMode)
{
    const fs::path dir = scratch("oracle_grid");
    const auto inv = invoke({"oracle", "--objective", "sinc2d", "--mode", "grid", "--resolution", "201", "--out",
                             dir.string()});
    ASSERT_EQ(inv.status, 0) << inv.err;
    EXPECT_NE(inv.out.find("argmin (0, 0)"), std::string::npos) << inv.out;
    EXPECT_NE(inv.out.find("value -2"), std::string::npos) << inv.out;
    const json report = json::parse(slurp(dir / "oracle.json"));
    EXPECT_EQ(report["point"], json({0.0, 0.0}));
    EXPECT_EQ(report["value"], -2.0);
}

TEST(CmdOracle, BasinMode)
{
    const fs::path dir = scratch("oracle_basin");
    const auto sphere = invoke({"oracle", "--objective", "sphere", "--mode", "basin", "--resolution", "31", "--out",
                                dir.string()});
    ASSERT_EQ(sphere.status, 0) << sphere.err;
    EXPECT_EQ(sphere.out, "ratio 1.0000\n");

    const auto a = invoke({"oracle", "--objective", "sinc2d", "--mode", "basin", "--resolution", "101", "--out",
                           dir.string()});
    const auto b = invoke({"oracle", "--objective", "sinc2d", "--mode", "basin", "--resolution", "101", "--threads",
                           "3", "--out", dir.string()});
    ASSERT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.size(), std::string("ratio 0.xxxx\n").size());
}

TEST(CmdOracle, BudgetExceeded)
{
    const auto inv = invoke({"oracle", "--objective", "sphere", "--dim", "4", "--resolution", "201", "--out",
                             scratch("oracle_budget").string()});
    EXPECT_EQ(inv.status, 1);
    EXPECT_NE(inv.err.find("1632240801"), std::string::npos) << inv.err;
    EXPECT_NE(inv.err.find("10000000"), std::string::npos) << inv.err;
}

} // namespace
