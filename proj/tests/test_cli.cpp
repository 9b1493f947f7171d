#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qdf/cli.hpp"
#include "qdf/synth.hpp"
#include "qmdf_oracle.hpp"

using namespace qdf;
namespace fs = std::filesystem;

namespace
{

fs::path scratch()
{
    const auto dir = fs::temp_directory_path() / "qdf_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string write(const std::string& name, const std::string& text)
{
    const auto path = scratch() / name;
    std::ofstream(path) << text;
    return path.string();
}

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result invoke(cli::RunConfig cfg)
{
    std::ostringstream out, err;
    const int code = cli::run(cfg, out, err);
    return {code, out.str(), err.str()};
}

cli::RunConfig config(const std::string& command, const std::string& input)
{
    cli::RunConfig c;
    c.command = command;
    c.inputs = {input};
    c.grid_deg = 1.0;
    return c;
}

std::vector<std::vector<std::string>> rows(const std::string& csv)
{
    std::vector<std::vector<std::string>> out;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);)
    {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');)
            cells.push_back(c);
        out.push_back(cells);
    }
    return out;
}

std::string block_file()
{
    std::mt19937_64 rng(31);
    return write("block.txt", save_smatrix_string(oracle::random_block(rng, 12, 1, 1, 1.4)));
}

} // namespace

TEST(Cli, DcsColumnsAndProvenance)
{
    const auto r = invoke(config("dcs", block_file()));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("# qdf ", 0), 0u);
    EXPECT_NE(r.out.find("fnv1a64="), std::string::npos);
    const auto t = rows(r.out);
    ASSERT_EQ(t.size(), 182u);
    EXPECT_EQ(t[0], (std::vector<std::string>{"theta_deg", "dcs", "dcs_sin_theta"}));
    EXPECT_EQ(t[1][0], "0.000000");
    EXPECT_EQ(t.back()[0], "180.000000");
    EXPECT_EQ(t.back()[2], "0.00000000e+00");
}

TEST(Cli, SumJMatchesDcsTimesSin)
{
    const auto file = block_file();
    const auto a = rows(invoke(config("sum-j", file)).out);
    const auto b = rows(invoke(config("dcs", file)).out);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 1; i < a.size(); ++i)
    {
        EXPECT_EQ(a[i][0], b[i][0]);
        EXPECT_NEAR(std::stod(a[i][1]), std::stod(b[i][2]), 1e-12 * std::abs(std::stod(b[i][2])) + 1e-300);
    }
}

TEST(Cli, GridPoints)
{
    auto c = config("dcs", block_file());
    c.grid_points = 5;
    const auto t = rows(invoke(c).out);
    ASSERT_EQ(t.size(), 6u);
    EXPECT_EQ(t[2][0], "45.000000");
    c.grid_points = 1;
    EXPECT_EQ(invoke(c).code, 1);
}

TEST(Cli, RepeatedRunsAreIdentical)
{
    const auto file = block_file();
    for (const char* cmd : {"qmdf", "random-phase", "cqdf", "sigma-j"})
    {
        auto c = config(cmd, file);
        EXPECT_EQ(invoke(c).out, invoke(c).out) << cmd;
    }
}

TEST(Cli, MapDividedBySinFlagsEndpoints)
{
    auto c = config("qmdf", block_file());
    c.no_sin_theta = true;
    c.jmin = 2;
    c.jmax = 3;
    const auto t = rows(invoke(c).out);
    EXPECT_EQ(t[0], (std::vector<std::string>{"theta_deg", "J", "value", "endpoint"}));
    ASSERT_EQ(t.size(), 1u + 181u * 2u);
    EXPECT_EQ(t[1][3], "1");
    EXPECT_EQ(t[3][3], "0");
    EXPECT_EQ(t[1][1], "2");
}

TEST(Cli, SmoothingChangesMap)
{
    const auto file = block_file();
    auto c = config("qmdf", file);
    const auto plain = invoke(c).out;
    c.smooth = true;
    const auto smooth = invoke(c);
    ASSERT_EQ(smooth.code, 0) << smooth.err;
    EXPECT_NE(plain, smooth.out);
    EXPECT_NE(smooth.out.find("smoothing=on"), std::string::npos);
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(invoke(config("dcs", (scratch() / "missing.txt").string())).code, 1);
    EXPECT_EQ(invoke(config("dcs", write("bad.txt", "k 1 u\nchannel j=0\n"))).code, 1);
    EXPECT_EQ(invoke(config("frobnicate", block_file())).code, 1);
    auto c = config("qmdf-helicity", block_file());
    EXPECT_EQ(invoke(c).code, 1);
    c.omega_prime = 1;
    EXPECT_EQ(invoke(c).code, 0);
    // alternating signs make every unwrap step an exact half turn after the e^{i pi J} factor
    const auto tie = write("tie.txt", save_smatrix_string(oracle::scalar_block({1.0, 1.0, 1.0, 1.0})));
    const auto r = invoke(config("cqdf", tie));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("tie"), std::string::npos);
    auto one = config("cqdf", tie);
    one.unwrap = UnwrapMode::one_sided;
    EXPECT_EQ(invoke(one).code, 0);
}

TEST(Cli, SynthThenAnalyse)
{
    const auto model = write("model.txt", "kind = quadratic\nk = 2\nJmax = 40\nalpha = 0.02\n");
    auto s = config("synth", model);
    const auto r = invoke(s);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto block = write("synth_block.txt", r.out);
    const auto t = rows(invoke(config("cqdf", block)).out);
    ASSERT_EQ(t.size(), 42u);
    EXPECT_NEAR(std::stod(t[11][1]), pi - 0.02 * 21.0, 1e-7);
}

TEST(Cli, ClassicalCommands)
{
    const auto model = write("classical.txt", "kind = classical\nJmax = 20\nbranches = 0:150, 20:90\n"
                                              "noise_deg = 2\ncount = 2000\nseed = 3\n");
    auto s = config("synth", model);
    const auto traj = write("traj.txt", invoke(s).out);
    for (const char* cmd : {"qct-df", "qct-dcs", "qct-sigma-j"})
    {
        auto c = config(cmd, traj);
        c.order_m = 6;
        c.order_n = 6;
        const auto r = invoke(c);
        EXPECT_EQ(r.code, 0) << cmd << ": " << r.err;
        c.method = "gaussian";
        const auto g = invoke(c);
        EXPECT_EQ(g.code, 0) << cmd << ": " << g.err;
    }
    auto c = config("qct-sigma-j", traj);
    c.method = "gaussian";
    EXPECT_EQ(rows(invoke(c).out).size(), 22u);
    c.method = "spline";
    EXPECT_EQ(invoke(c).code, 1);
}

TEST(Cli, BinaryRunsAndWritesFile)
{
    const auto out = scratch() / "dcs.csv";
    const std::string cmd = std::string(QDF_CLI_PATH) + " dcs " + block_file() + " --grid-deg 2 -o " + out.string();
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(rows(ss.str()).size(), 92u);
    EXPECT_NE(std::system((std::string(QDF_CLI_PATH) + " dcs /nonexistent 2>/dev/null").c_str()), 0);
}
