#include <aqrm_cli/cli.hpp>
#include <aqrm_cli/verify.hpp>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using aqrm::cli::run;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result cli(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path golden(const std::string& name)
{
    return fs::path(AQRM_GOLDEN_DIR) / name;
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "aqrm_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::vector<std::vector<std::string>> cells(const std::string& csv)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> row;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');)
            row.push_back(c);
        rows.push_back(row);
    }
    return rows;
}

bool close(double a, double b)
{
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b));
}

// Numbers compare to 1e-9; residual-like columns below 1e-12 only need to stay tiny.
void expect_csv_matches(const std::string& actual, const std::string& expected)
{
    const auto a = cells(actual), e = cells(expected);
    ASSERT_EQ(a.size(), e.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_EQ(a[i].size(), e[i].size()) << "row " << i;
        for (std::size_t j = 0; j < a[i].size(); ++j) {
            char* end = nullptr;
            const double ev = std::strtod(e[i][j].c_str(), &end);
            if (i == 0 || *end != '\0') {
                EXPECT_EQ(a[i][j], e[i][j]);
                continue;
            }
            const double av = std::stod(a[i][j]);
            if (std::abs(ev) < 1e-12)
                EXPECT_LT(std::abs(av), 1e-12) << "row " << i << " col " << j;
            else
                EXPECT_TRUE(close(av, ev)) << "row " << i << " col " << j << ": " << av << " vs " << ev;
        }
    }
}

void expect_json_matches(const nlohmann::json& a, const nlohmann::json& e, const std::string& where = "")
{
    if (e.is_number() && !e.is_number_integer()) {
        ASSERT_TRUE(a.is_number()) << where;
        if (std::abs(e.get<double>()) < 1e-12)
            EXPECT_LT(std::abs(a.get<double>()), 1e-12) << where;
        else
            EXPECT_TRUE(close(a.get<double>(), e.get<double>())) << where;
    } else if (e.is_object()) {
        ASSERT_TRUE(a.is_object()) << where;
        ASSERT_EQ(a.size(), e.size()) << where;
        for (auto it = e.begin(); it != e.end(); ++it) {
            ASSERT_TRUE(a.contains(it.key())) << where << "/" << it.key();
            expect_json_matches(a[it.key()], it.value(), where + "/" + it.key());
        }
    } else if (e.is_array()) {
        ASSERT_EQ(a.size(), e.size()) << where;
        for (std::size_t i = 0; i < e.size(); ++i)
            expect_json_matches(a[i], e[i], where + "/" + std::to_string(i));
    } else {
        EXPECT_EQ(a, e) << where;
    }
}

} // namespace

TEST(Golden, QesPoints)
{
    const auto r = cli({"qes-points", "--n-max", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    expect_csv_matches(r.out, slurp(golden("qes_points.csv")));
}

TEST(Golden, BetheFirstLevel)
{
    const auto r = cli({"bethe", "--n", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    expect_json_matches(nlohmann::json::parse(r.out), nlohmann::json::parse(slurp(golden("bethe_n1.json"))));
}

TEST(Golden, Potential)
{
    const auto r = cli({"potential", "--kind", "qes", "--n", "1", "--samples", "6", "--psi"});
    ASSERT_EQ(r.code, 0) << r.err;
    expect_csv_matches(r.out, slurp(golden("potential_n1.csv")));
}

TEST(Golden, SmallSpectrum)
{
    const auto r = cli({"spectrum", "--g-max", "0.5", "--steps", "6", "--levels", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    expect_csv_matches(r.out, slurp(golden("spectrum_small.csv")));
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(cli({"--help"}).code, 0);
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"no-such-command"}).code, 2);
    EXPECT_EQ(cli({"qes-points", "--n-max", "abc"}).code, 2);
    EXPECT_EQ(cli({"qes-points", "--omega", "-1"}).code, 2);
    const auto missing = cli({"bethe", "--n", "1", "--branch", "minus"});
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.err.find("no QES point"), std::string::npos);
    const auto range = cli({"bethe", "--n", "3", "--index", "5"});
    EXPECT_EQ(range.code, 2);
    EXPECT_NE(range.err.find("out of range"), std::string::npos);
    EXPECT_EQ(cli({"spectrum", "--crossings", scratch("x.csv").string()}).code, 2);  // needs epsilon = 0
}

TEST(Cli, FullAndQesPotentialAgreeAtJuddianEnergy)
{
    const auto qes = cli({"potential", "--kind", "qes", "--n", "2", "--samples", "8"});
    const auto full = cli({"potential", "--kind", "full", "--n", "2", "--samples", "8"});
    ASSERT_EQ(qes.code, 0) << qes.err;
    ASSERT_EQ(full.code, 0) << full.err;
    EXPECT_EQ(qes.out, full.out);
}

TEST(Cli, CrossingsSitOnIntegerLines)
{
    const auto path = scratch("crossings.csv");
    const auto r = cli({"spectrum", "--epsilon", "0", "--g-max", "1", "--steps", "41", "--levels", "8", "--crossings",
                        path.string(), "-o", scratch("levels.csv").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = cells(slurp(path));
    ASSERT_GT(rows.size(), 1u);
    EXPECT_EQ(rows[0][0], "g");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double line = std::stod(rows[i][2]);
        EXPECT_NEAR(line, std::round(line), 1e-6);
        EXPECT_EQ(std::stoi(rows[i][3]), static_cast<int>(std::round(line)));
    }
}

TEST(Cli, AtomicWrite)
{
    const auto path = scratch("points.csv");
    fs::remove(path);
    ASSERT_EQ(cli({"qes-points", "--n-max", "2", "-o", path.string()}).code, 0);
    EXPECT_EQ(slurp(path), cli({"qes-points", "--n-max", "2"}).out);
    for (const auto& e : fs::directory_iterator(path.parent_path()))
        EXPECT_EQ(e.path().string().find(".tmp"), std::string::npos) << e.path();
    EXPECT_EQ(cli({"qes-points", "-o", "/nonexistent-dir/x.csv"}).code, 1);
}

TEST(Cli, ConfigFileAndPrecedence)
{
    const auto cfg = scratch("run.cfg");
    std::ofstream(cfg) << "# reference run\nn_max = 2\nformat=json\n";
    const auto from_file = cli({"qes-points", "--config", cfg.string()});
    ASSERT_EQ(from_file.code, 0) << from_file.err;
    EXPECT_EQ(nlohmann::json::parse(from_file.out).at("points").size(), 4u);
    EXPECT_EQ(from_file.out, cli({"qes-points", "--n-max", "2", "--format", "json"}).out);
    const auto flag_wins = cli({"qes-points", "--config=" + cfg.string(), "--n-max", "1"});
    ASSERT_EQ(flag_wins.code, 0) << flag_wins.err;
    EXPECT_EQ(flag_wins.out, cli({"qes-points", "--n-max", "1", "--format", "json"}).out);
    std::ofstream(cfg) << "bogus-key = 1\n";
    EXPECT_EQ(cli({"qes-points", "--config", cfg.string()}).code, 2);
    EXPECT_EQ(cli({"qes-points", "--config", scratch("missing.cfg").string()}).code, 2);
}

TEST(Verify, PassesAndIsDeterministic)
{
    aqrm::cli::VerifyOptions opts;
    opts.timings = false;
    const auto a = aqrm::cli::run_verify(opts);
    EXPECT_TRUE(a.at("passed").get<bool>()) << a.dump(2);
    EXPECT_EQ(a.dump(), aqrm::cli::run_verify(opts).dump());
    for (const auto& c : a.at("checks"))
        EXPECT_FALSE(c.contains("seconds"));
}

TEST(Verify, ZeroToleranceFails)
{
    const auto r = cli({"verify", "--tol-scale", "0", "--no-timings", "--report", scratch("report.json").string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("FAILED"), std::string::npos);
    const auto j = nlohmann::json::parse(slurp(scratch("report.json")));
    EXPECT_FALSE(j.at("passed").get<bool>());
}
