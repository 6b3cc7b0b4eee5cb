#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "curvex/cli.hpp"

using namespace curvex;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(CURVEX_DATA_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("curvex_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path path(const std::string& name) const { return dir_ / name; }

    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name), std::ios::binary) << text;
        return path(name);
    }

    int run_quiet(const RunConfig& cfg) {
        std::ostringstream out, err;
        int code = run(cfg, out, err);
        stdout_ = out.str();
        stderr_ = err.str();
        return code;
    }

    RunConfig config(const std::string& input, Mode mode) const {
        RunConfig c;
        c.input = input;
        c.mode = mode;
        c.out_report = path("report.json").string();
        return c;
    }

    fs::path dir_;
    std::string stdout_, stderr_;
};

}  // namespace

TEST_F(Cli, WidthCensusPasses) {
    auto cfg = config(data("width_sin3.json"), Mode::WidthCensus);
    ASSERT_EQ(run_quiet(cfg), 0) << stderr_;
    auto j = json::parse(slurp(cfg.out_report));
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(j["census"]["i"].get<int>(), 3);
    EXPECT_EQ(j["census"]["delta"].get<int>(), 0);
    EXPECT_EQ(j["config"]["mode"].get<std::string>(), "width-census");
    EXPECT_EQ(j["input"]["kind"].get<std::string>(), "support");
}

TEST_F(Cli, ReportIsByteStableAndSidecarIsWritten) {
    auto cfg = config(data("sphere_i5.json"), Mode::SphereCensus);
    ASSERT_EQ(run_quiet(cfg), 0) << stderr_;
    std::string first = slurp(cfg.out_report);
    ASSERT_EQ(run_quiet(cfg), 0);
    EXPECT_EQ(first, slurp(cfg.out_report));
    fs::path meta = cfg.out_report + ".meta.json";
    ASSERT_TRUE(fs::exists(meta));
    auto m = json::parse(slurp(meta));
    for (const char* k : {"tool", "version", "input", "mode", "threads", "started_utc", "elapsed_seconds", "exit_code"})
        EXPECT_TRUE(m.contains(k)) << k;
    EXPECT_EQ(m["exit_code"].get<int>(), 0);
    EXPECT_EQ(first.find("started_utc"), std::string::npos);
}

TEST_F(Cli, ReportGoesToStdoutWithoutPath) {
    auto cfg = config(data("width_sin3.json"), Mode::Flexes);
    cfg.out_report.clear();
    ASSERT_EQ(run_quiet(cfg), 0) << stderr_;
    auto j = json::parse(stdout_);
    EXPECT_TRUE(j.contains("flexes"));
}

TEST_F(Cli, MalformedJsonIsExitTwo) {
    auto cfg = config(write("bad.json", "{\"x\": [1, 2").string(), Mode::SphereCensus);
    EXPECT_EQ(run_quiet(cfg), 2);
    EXPECT_NE(stderr_.find("ParseError"), std::string::npos);
    EXPECT_FALSE(fs::exists(cfg.out_report));
}

TEST_F(Cli, MissingInputIsExitTwo) {
    EXPECT_EQ(run_quiet(config(path("nope.json").string(), Mode::SphereCensus)), 2);
}

TEST_F(Cli, BadGridIsExitTwo) {
    for (int g : {100, 128, 1000, 131072}) {
        auto cfg = config(data("width_sin3.json"), Mode::WidthCensus);
        cfg.grid = g;
        EXPECT_EQ(run_quiet(cfg), 2) << g;
    }
    EXPECT_TRUE(is_valid_grid(256));
    EXPECT_TRUE(is_valid_grid(65536));
}

TEST_F(Cli, ModeMismatchIsExitTwo) {
    EXPECT_EQ(run_quiet(config(data("sphere_i3.json"), Mode::WidthCensus)), 2);
    EXPECT_EQ(run_quiet(config(data("width_sin3.json"), Mode::SphereCensus)), 2);
    EXPECT_EQ(run_quiet(config(data("sphere_i3.json"), Mode::TheoremC)), 2);
}

TEST_F(Cli, WrongParityIsExitTwo) {
    auto in = write("even.json", R"({"d": 20, "f": {"parity": "periodic", "constant": 0, "harmonics": [[2, 0, 1]]}})");
    EXPECT_EQ(run_quiet(config(in.string(), Mode::WidthCensus)), 2);
}

TEST_F(Cli, NonConvexIsExitTwo) {
    auto in = write("thin.json",
                    R"({"d": 2, "f": {"parity": "antiperiodic", "constant": 0, "harmonics": [[3, 0, 1]]}})");
    EXPECT_EQ(run_quiet(config(in.string(), Mode::WidthCensus)), 2);
}

TEST_F(Cli, ComputationFailureIsExitOneWithReport) {
    // A folded curve that is not anti-convex: the census refuses it.
    auto in = write("folded.json", R"({
      "x": {"parity": "antiperiodic", "constant": 0, "harmonics": [[1, 1, 0], [3, 0.9, 0]]},
      "y": {"parity": "antiperiodic", "constant": 0, "harmonics": [[1, 0, 1]]},
      "z": {"parity": "antiperiodic", "constant": 0, "harmonics": [[3, 0, 0.3]]}})");
    auto cfg = config(in.string(), Mode::SphereCensus);
    EXPECT_EQ(run_quiet(cfg), 1);
    ASSERT_TRUE(fs::exists(cfg.out_report));
    auto j = json::parse(slurp(cfg.out_report));
    EXPECT_FALSE(j["pass"].get<bool>());
    EXPECT_EQ(j["error"]["kind"].get<std::string>(), "NotAntiConvex");
    EXPECT_EQ(json::parse(slurp(cfg.out_report + ".meta.json"))["exit_code"].get<int>(), 1);
}

TEST_F(Cli, CsvHasOneRowPerGridPoint) {
    auto cfg = config(data("sphere_i3.json"), Mode::SphereCensus);
    cfg.out_csv = path("samples.csv").string();
    ASSERT_EQ(run_quiet(cfg), 0) << stderr_;
    std::ifstream in(cfg.out_csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,x,y,z");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, cfg.grid);
}

TEST_F(Cli, SphereSvgHasNoChordLayerWithoutDoubleTangents) {
    auto cfg = config(data("sphere_i3.json"), Mode::SphereCensus);
    cfg.out_svg = path("i3.svg").string();
    ASSERT_EQ(run_quiet(cfg), 0) << stderr_;
    std::string svg = slurp(cfg.out_svg);
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("id=\"curve\""), std::string::npos);
    EXPECT_EQ(svg.find("id=\"chords\""), std::string::npos);

    auto cfg5 = config(data("sphere_i5.json"), Mode::SphereCensus);
    cfg5.out_svg = path("i5.svg").string();
    ASSERT_EQ(run_quiet(cfg5), 0) << stderr_;
    EXPECT_NE(slurp(cfg5.out_svg).find("id=\"chords\""), std::string::npos);
}

TEST_F(Cli, WidthSvgMarksInflections) {
    auto cfg = config(data("width_sin3.json"), Mode::WidthCensus);
    cfg.out_svg = path("w.svg").string();
    ASSERT_EQ(run_quiet(cfg), 0) << stderr_;
    std::string svg = slurp(cfg.out_svg);
    EXPECT_NE(svg.find("id=\"inflections\""), std::string::npos);
    std::size_t circles = 0;
    for (std::size_t pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1)) ++circles;
    EXPECT_EQ(circles, 6u);
}

TEST_F(Cli, CertificateModeReportsThree) {
    auto cfg = config(data("width_sin3.json"), Mode::TheoremC);
    ASSERT_EQ(run_quiet(cfg), 0) << stderr_;
    auto j = json::parse(slurp(cfg.out_report));
    ASSERT_EQ(j["certificates"].size(), 3u);
    for (const auto& c : j["certificates"]) EXPECT_TRUE(c["ok"].get<bool>());
}

TEST_F(Cli, TruncationAgrees) {
    auto cfg = config(data("width_tail.json"), Mode::Truncate);
    cfg.truncate_n = 4;
    ASSERT_EQ(run_quiet(cfg), 0) << stderr_;
    auto j = json::parse(slurp(cfg.out_report));
    EXPECT_TRUE(j["comparison"]["agree"].get<bool>());
    EXPECT_LE(j["comparison"]["max_flex_shift"].get<double>(), 1e-4);
    cfg.truncate_n = 0;
    EXPECT_EQ(run_quiet(cfg), 2);
}

TEST(Json, SeriesRoundTrip) {
    TrigSeries s(Parity::Antiperiodic, 0.0, {{1, 0.25, -1.5}, {3, 1e-7, 2.0}, {9, 0.0, 0.125}});
    TrigSeries r = series_from_json(json::parse(to_json(s).dump()));
    for (int j = 0; j < 64; ++j) {
        double t = kTwoPi * j / 64;
        EXPECT_DOUBLE_EQ(r(t), s(t));
    }
    EXPECT_EQ(to_json(r).dump(), to_json(s).dump());
}

TEST(Json, RejectsBadSeries) {
    for (const char* text : {R"({"parity": "odd", "constant": 0, "harmonics": []})",
                             R"({"parity": "antiperiodic", "constant": 1, "harmonics": []})",
                             R"({"parity": "antiperiodic", "constant": 0, "harmonics": [[2, 1, 0]]})",
                             R"({"parity": "periodic", "harmonics": [[1, "a", 0]]})"}) {
        bool threw = false;
        try {
            series_from_json(json::parse(text));
        } catch (const Error&) {
            threw = true;
        }
        EXPECT_TRUE(threw) << text;
    }
}

TEST(Binary, UsageErrorsAreExitTwo) {
    std::string cli = CURVEX_CLI;
    auto status = [&](const std::string& args) {
        int rc = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
        return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    };
    EXPECT_EQ(status("--mode width-census"), 2);
    EXPECT_EQ(status("--input " + data("width_sin3.json") + " --mode bogus"), 2);
    EXPECT_EQ(status("--input " + data("width_sin3.json") + " --mode width-census --grid 300"), 2);
    EXPECT_EQ(status("--input " + data("width_sin3.json") + " --mode width-census"), 0);
}
