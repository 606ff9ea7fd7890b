#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "secrecy/commands.hpp"
#include "secrecy/config.hpp"
#include "secrecy/errors.hpp"

using namespace secrecy;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const auto dir = fs::temp_directory_path() / ("secrecy_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const auto path = scratch_dir() / name;
    std::ofstream(path) << text;
    return path;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig from_text(const std::string& text) { return resolve_config(parse_config_text(text)); }

const char* kBlind = "p_t = 0.5\nclassifier.kind = blind\nfec.mode = ideal\n";

int run_tool(const std::string& args) {
    const std::string cmd = std::string(SECRECY_TOOL) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string csv_value(const OutputRecord& rec, const std::string& quantity) {
    for (const auto& row : rec.csv_rows)
        if (!row.empty() && row[0] == quantity) return row[1];
    return {};
}

}  // namespace

TEST(Config, DefaultsResolve) {
    const auto cfg = resolve_config({});
    EXPECT_EQ(cfg.scheme, Scheme::twoway);
    EXPECT_EQ(cfg.p_t, 0.5);
    EXPECT_EQ(cfg.seed, 1u);
    EXPECT_EQ(cfg.frames, 1'000'000u);
}

TEST(Config, KeyValueTextWithComments) {
    const auto cfg = from_text("# a comment\nbeta = 0.4   # inline\ngeometry.r_e = 2\n\nseed = 9\n");
    EXPECT_EQ(cfg.scheme, Scheme::tdm);
    EXPECT_EQ(cfg.beta, 0.4);
    EXPECT_EQ(cfg.geometry.r_e, 2.0);
    EXPECT_EQ(cfg.seed, 9u);
}

TEST(Config, ErrorsNameTheKey) {
    const auto message = [](const std::string& text) {
        try {
            from_text(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_NE(message("p_t = 1.5\n").find("p_t"), std::string::npos);
    EXPECT_NE(message("bogus.key = 1\n").find("bogus.key"), std::string::npos);
    EXPECT_NE(message("p_t = 0.5\nbeta = 0.3\n").find("beta"), std::string::npos);
    EXPECT_NE(message("geometry.r_e = 0.2\n").find("geometry"), std::string::npos);
    EXPECT_NE(message("power.min_db = 30\npower.max_db = 10\n").find("power"), std::string::npos);
    EXPECT_THROW(parse_config_text("seed = 1\nseed = 2\n"), ConfigError);
    EXPECT_THROW(parse_config_text("no equals sign\n"), ConfigError);
}

TEST(Config, OverridesWinOverFile) {
    const auto path = write_file("over.cfg", "seed = 4\nframes = 100\n");
    const auto cfg = load_config(path.string(), {{"seed", "11"}});
    EXPECT_EQ(cfg.seed, 11u);
    EXPECT_EQ(cfg.frames, 100u);
    EXPECT_THROW(load_config((scratch_dir() / "missing.cfg").string()), ConfigError);
}

TEST(Config, NumberAndClassifierLists) {
    EXPECT_EQ(parse_number_list("0:1:3", "k"), (std::vector<double>{0, 0.5, 1}));
    EXPECT_EQ(parse_number_list("0.2, 0.7", "k"), (std::vector<double>{0.2, 0.7}));
    EXPECT_THROW(parse_number_list("a,b", "k"), ConfigError);
    const auto cfg = resolve_config({});
    const auto list = parse_classifier_list("no-erasure;blind;rel(0,3);window(-10,20)", cfg);
    ASSERT_EQ(list.size(), 4u);
    EXPECT_EQ(list[1].kind, ClassifierSpec::Kind::blind);
    EXPECT_TRUE(list[2].relative);
    EXPECT_EQ(list[3].t1_db, -10.0);
    EXPECT_EQ(parse_classifier_list("default", cfg).size(), 12u);
    EXPECT_THROW(parse_classifier_list("psychic", cfg), ConfigError);
}

TEST(Config, EchoRoundTripsThroughCsvAndJson) {
    const auto cfg = from_text(
        "beta = 0.35\npower.min_db = 1.5\npower.max_db = 17\ngeometry.theta = 0.7\nclassifier.t1_db = -3\n"
        "fec.threshold_db = 2.5\nseed = 17\n");
    for (OutputFormat f : {OutputFormat::csv, OutputFormat::json}) {
        auto c = cfg;
        c.format = f;
        const auto text = cmd_rates(c).render(f);
        const auto back = resolve_config(parse_config_text(text));
        EXPECT_EQ(back.echo(), c.echo()) << text;
    }
}

TEST(Rates, BlindSymmetricValue) {
    const auto rec = cmd_rates(from_text(kBlind));
    EXPECT_NEAR(std::stod(csv_value(rec, "r_s")), 0.17923, 1e-5);
    EXPECT_NEAR(rec.result["breakdown"]["r_s"].get<double>(), 0.17923, 1e-5);
}

TEST(Rates, FullFeedbackGivesZero) {
    const auto rec = cmd_rates(from_text("beta = 1\nfec.mode = ideal\n"));
    EXPECT_EQ(std::stod(csv_value(rec, "r_s")), 0.0);
    EXPECT_EQ(std::stod(csv_value(rec, "r_sec_point")), 0.0);
}

TEST(Rates, JsonRecordShape) {
    const auto text = cmd_rates(from_text(kBlind)).render(OutputFormat::json);
    const auto j = nlohmann::json::parse(text);
    EXPECT_EQ(j["command"], "rates");
    EXPECT_TRUE(j["input"].is_object());
    EXPECT_TRUE(j["result"].is_object());
    EXPECT_TRUE(j.contains("provenance"));
}

TEST(Sweep, SingleStepUsesRatioMax) {
    auto cfg = from_text(
        "grid.params = 0.5\ngrid.law_endpoints_db = 0,10\ngrid.classifiers = no-erasure\n"
        "sweep.steps = 1\nsweep.ratio_min = 0.3\nsweep.ratio_max = 0.6\nsweep.schemes = twoway\n");
    const auto rec = cmd_sweep(cfg);
    ASSERT_EQ(rec.csv_rows.size(), 1u);
    EXPECT_EQ(rec.csv_rows[0][0], "0.6");
    EXPECT_EQ(rec.csv_header,
              (std::vector<std::string>{"ratio", "scheme", "r_sec", "argmax_param", "argmin_theta", "classifier_desc"}));
}

TEST(Sweep, UnrealizableRowsAreMarked) {
    auto cfg = from_text(
        "geometry.r_e = 5\ngrid.params = 0.5\ngrid.law_endpoints_db = 0,10\ngrid.classifiers = no-erasure\n"
        "sweep.steps = 2\nsweep.ratio_min = 0.1\nsweep.ratio_max = 1\n");
    const auto rec = cmd_sweep(cfg);
    ASSERT_EQ(rec.csv_rows.size(), 4u);
    for (int i = 0; i < 2; ++i) {
        EXPECT_EQ(rec.csv_rows[i][2], "");
        EXPECT_EQ(rec.csv_rows[i][5], "error=unrealizable_ratio");
    }
    EXPECT_NE(rec.csv_rows[2][2], "");
}

TEST(Sweep, OutputIndependentOfThreads) {
    auto cfg = from_text(
        "grid.params = 0:1:5\ngrid.law_endpoints_db = 0:20:4\ngrid.thetas = 0:3.141592653589793:5\n"
        "sweep.steps = 3\n");
    const auto a = cmd_sweep(cfg, 1).render(OutputFormat::csv);
    const auto b = cmd_sweep(cfg, 4).render(OutputFormat::csv);
    EXPECT_EQ(a, b);
}

TEST(Simulate, ByteIdenticalAcrossThreads) {
    auto cfg = from_text("frames = 150000\nseed = 3\ngeometry.theta = 0.8\n");
    for (OutputFormat f : {OutputFormat::csv, OutputFormat::json}) {
        EXPECT_EQ(cmd_simulate(cfg, 1).render(f), cmd_simulate(cfg, 4).render(f));
    }
}

TEST(Simulate, SingleFrameFlagsLowConfidence) {
    const auto rec = cmd_simulate(from_text("frames = 1\n"));
    bool flagged = false;
    for (const auto& row : rec.csv_rows) flagged |= row.back() == "low_confidence";
    EXPECT_TRUE(flagged);
}

TEST(Optimize, SingletonMatchesRates) {
    const auto cfg = from_text(std::string(kBlind) +
                               "grid.params = 0.5\ngrid.law_endpoints_db = 0,20\ngrid.thetas = 1.5707963267948966\n"
                               "grid.classifiers = blind\n");
    const auto opt = cmd_optimize(cfg);
    const auto rates = cmd_rates(cfg);
    EXPECT_EQ(csv_value(opt, "r_sec"), csv_value(rates, "r_s"));
}

TEST(Optimize, PerfectAdversaryGivesZero) {
    const auto cfg = from_text("grid.params = 0:1:5\ngrid.law_endpoints_db = 0:20:3\ngrid.classifiers = oracle\n");
    EXPECT_EQ(std::stod(csv_value(cmd_optimize(cfg), "r_sec")), 0.0);
}

TEST(Binary, ExitCodes) {
    const auto good = write_file("good.cfg", kBlind);
    const auto bad = write_file("bad.cfg", "p_t = 1.5\n");
    const auto unknown = write_file("unknown.cfg", "nonsense = 1\n");
    const auto out = scratch_dir() / "out.csv";
    EXPECT_EQ(run_tool("rates --config " + good.string() + " --out " + out.string()), 0);
    EXPECT_NE(read_file(out).find("r_s"), std::string::npos);
    EXPECT_EQ(run_tool("rates --config " + bad.string()), 2);
    EXPECT_EQ(run_tool("rates --config " + unknown.string()), 2);
    EXPECT_EQ(run_tool("rates --config " + good.string() + " --format xml"), 2);
    EXPECT_EQ(run_tool("frobnicate"), 2);
    EXPECT_EQ(run_tool("sweep --config " + good.string() + " --steps 0"), 2);
    EXPECT_EQ(run_tool("simulate --config " + good.string() + " --frames 1000 --seed 2"), 0);
    EXPECT_EQ(run_tool("--help"), 0);
}

TEST(Binary, OutputFeedsBackAsConfig) {
    const auto good = write_file("loop.cfg", "frames = 20000\nseed = 5\n");
    const auto first = scratch_dir() / "first.json";
    const auto second = scratch_dir() / "second.json";
    ASSERT_EQ(run_tool("simulate --format json --config " + good.string() + " --out " + first.string()), 0);
    ASSERT_EQ(run_tool("simulate --format json --threads 1 --config " + first.string() + " --out " + second.string()),
              0);
    EXPECT_EQ(read_file(first), read_file(second));
}
