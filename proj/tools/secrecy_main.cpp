// secrecy: rates | sweep | simulate | optimize
//
// Exit codes: 0 ok, 2 configuration/usage error, 3 runtime contract violation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "secrecy/commands.hpp"
#include "secrecy/errors.hpp"
#include "secrecy/format.hpp"

using namespace secrecy;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitContract = 3;

struct Flags {
    std::string config;
    std::string out;
    std::string format;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> frames;
    std::optional<double> ratio_min;
    std::optional<double> ratio_max;
    std::optional<int> steps;
    int threads = 0;
};

ConfigEntries overrides(const Flags& f) {
    ConfigEntries o;
    if (!f.format.empty()) o["output.format"] = f.format;
    if (!f.out.empty()) o["output.path"] = f.out;
    if (f.seed) o["seed"] = std::to_string(*f.seed);
    if (f.frames) o["frames"] = std::to_string(*f.frames);
    if (f.ratio_min) o["sweep.ratio_min"] = format_number(*f.ratio_min);
    if (f.ratio_max) o["sweep.ratio_max"] = format_number(*f.ratio_max);
    if (f.steps) o["sweep.steps"] = std::to_string(*f.steps);
    return o;
}

void emit(const OutputRecord& rec, const RunConfig& cfg) {
    const auto text = rec.render(cfg.format);
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw ConfigError("output.path: cannot open " + cfg.out_path);
    out << text;
    if (!out) throw ConfigError("output.path: write failed for " + cfg.out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secrecy-rate bounds for half-duplex two-way channels"};
    app.require_subcommand(1);
    Flags flags;

    const auto add_common = [&flags](CLI::App* sub) {
        sub->add_option("--config", flags.config, "Config file (key = value, or a JSON/CSV record)");
        sub->add_option("--out", flags.out, "Output file (default stdout)");
        sub->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", flags.seed, "Master seed");
        sub->add_option("--threads", flags.threads, "Worker threads (0 = runtime default)")
            ->check(CLI::NonNegativeNumber);
    };

    auto* rates = app.add_subcommand("rates", "Bounds at a single parameter point");
    auto* sweep = app.add_subcommand("sweep", "Max-min secrecy rate against the distance ratio");
    auto* simulate = app.add_subcommand("simulate", "Frame simulation against the analytic profile");
    auto* optimize = app.add_subcommand("optimize", "Max-min search over the configured grids");
    for (auto* sub : {rates, sweep, simulate, optimize}) add_common(sub);
    simulate->add_option("--frames", flags.frames, "Symbol intervals to simulate");
    sweep->add_option("--ratio-min", flags.ratio_min, "Smallest distance ratio");
    sweep->add_option("--ratio-max", flags.ratio_max, "Largest distance ratio");
    sweep->add_option("--steps", flags.steps, "Number of ratios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        const auto cfg = load_config(flags.config, overrides(flags));
        if (rates->parsed()) emit(cmd_rates(cfg), cfg);
        else if (sweep->parsed()) emit(cmd_sweep(cfg, flags.threads), cfg);
        else if (simulate->parsed()) emit(cmd_simulate(cfg, flags.threads), cfg);
        else emit(cmd_optimize(cfg, flags.threads), cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return kExitContract;
    } catch (const DomainError& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return kExitContract;
    }
    return 0;
}
