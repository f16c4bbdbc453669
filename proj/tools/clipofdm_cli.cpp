// clipofdm: run one experiment and write its CSV table.
//
// Exit codes: 0 ok, 1 runtime failure, 2 invalid configuration, 3 output not writable.

#include "clipofdm/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitOutput = 3;

const char* const kSubcommands[][2] = {
    {"demo-frame", "dump one clipped frame (index, X, x, y)"},
    {"evm-sweep", "analytic vs Monte Carlo EVM over gamma/varsigma grids"},
    {"evm-bound", "clipping EVM against the per-symbol minimum-distortion bound"},
    {"sdr", "per-subcarrier signal-to-distortion ratio"},
    {"rate-surface", "achievable rate over a (gamma, varsigma) grid"},
    {"rate-optimal", "optimal operating point and DCO/ACO rates vs eta_OSNR"},
    {"channel", "ceiling-bounce |H_k|^2"},
};

void list_presets(std::ostream& os)
{
    for (const auto& p : clipofdm::presets()) {
        os << p.name << "\t" << p.figure << "\t" << p.description << "\n";
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw clipofdm::ConfigError("config", "cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Clipping distortion and rate experiments for DCO-/ACO-OFDM.\n"
                 "Rates are in bits per subcarrier per frame; multiply by f_s/N * N = f_s for bits/s."};
    app.require_subcommand(0, 1);

    bool want_list = false;
    std::string config_path, preset_name, out_path, scheme;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;

    app.add_flag("--list-presets", want_list, "list presets and the figure each reproduces");
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : kSubcommands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "key=value config file");
        sub->add_option("--preset", preset_name, "start from a named preset");
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--out", out_path, "output CSV path (default: stdout)");
        sub->add_option("--scheme", scheme, "DCO or ACO");
        sub->add_option("--set", overrides, "override a config key, e.g. --set gamma_db=5:1:9");
        sub->add_flag("--list-presets", want_list, "list presets");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    if (want_list) {
        list_presets(std::cout);
        return 0;
    }
    CLI::App* chosen = nullptr;
    for (auto* s : subs) {
        if (s->parsed()) {
            chosen = s;
        }
    }
    if (chosen == nullptr) {
        std::cerr << "error: experiment: no subcommand given (see --help)\n";
        return kExitConfig;
    }

    clipofdm::ExperimentConfig cfg;
    try {
        clipofdm::Settings settings;
        if (!preset_name.empty()) {
            settings.merge(clipofdm::find_preset(preset_name).settings);
        }
        if (!config_path.empty()) {
            settings.merge(clipofdm::Settings::parse(read_file(config_path)));
        }
        if (auto exp = settings.get("experiment"); exp && *exp != chosen->get_name()) {
            throw clipofdm::ConfigError("experiment", "'" + *exp + "' does not match subcommand '"
                                                          + chosen->get_name() + "'");
        }
        settings.set("experiment", chosen->get_name());
        if (!scheme.empty()) {
            settings.set("scheme", scheme);
        }
        if (seed) {
            settings.set("seed", std::to_string(*seed));
        }
        if (!out_path.empty()) {
            settings.set("out", out_path);
        }
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                throw clipofdm::ConfigError("set", "expected key=value, got '" + kv + "'");
            }
            settings.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        cfg = clipofdm::ExperimentConfig::from_settings(settings);
    } catch (const clipofdm::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    std::ofstream file;
    if (!cfg.out.empty()) {
        file.open(cfg.out, std::ios::binary | std::ios::trunc);
        if (!file) {
            std::cerr << "error: out: cannot open '" << cfg.out << "' for writing\n";
            return kExitOutput;
        }
    }

    try {
        const auto result = clipofdm::run_experiment(cfg);
        if (file.is_open()) {
            file << result.table.text();
            file.close();
            if (!file) {
                std::cerr << "error: out: write to '" << cfg.out << "' failed\n";
                return kExitOutput;
            }
            std::cout << result.summary << "\n";
        } else {
            std::cout << result.table.text();
            std::cerr << result.summary << "\n";
        }
    } catch (const clipofdm::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
