#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "plap/config.hpp"
#include "plap/error.hpp"
#include "plap/experiments.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"Averaged space-time schemes for the stochastic p-Laplace equation"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    for (const char* name : {"verify-law", "explicit", "converge", "sample-noise", "selftest"}) {
        CLI::App* sub = app.add_subcommand(name);
        auto* cfg_opt = sub->add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
        if (std::string(name) != "selftest") cfg_opt->required();
        sub->add_option("--seed", seed, "override master_seed");
        sub->add_option("--out", out_dir, "output directory");
    }
    CLI11_PARSE(app, argc, argv);

    const std::string experiment = app.get_subcommands().front()->get_name();
    const CLI::App* sub = app.get_subcommands().front();
    try {
        plap::ExperimentConfig cfg =
            config_path.empty() ? plap::parse_config("", experiment) : plap::load_config(config_path, experiment);
        if (cfg.experiment != experiment) {
            throw plap::ConfigError("config is for '" + cfg.experiment + "', not '" + experiment + "'", 0,
                                    "experiment");
        }
        if (sub->count("--seed") > 0) cfg.master_seed = seed;

        fs::path target = cfg.output.empty() ? fs::path(experiment + ".csv") : fs::path(cfg.output);
        if (!out_dir.empty()) target = fs::path(out_dir) / target.filename();

        const auto start = std::chrono::steady_clock::now();
        const plap::ExperimentOutput out = plap::run_experiment(cfg);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        plap::write_file_atomic(target.string(), out.csv);
        if (!out.rows.empty() && experiment != "selftest") {
            fs::path script = target;
            script.replace_extension(".gp");
            plap::write_file_atomic(script.string(), plap::gnuplot_script(out.rows, target.filename().string()));
        }
        if (experiment == "selftest") {
            for (const auto& row : out.rows) {
                std::cout << (row.mean > 0.5 ? "ok   " : "FAIL ") << row.metric << '\n';
            }
        }
        std::cout << "wrote " << target.string() << " (" << secs << " s)\n";
        return out.status;
    } catch (const plap::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
