#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beliefsim/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo robustness of uncertain-reasoning procedures under calibration error"};
    app.require_subcommand(1);

    unsigned workers = 0;
    app.add_option("--threads", workers, "Worker threads (0 = hardware concurrency)");

    auto* run = app.add_subcommand("run", "Run a sweep from a config file and write histograms.csv / summary.csv");
    std::string config_path;
    std::vector<std::string> overrides;
    run->add_option("--config", config_path, "Config file (key = value lines)")->required();
    run->add_option("--set", overrides, "Override a config key: key=value (repeatable)");

    auto* report = app.add_subcommand("report", "Render one result table from a results directory");
    std::string results_dir;
    std::string report_table;
    report->add_option("--dir", results_dir, "Directory holding histograms.csv and summary.csv")->required();
    report->add_option("--table", report_table, "t1..t7")->required();

    auto* reproduce = app.add_subcommand("reproduce", "Run the cells behind a table and check the reference values");
    std::string repro_table;
    beliefsim::ReproduceOptions repro;
    reproduce->add_option("--table", repro_table, "t1..t7")->required();
    reproduce->add_option("--seed", repro.seed, "Master seed")->capture_default_str();
    reproduce->add_option("--runs", repro.runs, "Runs per cell")->capture_default_str();
    reproduce->add_option("--dir", repro.dir, "Output directory (default reproduce_<table>)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (*run) return beliefsim::cmd_run(config_path, overrides, workers, std::cout, std::cerr);
    if (*report) return beliefsim::cmd_report(results_dir, report_table, std::cout, std::cerr);
    repro.workers = workers;
    return beliefsim::cmd_reproduce(repro_table, repro, std::cout, std::cerr);
}
