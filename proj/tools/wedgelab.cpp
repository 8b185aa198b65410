#include "wedgelab/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace wedgelab;
    CLI::App app{"wedgelab: numerical checks for twisted wedge-local models"};
    std::string config_path, out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> only;
    int jobs = 1;
    bool list = false, quiet = false;
    app.add_option("-c,--config", config_path, "experiment config (TOML)");
    app.add_option("-o,--out", out_dir, "directory for report.json and CSV files");
    app.add_option("--seed", seed, "override the seed from the config");
    app.add_option("--check", only, "run only these checks (repeatable)");
    app.add_option("-j,--jobs", jobs, "worker threads")->check(CLI::Range(1, 64));
    app.add_flag("--list", list, "list the available checks and exit");
    app.add_flag("-q,--quiet", quiet, "no per-check lines on stdout");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (list) {
        for (const auto& c : check_registry()) {
            std::cout << std::left << std::setw(22) << c.name << " [";
            for (std::size_t i = 0; i < c.models.size(); ++i) std::cout << (i ? ", " : "") << c.models[i];
            std::cout << "]" << (c.negative ? " (expected to fail)" : "") << "\n    " << c.anchor << "\n";
        }
        return 0;
    }
    if (config_path.empty()) {
        std::cerr << "error: --config is required\n";
        return 2;
    }

    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
        if (seed) cfg.seed = *seed;
        if (!only.empty()) cfg.checks = only;
        validate_checks(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    auto results = run_checks(cfg, jobs);
    try {
        write_reports(out_dir, cfg, results);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (!quiet) {
        for (const auto& r : results) {
            std::cout << (r.ok ? "ok   " : "FAIL ") << std::left << std::setw(22) << r.name << " dev=" << std::scientific
                      << std::setprecision(3) << r.max_deviation << " tol=" << r.tol << std::defaultfloat;
            if (r.expect_failure) std::cout << " (control, property " << (r.property_holds ? "held" : "failed") << ")";
            if (!r.error.empty()) std::cout << " error: " << r.error;
            std::cout << "\n";
        }
    }
    return exit_code(results);
}
