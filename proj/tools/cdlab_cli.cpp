// cdlab command line: run experiments from JSON configs, list them, run identity checks.
// Exit status: 0 all checks pass, 1 a check failed or the run errored, 2 bad config.

#include <cdlab/experiments.hpp>
#include <cdlab/identities.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ex = cdlab::experiments;

namespace {

int run_config(const std::string& path, const std::string& out, int jobs) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "config error: cannot read " << path << "\n";
        return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    ex::ExperimentConfig cfg;
    try {
        cfg = ex::parse_config(ss.str());
        if (jobs < 1) throw ex::ConfigError("jobs", "must be at least 1");
    } catch (const ex::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    const std::string dir = out.empty() ? cfg.output_dir : out;
    try {
        const auto res = ex::run_experiment(cfg, jobs);
        ex::write_artifacts(res, dir);
        for (const auto& l : res.lines)
            std::cout << (l.passed ? "PASS" : "FAIL") << "  [" << l.result << "] " << l.check << ": "
                      << ex::format_number(l.value) << "\n";
        std::cout << cfg.experiment << ": " << (res.passed ? "PASS" : "FAIL") << "  (artifacts in " << dir << ")\n";
        return res.passed ? 0 : 1;
    } catch (const ex::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_identities(const std::string& filter, std::uint64_t seed) {
    std::vector<cdlab::identities::IdentityCheck> checks;
    try {
        checks = cdlab::identities::run(filter, seed);
    } catch (const cdlab::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    bool ok = true;
    for (const auto& c : checks) {
        std::printf("%s  %-14s %-64s error %.3e  tol %.1e\n", c.passed ? "PASS" : "FAIL", c.module.c_str(),
                    c.name.c_str(), c.error, c.tolerance);
        ok = ok && c.passed;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Christoffel-Darboux kernel laboratory"};
    app.require_subcommand(1);

    std::string config, out;
    int jobs = 1;
    auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
    run->add_option("--config", config, "config file")->required();
    run->add_option("--out", out, "output directory (overrides output_dir)");
    run->add_option("--jobs", jobs, "worker threads");

    auto* list = app.add_subcommand("list-experiments", "print experiment names");

    std::string filter;
    std::uint64_t seed = 1;
    auto* ids = app.add_subcommand("identities", "check exact identities on random points");
    ids->add_option("--filter", filter, "module name");
    ids->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (*run) return run_config(config, out, jobs);
    if (*list) {
        for (const auto& n : ex::experiment_names()) std::cout << n << "\n";
        return 0;
    }
    if (*ids) return run_identities(filter, seed);
    return 2;
}
