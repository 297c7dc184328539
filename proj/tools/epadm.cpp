// Command-line driver: `run` executes a configured scenario and writes
// diagnostics; `verify` runs the seeded oracle suites and reports per-check
// relative errors. Exit codes: 0 success, 1 verification failure, 2 bad
// configuration, 3 runtime invariant violation.

#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epadm/errors.hpp"
#include "epadm/runner.hpp"
#include "epadm/verify.hpp"

namespace {

int do_run(const std::string& config_path,
           const std::vector<std::string>& overrides, const std::string& out,
           bool quiet) {
    epadm::RunConfig cfg;
    if (!config_path.empty()) cfg = epadm::parse_config_file(config_path);
    for (const std::string& o : overrides) epadm::apply_override(cfg, o);
    if (!out.empty()) cfg.out_dir = out;

    std::ostream* log = quiet ? nullptr : &std::cout;
    const epadm::RunSummary summary = epadm::run_simulation(cfg, log);
    if (!quiet) {
        std::cout << "wrote " << cfg.out_dir << "/diagnostics.csv and summary"
                  << std::endl;
    }
    (void)summary;
    return 0;
}

int do_verify(const std::string& suite, const std::string& config_path,
              std::uint64_t seed_override, bool has_seed, bool quiet) {
    epadm::RunConfig cfg;
    if (!config_path.empty()) cfg = epadm::parse_config_file(config_path);
    const std::uint64_t seed = has_seed ? seed_override : cfg.seed;

    const auto results = epadm::verify_suite(suite, seed);
    if (!quiet) {
        std::cout << std::left << std::setw(52) << "check" << std::setw(14)
                  << "rel_error" << std::setw(12) << "tolerance"
                  << "status\n";
        for (const auto& r : results) {
            std::cout << std::left << std::setw(52) << r.name
                      << std::setw(14) << std::scientific
                      << std::setprecision(3) << r.error << std::setw(12)
                      << r.tol << (r.pass ? "pass" : "FAIL") << "\n";
        }
    }
    const bool ok = epadm::all_pass(results);
    if (!quiet) {
        std::cout << (ok ? "verify: all checks passed"
                         : "verify: FAILURES present")
                  << " (suite=" << suite << ", seed=" << seed << ")"
                  << std::endl;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"barotropic fluid evolution on fixed spatial backgrounds"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    bool quiet = false;

    CLI::App* run = app.add_subcommand("run", "evolve a configured scenario");
    run->add_option("--config", config_path, "path to the run configuration");
    run->add_option("--override", overrides,
                    "section.key=value override (repeatable)");
    run->add_option("--out", out_dir, "output directory");
    run->add_flag("--quiet", quiet, "suppress progress output");

    std::string suite = "all";
    std::uint64_t seed = 0;
    bool has_seed = false;
    CLI::App* verify = app.add_subcommand("verify", "run an oracle suite");
    verify
        ->add_option("suite", suite,
                     "one of varderiv, pullback, eos, recovery, all")
        ->required();
    verify->add_option("--config", config_path, "config supplying the seed");
    verify->add_option("--seed", seed, "override the suite seed")
        ->each([&](const std::string&) { has_seed = true; });
    verify->add_flag("--quiet", quiet, "suppress the per-check table");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return do_run(config_path, overrides, out_dir, quiet);
        }
        return do_verify(suite, config_path, seed, has_seed, quiet);
    } catch (const epadm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return 2;
    } catch (const epadm::InvariantError& e) {
        std::cerr << "invariant violation: " << e.what() << std::endl;
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 3;
    }
}
