// Command-line front end: evolve, reconstruct, fidelity-sweep, oracle-check.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rotorrec/pipeline.hpp"

namespace {

using rotorrec::ExperimentConfig;

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> method;
    std::vector<int> kicks;
    std::optional<long> events;
    std::vector<double> accuracy;
    int jobs = 1;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file of flat keys");
    cmd->add_option("--seed", args.seed, "master seed (overrides config)");
    cmd->add_option("--out", args.out, "output directory (overrides config)");
    cmd->add_option("--method", args.method, "reconstruction method: self | holo")
        ->check(CLI::IsMember({"self", "holo"}));
    cmd->add_option("--kicks", args.kicks, "kick counts, e.g. --kicks 1 2 5");
    cmd->add_option("--events", args.events,
                    "Monte-Carlo atoms per histogram (0 selects exact distributions)");
    cmd->add_option("--accuracy", args.accuracy, "accuracy grid a = 1/delta_w for the sweep");
    cmd->add_option("--jobs", args.jobs, "worker threads for parallel realizations")
        ->check(CLI::PositiveNumber);
}

ExperimentConfig resolve_config(const CommonArgs& args) {
    ExperimentConfig cfg;
    if (!args.config_path.empty()) cfg = rotorrec::parse_config(args.config_path);
    if (args.seed) cfg.master_seed = *args.seed;
    if (args.out) cfg.output_dir = *args.out;
    if (args.method) cfg.method = *args.method;
    if (!args.kicks.empty()) cfg.kicks = args.kicks;
    if (args.events) cfg.events = *args.events;
    if (!args.accuracy.empty()) cfg.accuracy = args.accuracy;
    rotorrec::validate_config(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kicked-rotor interferometric state-reconstruction toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* evolve = app.add_subcommand("evolve", "propagate and export exact states");
    CLI::App* reconstruct =
        app.add_subcommand("reconstruct", "simulate measurement and invert the wave function");
    CLI::App* sweep = app.add_subcommand("fidelity-sweep",
                                         "mean fidelity vs accuracy for both methods");
    CLI::App* oracle = app.add_subcommand("oracle-check", "run propagator and invariant checks");
    for (CLI::App* cmd : {evolve, reconstruct, sweep, oracle}) add_common_options(cmd, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const ExperimentConfig cfg = resolve_config(args);
        if (evolve->parsed()) return rotorrec::cmd_evolve(cfg, std::cout);
        if (reconstruct->parsed()) return rotorrec::cmd_reconstruct(cfg, std::cout);
        if (sweep->parsed()) return rotorrec::cmd_fidelity_sweep(cfg, args.jobs, std::cout);
        if (oracle->parsed()) return rotorrec::cmd_oracle_check(cfg, std::cout);
    } catch (const rotorrec::origin_vanishes_error& e) {
        std::cerr << "reconstruction failure: " << e.what() << "\n";
        return 3;
    } catch (const rotorrec::empty_mask_error& e) {
        std::cerr << "reconstruction failure: " << e.what() << "\n";
        return 3;
    } catch (const rotorrec::alignment_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const rotorrec::leakage_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const rotorrec::grid_mismatch_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const rotorrec::validation_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
