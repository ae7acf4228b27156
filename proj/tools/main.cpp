#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "cavspin/errors.hpp"
#include "commands.hpp"

using namespace cavspin;

namespace {

constexpr int kRuntimeError = 1;
constexpr int kInputError = 2;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled-cavity spin machine: simulate, anneal, sweep and oracle"};
    app.require_subcommand(1);

    std::string config_path;
    cli::Overrides ov;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run config")->check(CLI::ExistingFile);
        sub->add_option("--graph", ov.graph, "graph JSON file (overrides the config)");
        sub->add_option("--seed", ov.seed, "RNG seed");
        sub->add_option("--out", ov.out, "output directory");
    };
    CLI::App* simulate = app.add_subcommand("simulate", "evolve one network to stationarity");
    CLI::App* anneal = app.add_subcommand("anneal", "pulsed feedback annealing on one graph");
    CLI::App* sweep = app.add_subcommand("sweep", "annealing statistics over random graphs");
    CLI::App* oracle = app.add_subcommand("oracle", "exhaustive ground-truth report for a graph");
    for (CLI::App* sub : {simulate, anneal, sweep, oracle}) add_common(sub);
    for (CLI::App* sub : {anneal, sweep}) sub->add_option("--pulses", ov.pulses, "number of pulses");
    sweep->add_option("--threads", ov.threads, "worker threads (default: all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        const cli::RunConfig config = cli::load_config(config_path, ov);
        if (simulate->parsed()) cli::cmd_simulate(config);
        if (anneal->parsed()) cli::cmd_anneal(config);
        if (sweep->parsed()) cli::cmd_sweep(config);
        if (oracle->parsed()) cli::cmd_oracle(config, ov.out.has_value());
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return 0;
}
