#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cirfilter/config.hpp"
#include "cirfilter/errors.hpp"
#include "commands.hpp"

namespace {

struct CommandArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
};

void add_common_options(CLI::App* cmd, CommandArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_dir, "output directory (created if absent)");
    cmd->add_option("--seed", args.seed, "override the seed of every seeded block");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact filtering for a point process with square-root stochastic intensity"};
    app.require_subcommand(1);

    CommandArgs args;
    auto* simulate = app.add_subcommand("simulate", "intensity path and jump times");
    auto* filter = app.add_subcommand("filter", "posterior trace along a query grid");
    auto* survival = app.add_subcommand("survival", "survival probabilities by horizon");
    auto* mixture = app.add_subcommand("mixture", "posterior mixture weights per interval");
    auto* validate = app.add_subcommand("validate", "particle-filter concordance report");
    for (CLI::App* cmd : {simulate, filter, survival, mixture, validate}) {
        add_common_options(cmd, args);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        cirfilter::RunConfig config = cirfilter::load_config(args.config_path);
        if (args.seed) cirfilter::override_seed(config, *args.seed);

        if (simulate->parsed()) return cirfilter::cli::run_simulate(config, args.out_dir);
        if (filter->parsed()) return cirfilter::cli::run_filter(config, args.out_dir);
        if (survival->parsed()) return cirfilter::cli::run_survival(config, args.out_dir);
        if (mixture->parsed()) return cirfilter::cli::run_mixture(config, args.out_dir);
        if (validate->parsed()) return cirfilter::cli::run_validate(config, args.out_dir);
        return 2;
    } catch (const cirfilter::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const cirfilter::NonMonotoneJumps& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const cirfilter::NonPositiveParameter& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const cirfilter::OutOfDomain& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const cirfilter::InvalidGrid& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
