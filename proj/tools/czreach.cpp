// Copyright (c) czreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "czreach/cli/commands.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"czreach: guaranteed reachability of nonlinear discrete-time systems with constrained zonotopes"};
    app.require_subcommand(1);

    std::string config;

    CLI::App* reach = app.add_subcommand("reach", "run the configured method and write enclosures and radii");
    reach->add_option("config", config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);

    CLI::App* compare = app.add_subcommand("compare", "run alg1, ia and czmv and write their radii side by side");
    compare->add_option("config", config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);

    CLI::App* audit = app.add_subcommand("audit", "check sampled trajectories against the enclosures");
    audit->add_option("config", config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    std::size_t samples = 10000;
    audit->add_option("--samples", samples, "number of initial states to sample")->capture_default_str();
    std::optional<std::uint64_t> seed;
    audit->add_option("--seed", seed, "random seed (defaults to the config seed)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : czreach::cli::exit_config;
    }

    if (*reach)
        return czreach::cli::cmd_reach(config);
    if (*compare)
        return czreach::cli::cmd_compare(config);
    return czreach::cli::cmd_audit(config, samples, seed);
}
