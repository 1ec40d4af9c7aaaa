#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cbd/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Contextuality-by-Default analysis of systems of dichotomous random variables"};
    app.require_subcommand(1);

    cbd::RunConfig config;

    auto add_common = [&](CLI::App* cmd, bool needs_file) {
        cmd->add_option("--format", config.format, "Report format")
            ->check(CLI::IsMember({"text", "json"}))
            ->capture_default_str();
        cmd->add_option("--max-vars", config.max_vars,
                        "Size guard: most coupling variables allowed (atoms are 2^n)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        if (needs_file) {
            cmd->add_option("file", config.input_path, "System JSON file")->required();
        }
    };

    add_common(app.add_subcommand("validate", "Check a system file against every invariant"), true);
    add_common(app.add_subcommand("analyze",
                                  "Couplings, omega vectors, CNTX and the contextuality verdict"),
               true);
    add_common(app.add_subcommand("chsh", "Closed-form CHSH criterion for rank-4 cyclic systems"),
               true);
    add_common(app.add_subcommand("sample-space",
                                  "Canonical four-point sample spaces of two-content contexts"),
               true);

    auto* simulate = app.add_subcommand("simulate", "Resample each context and analyze the result");
    add_common(simulate, true);
    simulate->add_option("--seed", config.seed, "RNG seed (mt19937_64)")->required();
    simulate->add_option("--samples", config.samples, "Draws per context")
        ->check(CLI::PositiveNumber)
        ->required();

    auto* fixtures = app.add_subcommand("fixtures", "Write the built-in systems as JSON files");
    fixtures->add_option("--out", config.out_dir, "Output directory")->required();
    fixtures->add_option("--epsilon", config.epsilon, "Perturbation for the tilted fixtures")
        ->capture_default_str();
    fixtures->add_option("--format", config.format, "Report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    config.command = app.get_subcommands().front()->get_name();
    return cbd::run(config, std::cout, std::cerr);
}
