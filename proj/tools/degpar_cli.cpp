#include <iostream>

#include "CLI11.hpp"
#include "degpar/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"degpar: solvers and diagnostics for degenerate/singular parabolic equations"};
    app.require_subcommand(1);
    degpar::cli::Options opts;
    for (const std::string& name : degpar::cli::subcommands()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", opts.config_path, "experiment config (key = value)");
        sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
        sub->add_option("--threads", opts.threads, "worker threads")->capture_default_str();
        sub->add_option("--override", opts.overrides, "KEY=VALUE, may repeat");
    }
    auto* keys = app.add_flag("--list-keys", "print every config key with its default and exit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (*keys) {
            for (const auto& [k, spec] : degpar::cli::schema().keys())
                std::cout << k << " = " << spec.default_value.value_or("") << (spec.help.empty() ? "" : "  # " + spec.help)
                          << '\n';
            return 0;
        }
        return app.exit(e) == 0 ? 0 : degpar::cli::ConfigError;
    }
    const std::string name = app.get_subcommands().front()->get_name();
    return degpar::cli::run(name, opts, std::cout, std::cerr);
}
