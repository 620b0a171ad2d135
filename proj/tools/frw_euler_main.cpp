#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "frw/config.hpp"
#include "frw/scenarios.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Relativistic fluid experiments on expanding spacetimes"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run_cmd =
        app.add_subcommand("run", "Execute the scenario described by a config file");
    run_cmd->add_option("config", config_path, "path to a key = value config file")
        ->required();
    auto* validate_cmd = app.add_subcommand(
        "validate", "Check a config file and echo the effective settings");
    validate_cmd->add_option("config", config_path, "path to a key = value config file")
        ->required();
    auto* defaults_cmd = app.add_subcommand(
        "print-defaults", "Print every config key with its default value");

    CLI11_PARSE(app, argc, argv);

    try {
        if (defaults_cmd->parsed()) {
            std::cout << frw::print_defaults();
            return 0;
        }
        frw::RunConfig cfg = frw::parse_config(config_path);
        if (validate_cmd->parsed()) {
            std::cout << frw::effective_config_text(cfg);
            return 0;
        }
        return frw::execute(cfg, std::cout);
    } catch (const frw::config_error& e) {
        for (const auto& problem : e.problems()) std::cerr << problem << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
