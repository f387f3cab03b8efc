#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dispatch.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kickwig: delta-kicked rotor in the momentum ladder and Wigner phase space"};
  app.require_subcommand(1);
  std::string config;
  std::string command;
  for (const char* name : {"run", "dump-coefficients", "validate"}) {
    const char* help = std::string(name) == "run"                  ? "run the configured scenario"
                       : std::string(name) == "dump-coefficients" ? "write S_l and kernel CSVs"
                                                                  : "check a config file";
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("config", config, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->callback([&command, name] { command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kickwig::cli::error;
  }
  return kickwig::cli::run_command(command, config, std::cout, std::cerr);
}
