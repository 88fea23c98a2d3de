#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"certificate pinning toolkit and evil twin attack simulator"};
  app.require_subcommand(1);

  int exit_code = rcms::cli::kExitOk;
  rcms::cli::register_cert_commands(app, exit_code);
  rcms::cli::register_gen_code(app, exit_code);
  rcms::cli::register_run_scenarios(app, exit_code);
  rcms::cli::register_supplicant(app, exit_code);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rcms::cli::kExitBadInput;
  }
  return exit_code;
}
