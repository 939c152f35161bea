#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "phasespace/dynamics.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite phase-space toolkit: Weyl symbols, quasi-distributions and lattice dynamics"};
  app.require_subcommand(1);
  std::string config;
  std::string out;
  for (const char* name : {"transform", "evolve", "transport", "verify", "bench"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "YAML run configuration")->required();
    sub->add_option("--out", out, "output directory (overrides 'output' in the config)");
  }
  CLI11_PARSE(app, argc, argv);

  using namespace phasespace::cli;
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = load_config(config);
    const std::filesystem::path dir = out.empty() ? cfg.output : std::filesystem::path(out);
    return run(command_from_string(command), cfg, dir, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const phasespace::PropagationError& e) {
    std::cerr << "propagation failed at step " << e.step() << ": " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
