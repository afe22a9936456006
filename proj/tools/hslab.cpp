#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include <omp.h>

#include "hslab/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hslab: numerical laboratory for Hardy-Steklov operators"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir = "hslab_out";
  int resolution = 0;
  long long seed = -1;
  for (const auto& name : hslab::cli::command_names()) {
    auto* sub = app.add_subcommand(name, "run the '" + name + "' command");
    sub->add_option("--config", config_path, "JSON problem configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory for report.json and CSV tables");
    sub->add_option("--resolution", resolution, "x nodes of the discretization (y cells = 2x)")
        ->check(CLI::Range(1, hslab::lab::kMaxNx));
    sub->add_option("--seed", seed, "random seed for sampled checks")->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (const char* t = std::getenv("HSLAB_THREADS")) {
    const int n = std::atoi(t);
    if (n > 0) omp_set_num_threads(n);
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    auto cfg = hslab::cli::load_config(config_path);
    if (resolution > 0) {
      cfg.resolution.nx = resolution;
      cfg.resolution.ny = std::min(2 * resolution, hslab::lab::kMaxNy);
    }
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    const auto run = hslab::cli::run_command(cmd, cfg);
    hslab::cli::write_outputs(run, out_dir);
    std::cout << cmd << ": " << (run.pass ? "pass" : "FAIL") << " (" << out_dir << "/report.json)\n";
    return run.pass ? 0 : hslab::cli::exit_code(hslab::ErrorKind::Verification);
  } catch (const hslab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hslab::cli::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hslab::cli::exit_code(hslab::ErrorKind::Numeric);
  }
}
