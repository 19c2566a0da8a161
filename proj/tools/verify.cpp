// Command line front end for the verification suites.
//
//   verify [check] [--n N] [--seed S] [--samples K] [--tol T] [--h H]
//          [--output text|json]
//
// With no subcommand every check runs.  Text reports go to stdout; JSON
// reports (schema "twistor-verifier/1") also go to stdout and are
// byte-identical for identical configurations.  Exit status: 0 when all
// gated cases pass, 1 on a verification failure, 2 on a usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "twistor/checks.hpp"

int main(int argc, char** argv) {
  using twistor::checks::Check;
  using twistor::checks::OutputMode;
  using twistor::checks::RunConfig;

  CLI::App app{"Numerical verifier for complex structures on even spheres"};
  app.set_help_flag("--help", "Print usage and exit");  // frees -h for --h
  app.require_subcommand(0, 1);
  app.fallthrough();

  RunConfig cfg;
  std::string output = "text";
  app.add_option("--n", cfg.n, "Half-dimension of the base sphere")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Root seed for all sampling")
      ->capture_default_str();
  app.add_option("--samples", cfg.samples, "Sample count per check")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--tol", cfg.tol, "Bound for exact identities")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--h", cfg.h, "Finite-difference step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--output", output, "Report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  for (const std::string& name : twistor::checks::check_names()) {
    app.add_subcommand(name, "Run the '" + name + "' check");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.check = Check::kAll;
  for (const auto* sub : app.get_subcommands()) {
    cfg.check = twistor::checks::check_from_name(sub->get_name());
  }
  cfg.output = (output == "json") ? OutputMode::kJson : OutputMode::kText;

  try {
    const twistor::checks::CheckReport report = twistor::checks::run(cfg);
    if (cfg.output == OutputMode::kJson) {
      std::cout << twistor::checks::report_to_json(report).dump(2) << "\n";
    } else {
      std::cout << twistor::checks::report_to_text(report);
    }
    return report.pass ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
