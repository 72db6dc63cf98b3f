#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  using tsbvp::cli::CliOptions;
  CLI::App app{"Boundary value problems on time scales: lower/upper solutions, "
               "fixed-point and shooting solvers, singular regularization"};
  app.require_subcommand(1);

  CliOptions options;
  auto add_outputs = [&](CLI::App* sub) {
    sub->add_option("--csv", options.csv_path, "CSV output path (overrides config)");
    sub->add_option("--json", options.json_path, "JSON report path (overrides config)");
  };

  auto* regular = app.add_subcommand("solve-regular", "Solve a regular problem");
  regular->add_option("config", options.target, "Run configuration")->required();
  regular->add_flag("--fallback-shooting", options.fallback_shooting,
                    "Use shooting when Picard iteration does not converge");
  add_outputs(regular);

  auto* singular = app.add_subcommand(
      "solve-singular", "Solve a singular problem through regularization");
  singular->add_option("config", options.target, "Run configuration")->required();
  singular->add_flag("--skip-conditions", options.skip_conditions,
                     "Run the pipeline even if conditions D/E/F fail");
  add_outputs(singular);

  auto* verify = app.add_subcommand(
      "verify", "Check lower/upper solution certificates for alpha and beta");
  verify->add_option("config", options.target, "Run configuration")->required();
  verify->add_option("--k", options.k,
                     "Regularization level for singular configs (default k0)");
  verify->add_option("--json", options.json_path, "JSON report path");

  auto* calc = app.add_subcommand(
      "calc", "Tabulate an expression's delta derivative and delta integral");
  calc->add_option("config", options.target, "Run configuration (time scale)")
      ->required();
  calc->add_option("--expr", options.calc_expr, "Expression in t")->required();
  calc->add_option("--csv", options.csv_path, "CSV output path");

  auto* examples = app.add_subcommand(
      "examples", "Write the built-in example configurations");
  examples->add_option("dir", options.target, "Output directory")
      ->default_val(".");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tsbvp::cli::kExitInputError;
  }
  options.subcommand = app.get_subcommands().front()->get_name();
  return tsbvp::cli::run(options, std::cout, std::cerr);
}
