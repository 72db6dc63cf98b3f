#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tsbvp::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitCertifiedFailure = 2,
  kExitNonConvergence = 3,
};

struct CliOptions {
  std::string subcommand;  // solve-regular | solve-singular | verify | calc | examples
  // Config path, or the output directory for `examples`.
  std::string target;
  bool fallback_shooting = false;
  bool skip_conditions = false;
  std::optional<std::string> csv_path;
  std::optional<std::string> json_path;
  std::optional<double> k;  // regularization level for `verify` on singular configs
  std::optional<std::string> calc_expr;
};

/// Runs one subcommand. Every path returns one of the ExitCode values;
/// diagnostics go to `err`, tables and summaries to `out`.
int run(const CliOptions& options, std::ostream& out, std::ostream& err);

struct CatalogEntry {
  std::string file_name;
  std::string description;
  std::string text;
};

/// Ready-to-run configurations shipped with the tool.
const std::vector<CatalogEntry>& example_catalog();

}  // namespace tsbvp::cli
