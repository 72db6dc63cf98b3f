#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsbvp/error.hpp"
#include "tsbvp/expr.hpp"
#include "tsbvp/regular_solver.hpp"
#include "tsbvp/singular_solver.hpp"
#include "tsbvp/timescale.hpp"

namespace tsbvp::cli {

// Malformed or incomplete run configuration. The message carries
// "<source>:<line>:" when a line is known.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line)
      : Error(what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

// `[section]` headers followed by `key = value` lines. Blank lines and lines
// starting with '#' or ';' are ignored, as is anything after a '#' or ';'
// that follows whitespace.
struct IniDocument {
  std::string source;
  std::vector<std::pair<std::string, std::vector<Entry>>> sections;
};

IniDocument parse_ini(std::string_view text, const std::string& source);

enum class ProblemKind { kRegular, kSingular };

struct ExpressionSetting {
  std::string text;
  expr::Expression parsed;
  int line = 0;
};

struct RunConfig {
  std::string source;

  ProblemKind kind = ProblemKind::kRegular;
  std::optional<ExpressionSetting> rhs;  // h (regular) or f (singular)
  double gT = 0.0;
  std::optional<double> c;
  std::optional<double> delta;
  std::optional<ExpressionSetting> alpha;  // functions of t
  std::optional<ExpressionSetting> beta;

  TimeScaleSpec timescale;
  double resolution = 1.0;

  SolverConfig solver;
  SingularOptions singular;
  std::string method = "picard";
  int samples_per_band = 64;
  double verify_tol = kDefaultVerifyTol;
  int probes = 16;

  std::optional<std::string> csv_path;
  std::optional<std::string> json_path;
  int precision = 12;
};

RunConfig parse_config(std::string_view text, const std::string& source);
RunConfig load_config(const std::string& path);

GridTimeScale make_grid(const RunConfig& config);
Rhs make_rhs(const RunConfig& config);
GridFunction make_barrier(const ExpressionSetting& setting,
                          const GridTimeScale& grid);
RegularProblem make_regular_problem(const RunConfig& config,
                                    const GridTimeScale& grid);
SingularProblem make_singular_problem(const RunConfig& config,
                                      const GridTimeScale& grid);

}  // namespace tsbvp::cli
