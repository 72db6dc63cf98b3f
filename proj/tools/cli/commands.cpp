#include "commands.hpp"

#include <filesystem>
#include <sstream>

#include "config.hpp"
#include "report.hpp"
#include "tsbvp/error.hpp"

namespace tsbvp::cli {
namespace {

Json header(const std::string& command) {
  Json j;
  j["schema_version"] = 1;
  j["command"] = command;
  return j;
}

Json grid_json(const GridTimeScale& grid, int precision) {
  return Json{{"points", grid.size()},
              {"horizon", round_to(grid.horizon(), precision)}};
}

std::string csv_text(const GridFunction& u, const ResidualBreakdown& residual,
                     int precision) {
  std::ostringstream os;
  write_solution_csv(os, u, residual, precision);
  return os.str();
}

// "dir/run.csv" -> "dir/run.stage03.csv".
std::string stage_path(const std::string& csv_path, std::size_t stage) {
  std::filesystem::path p(csv_path);
  char suffix[32];
  std::snprintf(suffix, sizeof suffix, ".stage%02zu", stage);
  std::filesystem::path out = p.parent_path() /
                              (p.stem().string() + suffix + p.extension().string());
  return out.string();
}

void require_kind(const RunConfig& cfg, ProblemKind kind,
                  const std::string& command) {
  if (cfg.kind != kind) {
    throw ConfigError(cfg.source + ": " + command + " needs kind = " +
                          (kind == ProblemKind::kRegular ? "regular" : "singular"),
                      0);
  }
}

int solve_regular(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load_config(opt.target);
  require_kind(cfg, ProblemKind::kRegular, "solve-regular");
  const auto csv_path = opt.csv_path ? opt.csv_path : cfg.csv_path;
  const auto json_path = opt.json_path ? opt.json_path : cfg.json_path;

  const GridTimeScale grid = make_grid(cfg);
  const RegularProblem problem = make_regular_problem(cfg, grid);
  if (cfg.alpha.has_value() != cfg.beta.has_value()) {
    throw ConfigError(cfg.source + ": alpha and beta must be given together", 0);
  }
  std::optional<BarrierPair> barriers;
  if (cfg.alpha) {
    barriers.emplace(make_barrier(*cfg.alpha, grid), make_barrier(*cfg.beta, grid));
  }
  const RegularProblem solved =
      barriers ? auxiliary_problem(problem, *barriers) : problem;

  auto shooting = [&] {
    if (barriers) return shooting_solve(solved, *barriers, cfg.solver);
    return shooting_solve(solved, cfg.solver,
                          Bracket{cfg.gT - cfg.solver.bracket_pad,
                                  cfg.gT + cfg.solver.bracket_pad});
  };
  std::optional<SolveReport> report;
  std::string fallback_reason;
  if (cfg.method == "shooting") {
    report = shooting();
  } else {
    try {
      report = barriers ? picard_solve(solved, *barriers, cfg.solver)
                        : picard_solve(solved, cfg.solver);
    } catch (const NonConvergenceError& e) {
      if (!opt.fallback_shooting) throw;
      fallback_reason = e.what();
      err << "picard did not converge, falling back to shooting: " << e.what()
          << "\n";
      report = shooting();
    }
  }

  const int precision = cfg.precision;
  const std::string csv = csv_text(report->solution, report->residual_parts,
                                   precision);
  if (csv_path) {
    write_text_file(*csv_path, csv);
  } else {
    out << csv;
  }
  if (json_path) {
    Json doc = header("solve-regular");
    doc["problem"] = {{"kind", "regular"},
                      {"h", cfg.rhs->text},
                      {"gT", cfg.gT},
                      {"alpha", cfg.alpha ? Json(cfg.alpha->text) : Json(nullptr)},
                      {"beta", cfg.beta ? Json(cfg.beta->text) : Json(nullptr)}};
    doc["grid"] = grid_json(grid, precision);
    doc["fallback_reason"] = fallback_reason;
    doc["report"] = solve_report_json(*report, precision);
    write_json_file(*json_path, doc);
  }
  if (csv_path) {
    out << "solve-regular: " << to_string(report->method) << " converged in "
        << report->iterations << " iterations, residual "
        << format_number(report->residual_sup, 3) << "\n";
  }
  if (report->enclosure_ok && !*report->enclosure_ok) {
    err << "solution leaves the barrier band alpha <= u <= beta\n";
    return kExitCertifiedFailure;
  }
  return kExitOk;
}

int solve_singular_cmd(const CliOptions& opt, std::ostream& out,
                       std::ostream& err) {
  RunConfig cfg = load_config(opt.target);
  require_kind(cfg, ProblemKind::kSingular, "solve-singular");
  const auto csv_path = opt.csv_path ? opt.csv_path : cfg.csv_path;
  const auto json_path = opt.json_path ? opt.json_path : cfg.json_path;
  const int precision = cfg.precision;

  const GridTimeScale grid = make_grid(cfg);
  const SingularProblem problem = make_singular_problem(cfg, grid);
  ConditionProbes probes;
  probes.probes = cfg.probes;
  const ConditionsReport conditions = check_conditions(problem, probes);

  Json doc = header("solve-singular");
  doc["problem"] = {{"kind", "singular"},
                    {"f", cfg.rhs->text},
                    {"gT", cfg.gT},
                    {"c", *cfg.c},
                    {"delta", *cfg.delta}};
  doc["grid"] = grid_json(grid, precision);
  doc["conditions"] = conditions_json(conditions, precision);

  auto emit = [&](const char* status, int code) {
    doc["status"] = status;
    if (json_path) write_json_file(*json_path, doc);
    return code;
  };

  if (!conditions.pipeline_ready() && !opt.skip_conditions) {
    for (char id : {'D', 'E', 'F'}) {
      const auto& c = conditions.get(id);
      if (c.status != ConditionStatus::kPass) {
        err << "condition " << id << ": " << to_string(c.status) << " - "
            << c.summary << "\n";
      }
    }
    return emit("conditions_failed", kExitCertifiedFailure);
  }

  auto stages_json = [&](const SingularRun& run) {
    Json stages = Json::array();
    for (std::size_t j = 0; j < run.stages.size(); ++j) {
      const StageResult& s = run.stages[j];
      Json entry = {
          {"k", s.k},
          {"method", std::string(to_string(s.report.method))},
          {"iterations", s.report.iterations},
          {"residual_sup", round_to(s.report.residual_sup, precision)},
          {"gap", s.gap ? Json(round_to(*s.gap, precision)) : Json(nullptr)},
          {"fallback_reason", s.fallback_reason},
      };
      if (csv_path) entry["csv"] = stage_path(*csv_path, j);
      stages.push_back(std::move(entry));
    }
    return stages;
  };
  auto write_stage_csvs = [&](const SingularRun& run) {
    if (!csv_path) return;
    for (std::size_t j = 0; j < run.stages.size(); ++j) {
      const SolveReport& r = run.stages[j].report;
      write_text_file(stage_path(*csv_path, j),
                      csv_text(r.solution, r.residual_parts, precision));
    }
  };

  SingularRun run;
  try {
    run = solve_singular(problem, cfg.solver, cfg.singular);
  } catch (const StageError& e) {
    err << e.what() << "\n";
    doc["error"] = e.what();
    doc["run"] = {{"k_schedule", e.partial().k_schedule},
                  {"stages", stages_json(e.partial())}};
    write_stage_csvs(e.partial());
    return emit("stage_failed", kExitNonConvergence);
  } catch (const NonStabilizationError& e) {
    err << e.what() << "\n";
    doc["error"] = e.what();
    doc["run"] = {{"k_schedule", e.partial().k_schedule},
                  {"stages", stages_json(e.partial())},
                  {"gap_trace", number_array(e.gaps(), precision)}};
    write_stage_csvs(e.partial());
    return emit("not_stabilized", kExitNonConvergence);
  }

  write_stage_csvs(run);
  const SolveReport& last = run.stages.back().report;
  const std::string csv = csv_text(run.limit(), last.residual_parts, precision);
  if (csv_path) {
    write_text_file(*csv_path, csv);
  } else {
    out << csv;
  }

  const PostCheck post = post_check(run, problem);
  doc["run"] = {
      {"k_schedule", run.k_schedule},
      {"stages", stages_json(run)},
      {"stabilization_gap", round_to(run.stabilization_gap, precision)},
      {"gap_trace", number_array(run.gap_trace, precision)},
      {"barrier", barrier_json(*run.barrier, precision)},
      {"singular_residual",
       {{"value", round_to(run.residual->value, precision)},
        {"floor", round_to(run.residual->floor, precision)},
        {"points_used", run.residual->points_used},
        {"points_excluded", run.residual->points_excluded}}},
  };
  doc["post_check"] = post_check_json(post);
  doc["limit"] = {{"t", number_array(grid.points(), precision)},
                  {"u", number_array(run.limit().values(), precision)}};

  if (csv_path) {
    out << "solve-singular: stabilized after " << run.stages.size()
        << " stages (gap " << format_number(run.stabilization_gap, 3)
        << "), epsilon* " << format_number(run.barrier->epsilon_star, 6)
        << ", post-check " << (post.passed() ? "pass" : "fail") << "\n";
  }
  if (!post.passed() || !run.barrier->passed) {
    if (!post.positive) err << "post-check: solution is not positive\n";
    if (!post.bounded) err << "post-check: solution exceeds c\n";
    if (!post.above_boundary_value) err << "post-check: g(T) < u(0) fails\n";
    if (!run.barrier->passed) err << "barrier certificate failed\n";
    return emit("certificate_failed", kExitCertifiedFailure);
  }
  return emit("ok", kExitOk);
}

int verify_cmd(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load_config(opt.target);
  const auto json_path = opt.json_path ? opt.json_path : cfg.json_path;
  const int precision = cfg.precision;
  const GridTimeScale grid = make_grid(cfg);

  std::optional<RegularProblem> problem;
  std::optional<GridFunction> alpha;
  std::optional<GridFunction> beta;
  Json doc = header("verify");
  if (cfg.kind == ProblemKind::kSingular) {
    const SingularProblem singular = make_singular_problem(cfg, grid);
    const double k = opt.k.value_or(cfg.singular.k0);
    if (!(k > 0.0)) throw ConfigError("--k must be positive", 0);
    problem = RegularProblem{regularize(singular.f, k), singular.gT, grid};
    alpha = cfg.alpha ? make_barrier(*cfg.alpha, grid)
                      : GridFunction::constant(grid, 0.0);
    beta = cfg.beta ? make_barrier(*cfg.beta, grid)
                    : GridFunction::constant(grid, singular.c);
    doc["problem"] = {{"kind", "singular"}, {"f", cfg.rhs->text}, {"k", k}};
  } else {
    problem = make_regular_problem(cfg, grid);
    if (!cfg.alpha && !cfg.beta) {
      throw ConfigError(cfg.source + ": verify needs alpha and/or beta in [problem]",
                        0);
    }
    if (cfg.alpha) alpha = make_barrier(*cfg.alpha, grid);
    if (cfg.beta) beta = make_barrier(*cfg.beta, grid);
    doc["problem"] = {{"kind", "regular"}, {"h", cfg.rhs->text}};
  }

  bool all_pass = true;
  Json certs = Json::array();
  auto record = [&](const char* label, const BarrierCertificate& cert) {
    all_pass = all_pass && cert.passed;
    out << label << ": " << (cert.passed ? "pass" : "fail") << "\n";
    for (const auto& v : cert.violations) err << label << ": " << v << "\n";
    certs.push_back(certificate_json(cert, precision));
  };
  if (alpha) record("lower", verify_lower(*alpha, *problem, cfg.verify_tol));
  if (beta) record("upper", verify_upper(*beta, *problem, cfg.verify_tol));
  if (alpha && beta) {
    bool ordered = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if ((*alpha)[i] > (*beta)[i]) ordered = false;
    }
    doc["ordered"] = ordered;
    out << "alpha <= beta: " << (ordered ? "pass" : "fail") << "\n";
    all_pass = all_pass && ordered;
  }
  doc["certificates"] = std::move(certs);
  doc["passed"] = all_pass;
  if (json_path) write_json_file(*json_path, doc);
  return all_pass ? kExitOk : kExitCertifiedFailure;
}

int calc_cmd(const CliOptions& opt, std::ostream& out) {
  if (!opt.calc_expr) throw ConfigError("calc needs --expr", 0);
  RunConfig cfg = load_config(opt.target);
  const auto csv_path = opt.csv_path ? opt.csv_path : cfg.csv_path;
  const GridTimeScale grid = make_grid(cfg);
  expr::Expression e = [&] {
    try {
      return expr::parse(*opt.calc_expr);
    } catch (const expr::ParseError& err) {
      throw ConfigError(std::string("--expr: ") + err.what(), 0);
    }
  }();
  if (e.uses(expr::Var::kU)) {
    throw ConfigError("--expr must be a function of t only", 0);
  }
  const GridFunction f =
      GridFunction::sample(grid, [&](double t) { return expr::eval(e, t, 0.0); });
  const DeltaDerivative d = delta_derivative(f);
  const int precision = cfg.precision;

  std::ostringstream os;
  os << "t,f,fdelta,integral\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double integral = delta_integral(f, 0, i);
    os << format_number(grid[i], precision) << ','
       << format_number(f[i], precision) << ',';
    if (const auto slope = d.at(i)) os << format_number(*slope, precision);
    os << ',' << format_number(integral, precision) << '\n';
  }
  if (csv_path) {
    write_text_file(*csv_path, os.str());
  } else {
    out << os.str();
  }
  return kExitOk;
}

int examples_cmd(const CliOptions& opt, std::ostream& out) {
  const std::filesystem::path dir(opt.target.empty() ? "." : opt.target);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create directory " + dir.string(), 0);
  for (const auto& entry : example_catalog()) {
    write_text_file((dir / entry.file_name).string(), entry.text);
    out << (dir / entry.file_name).string() << "  " << entry.description << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(const CliOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (options.subcommand == "solve-regular") return solve_regular(options, out, err);
    if (options.subcommand == "solve-singular") {
      return solve_singular_cmd(options, out, err);
    }
    if (options.subcommand == "verify") return verify_cmd(options, out, err);
    if (options.subcommand == "calc") return calc_cmd(options, out);
    if (options.subcommand == "examples") return examples_cmd(options, out);
    err << "unknown subcommand '" << options.subcommand << "'\n";
    return kExitInputError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const NonConvergenceError& e) {
    err << "not converged: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const BracketingError& e) {
    err << "not converged: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const EvaluationError& e) {
    err << "evaluation failed: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace tsbvp::cli
