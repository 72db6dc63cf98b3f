#include "report.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "config.hpp"

namespace tsbvp::cli {

std::string format_number(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, value);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

double round_to(double value, int precision) {
  return std::strtod(format_number(value, precision).c_str(), nullptr);
}

Json number_array(std::span<const double> values, int precision) {
  Json out = Json::array();
  for (double v : values) out.push_back(round_to(v, precision));
  return out;
}

void write_solution_csv(std::ostream& out, const GridFunction& u,
                        const ResidualBreakdown& residual, int precision) {
  const GridTimeScale& grid = u.grid();
  const DeltaDerivative d = delta_derivative(u);
  out << "t,u,udelta,residual\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << format_number(grid[i], precision) << ','
        << format_number(u[i], precision) << ',';
    if (const auto slope = d.at(i)) out << format_number(*slope, precision);
    out << ',' << format_number(residual.pointwise[i], precision) << '\n';
  }
}

Json solve_report_json(const SolveReport& report, int precision) {
  Json j;
  j["method"] = std::string(to_string(report.method));
  j["iterations"] = report.iterations;
  j["residual"] = {
      {"sup", round_to(report.residual_sup, precision)},
      {"equation", round_to(report.residual_parts.equation, precision)},
      {"start_slope", round_to(report.residual_parts.start_slope, precision)},
      {"terminal", round_to(report.residual_parts.terminal, precision)},
  };
  j["ball_bound"] = report.ball_bound
                        ? Json(round_to(*report.ball_bound, precision))
                        : Json(nullptr);
  j["enclosure_ok"] =
      report.enclosure_ok ? Json(*report.enclosure_ok) : Json(nullptr);
  j["shooting_value"] = report.shooting_value
                            ? Json(round_to(*report.shooting_value, precision))
                            : Json(nullptr);
  j["trace"] = number_array(report.trace, precision);
  j["solution"] = {
      {"t", number_array(report.solution.grid().points(), precision)},
      {"u", number_array(report.solution.values(), precision)},
  };
  return j;
}

Json conditions_json(const ConditionsReport& report, int precision) {
  Json out = Json::array();
  for (const auto& c : report.conditions) {
    Json witnesses = Json::array();
    for (const auto& w : c.witnesses) {
      witnesses.push_back({
          {"t", round_to(w.t, precision)},
          {"x", round_to(w.x, precision)},
          {"value", w.value ? Json(round_to(*w.value, precision)) : Json(nullptr)},
          {"note", w.note},
      });
    }
    out.push_back({
        {"id", std::string(1, c.id)},
        {"status", std::string(to_string(c.status))},
        {"numeric_proxy", c.numeric_proxy},
        {"summary", c.summary},
        {"witnesses", std::move(witnesses)},
    });
  }
  return out;
}

Json certificate_json(const BarrierCertificate& cert, int precision) {
  auto check = [&](const InequalityCheck& c) {
    return Json{{"index", c.index},
                {"t", round_to(c.t, precision)},
                {"value", round_to(c.value, precision)},
                {"ok", c.ok}};
  };
  Json interior = Json::array();
  for (const auto& c : cert.interior) interior.push_back(check(c));
  return Json{
      {"kind", cert.kind == BarrierKind::kLower ? "lower" : "upper"},
      {"passed", cert.passed},
      {"tol", cert.tol},
      {"start_slope", check(cert.start_slope)},
      {"terminal", check(cert.terminal)},
      {"interior", std::move(interior)},
      {"violations", cert.violations},
  };
}

Json barrier_json(const BarrierCheck& check, int precision) {
  return Json{
      {"epsilon", round_to(check.epsilon, precision)},
      {"delta", round_to(check.delta, precision)},
      {"ok", check.passed},
      {"epsilon_star", round_to(check.epsilon_star, precision)},
      {"violations", check.violations},
  };
}

Json post_check_json(const PostCheck& check) {
  return Json{
      {"positive", check.positive},
      {"bounded", check.bounded},
      {"above_boundary_value", check.above_boundary_value},
      {"positivity_witness", check.positivity_witness
                                 ? Json(*check.positivity_witness)
                                 : Json(nullptr)},
      {"bound_witness",
       check.bound_witness ? Json(*check.bound_witness) : Json(nullptr)},
      {"passed", check.passed()},
  };
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file " + path, 0);
  out << text;
  if (!out) throw ConfigError("failed writing output file " + path, 0);
}

void write_json_file(const std::string& path, const Json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace tsbvp::cli
