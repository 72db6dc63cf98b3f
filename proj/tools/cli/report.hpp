#pragma once

#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "tsbvp/calculus.hpp"
#include "tsbvp/regular_solver.hpp"
#include "tsbvp/singular_solver.hpp"

namespace tsbvp::cli {

using Json = nlohmann::ordered_json;

// `value` printed with %.{precision}g.
std::string format_number(double value, int precision);

// `value` rounded to `precision` significant digits, for JSON output.
double round_to(double value, int precision);

Json number_array(std::span<const double> values, int precision);

/// CSV with header `t,u,udelta,residual`; udelta is empty on the terminal row.
void write_solution_csv(std::ostream& out, const GridFunction& u,
                        const ResidualBreakdown& residual, int precision);

Json solve_report_json(const SolveReport& report, int precision);
Json conditions_json(const ConditionsReport& report, int precision);
Json certificate_json(const BarrierCertificate& cert, int precision);
Json barrier_json(const BarrierCheck& check, int precision);
Json post_check_json(const PostCheck& check);

void write_json_file(const std::string& path, const Json& doc);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace tsbvp::cli
