#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace tsbvp::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void fail(const std::string& source, int line,
                       const std::string& what) {
  std::ostringstream os;
  os << source;
  if (line > 0) os << ":" << line;
  os << ": " << what;
  throw ConfigError(os.str(), line);
}

std::vector<std::string> split_words(const std::string& value) {
  std::istringstream is(value);
  std::vector<std::string> words;
  for (std::string w; is >> w;) words.push_back(w);
  return words;
}

double parse_number(const std::string& source, const Entry& e,
                    const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    fail(source, e.line, "key '" + e.key + "' expects a finite number, got '" +
                             text + "'");
  }
  return value;
}

double parse_number(const std::string& source, const Entry& e) {
  return parse_number(source, e, e.value);
}

int parse_int(const std::string& source, const Entry& e) {
  int value = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (e.value.empty() || ec != std::errc() || ptr != last) {
    fail(source, e.line,
         "key '" + e.key + "' expects an integer, got '" + e.value + "'");
  }
  return value;
}

ExpressionSetting parse_expression(const std::string& source, const Entry& e,
                                   bool allow_u) {
  try {
    expr::Expression parsed = expr::parse(e.value);
    if (!allow_u && parsed.uses(expr::Var::kU)) {
      fail(source, e.line,
           "key '" + e.key + "' must be a function of t only (found u)");
    }
    return ExpressionSetting{e.value, std::move(parsed), e.line};
  } catch (const expr::ParseError& err) {
    fail(source, e.line, "key '" + e.key + "': " + err.what());
  }
}

// Tracks single-valued keys so repeats are rejected.
class SectionReader {
 public:
  SectionReader(const std::string& source, const std::string& section,
                std::set<std::string> allowed, std::set<std::string> repeatable)
      : source_(source),
        section_(section),
        allowed_(std::move(allowed)),
        repeatable_(std::move(repeatable)) {}

  void check(const Entry& e) {
    if (!allowed_.count(e.key)) {
      fail(source_, e.line,
           "unknown key '" + e.key + "' in section [" + section_ + "]");
    }
    if (!repeatable_.count(e.key) && !seen_.insert(e.key).second) {
      fail(source_, e.line, "duplicate key '" + e.key + "' in section [" +
                                section_ + "]");
    }
  }

 private:
  const std::string& source_;
  std::string section_;
  std::set<std::string> allowed_;
  std::set<std::string> repeatable_;
  std::set<std::string> seen_;
};

const std::vector<Entry>* find_section(const IniDocument& doc,
                                       const std::string& name) {
  for (const auto& [section, entries] : doc.sections) {
    if (section == name) return &entries;
  }
  return nullptr;
}

const Entry* find_key(const std::vector<Entry>* entries, const std::string& key) {
  if (entries == nullptr) return nullptr;
  for (const auto& e : *entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

void read_problem(const IniDocument& doc, RunConfig& cfg) {
  const auto* entries = find_section(doc, "problem");
  if (entries == nullptr) fail(doc.source, 0, "missing section [problem]");
  SectionReader reader(doc.source, "problem",
                       {"kind", "f", "h", "gT", "c", "delta", "alpha", "beta"},
                       {});
  for (const auto& e : *entries) reader.check(e);

  const Entry* kind = find_key(entries, "kind");
  if (kind == nullptr) fail(doc.source, 0, "missing required key 'kind' in [problem]");
  if (kind->value == "regular") {
    cfg.kind = ProblemKind::kRegular;
  } else if (kind->value == "singular") {
    cfg.kind = ProblemKind::kSingular;
  } else {
    fail(doc.source, kind->line,
         "kind must be 'regular' or 'singular', got '" + kind->value + "'");
  }
  const bool singular = cfg.kind == ProblemKind::kSingular;
  const std::string rhs_key = singular ? "f" : "h";
  const std::string other_key = singular ? "h" : "f";
  if (const Entry* other = find_key(entries, other_key)) {
    fail(doc.source, other->line,
         "key '" + other_key + "' is not valid for " + kind->value +
             " problems (use '" + rhs_key + "')");
  }
  const Entry* rhs = find_key(entries, rhs_key);
  if (rhs == nullptr) {
    fail(doc.source, 0, "missing required key '" + rhs_key + "' in [problem]");
  }
  cfg.rhs = parse_expression(doc.source, *rhs, true);

  const Entry* gT = find_key(entries, "gT");
  if (gT == nullptr) fail(doc.source, 0, "missing required key 'gT' in [problem]");
  cfg.gT = parse_number(doc.source, *gT);

  for (const char* key : {"c", "delta"}) {
    const Entry* e = find_key(entries, key);
    if (singular && e == nullptr) {
      fail(doc.source, 0, std::string("missing required key '") + key +
                              "' in [problem] for singular problems");
    }
    if (!singular && e != nullptr) {
      fail(doc.source, e->line, std::string("key '") + key +
                                    "' is only valid for singular problems");
    }
    if (e != nullptr) {
      (std::string(key) == "c" ? cfg.c : cfg.delta) = parse_number(doc.source, *e);
    }
  }
  if (const Entry* e = find_key(entries, "alpha")) {
    cfg.alpha = parse_expression(doc.source, *e, false);
  }
  if (const Entry* e = find_key(entries, "beta")) {
    cfg.beta = parse_expression(doc.source, *e, false);
  }
}

void read_timescale(const IniDocument& doc, RunConfig& cfg) {
  const auto* entries = find_section(doc, "timescale");
  if (entries == nullptr) fail(doc.source, 0, "missing section [timescale]");
  SectionReader reader(doc.source, "timescale",
                       {"interval", "point", "resolution", "horizon"},
                       {"interval", "point"});
  std::optional<double> horizon;
  double largest = 0.0;
  for (const auto& e : *entries) {
    reader.check(e);
    if (e.key == "interval") {
      const auto words = split_words(e.value);
      if (words.size() != 2) {
        fail(doc.source, e.line, "interval expects two numbers 'a b'");
      }
      const double a = parse_number(doc.source, e, words[0]);
      const double b = parse_number(doc.source, e, words[1]);
      cfg.timescale.pieces.emplace_back(Interval{a, b});
      largest = std::max(largest, b);
    } else if (e.key == "point") {
      const auto words = split_words(e.value);
      if (words.size() != 1) fail(doc.source, e.line, "point expects one number");
      const double p = parse_number(doc.source, e, words[0]);
      cfg.timescale.pieces.emplace_back(Point{p});
      largest = std::max(largest, p);
    } else if (e.key == "resolution") {
      cfg.resolution = parse_number(doc.source, e);
    } else if (e.key == "horizon") {
      horizon = parse_number(doc.source, e);
    }
  }
  if (cfg.timescale.pieces.empty()) {
    fail(doc.source, 0, "[timescale] needs at least one 'interval' or 'point'");
  }
  cfg.timescale.horizon = horizon.value_or(largest);
  try {
    cfg.timescale.validate();
  } catch (const ValidationError& err) {
    fail(doc.source, 0, std::string("[timescale]: ") + err.what());
  }
}

void read_solver(const IniDocument& doc, RunConfig& cfg) {
  const auto* entries = find_section(doc, "solver");
  if (entries == nullptr) return;
  SectionReader reader(
      doc.source, "solver",
      {"tol_fixpoint", "max_iter", "relaxation", "shooting_tol",
       "shooting_max_bisections", "bracket_pad", "method", "k0", "tol_limit",
       "max_stages", "samples_per_band", "verify_tol", "probes",
       "barrier_epsilon"},
      {});
  for (const auto& e : *entries) {
    reader.check(e);
    const auto& src = doc.source;
    if (e.key == "tol_fixpoint") cfg.solver.tol_fixpoint = parse_number(src, e);
    else if (e.key == "max_iter") cfg.solver.max_iter = parse_int(src, e);
    else if (e.key == "relaxation") cfg.solver.relaxation = parse_number(src, e);
    else if (e.key == "shooting_tol") cfg.solver.shooting_tol = parse_number(src, e);
    else if (e.key == "shooting_max_bisections") cfg.solver.shooting_max_bisections = parse_int(src, e);
    else if (e.key == "bracket_pad") cfg.solver.bracket_pad = parse_number(src, e);
    else if (e.key == "k0") cfg.singular.k0 = parse_number(src, e);
    else if (e.key == "tol_limit") cfg.singular.tol_limit = parse_number(src, e);
    else if (e.key == "max_stages") cfg.singular.max_stages = parse_int(src, e);
    else if (e.key == "samples_per_band") cfg.samples_per_band = parse_int(src, e);
    else if (e.key == "verify_tol") cfg.verify_tol = parse_number(src, e);
    else if (e.key == "probes") cfg.probes = parse_int(src, e);
    else if (e.key == "barrier_epsilon") cfg.singular.barrier_epsilon = parse_number(src, e);
    else if (e.key == "method") {
      if (e.value != "picard" && e.value != "shooting") {
        fail(src, e.line, "method must be 'picard' or 'shooting'");
      }
      cfg.method = e.value;
    }
  }
  try {
    cfg.solver.validate();
    cfg.singular.validate();
  } catch (const ValidationError& err) {
    fail(doc.source, 0, std::string("[solver]: ") + err.what());
  }
  if (cfg.samples_per_band <= 0 || cfg.probes <= 0 || !(cfg.verify_tol >= 0.0)) {
    fail(doc.source, 0,
         "[solver]: samples_per_band and probes must be positive, verify_tol >= 0");
  }
}

void read_output(const IniDocument& doc, RunConfig& cfg) {
  const auto* entries = find_section(doc, "output");
  if (entries == nullptr) return;
  SectionReader reader(doc.source, "output",
                       {"csv_path", "json_path", "precision"}, {});
  for (const auto& e : *entries) {
    reader.check(e);
    if (e.key == "csv_path") cfg.csv_path = e.value;
    else if (e.key == "json_path") cfg.json_path = e.value;
    else if (e.key == "precision") {
      cfg.precision = parse_int(doc.source, e);
      if (cfg.precision < 1 || cfg.precision > 17) {
        fail(doc.source, e.line, "precision must lie in [1, 17]");
      }
    }
  }
}

}  // namespace

IniDocument parse_ini(std::string_view text, const std::string& source) {
  IniDocument doc;
  doc.source = source;
  std::istringstream is{std::string(text)};
  std::string raw;
  int line = 0;
  std::vector<Entry>* current = nullptr;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    // Trailing comment: '#' or ';' after whitespace. Neither character can
    // appear in a value.
    for (std::size_t i = 1; i < s.size(); ++i) {
      if ((s[i] == '#' || s[i] == ';') && (s[i - 1] == ' ' || s[i - 1] == '\t')) {
        s = trim(std::string_view(s).substr(0, i));
        break;
      }
    }
    if (s.front() == '[') {
      if (s.back() != ']') fail(source, line, "malformed section header");
      const std::string name = trim(std::string_view(s).substr(1, s.size() - 2));
      static const std::set<std::string> kSections{"problem", "timescale",
                                                   "solver", "output"};
      if (!kSections.count(name)) {
        fail(source, line, "unknown section [" + name + "]");
      }
      for (const auto& [existing, entries] : doc.sections) {
        if (existing == name) fail(source, line, "duplicate section [" + name + "]");
      }
      doc.sections.emplace_back(name, std::vector<Entry>{});
      current = &doc.sections.back().second;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(source, line, "expected 'key = value'");
    if (current == nullptr) fail(source, line, "key outside of any section");
    Entry e{trim(std::string_view(s).substr(0, eq)),
            trim(std::string_view(s).substr(eq + 1)), line};
    if (e.key.empty()) fail(source, line, "empty key");
    if (e.value.empty()) fail(source, line, "key '" + e.key + "' has no value");
    current->push_back(std::move(e));
  }
  return doc;
}

RunConfig parse_config(std::string_view text, const std::string& source) {
  const IniDocument doc = parse_ini(text, source);
  RunConfig cfg;
  cfg.source = source;
  read_problem(doc, cfg);
  read_timescale(doc, cfg);
  read_solver(doc, cfg);
  read_output(doc, cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

GridTimeScale make_grid(const RunConfig& config) {
  try {
    return build_grid(config.timescale, config.resolution);
  } catch (const ValidationError& err) {
    throw ConfigError(config.source + ": [timescale]: " + err.what(), 0);
  }
}

Rhs make_rhs(const RunConfig& config) {
  const expr::Expression e = config.rhs->parsed;
  Rhs rhs;
  rhs.eval = [e](double t, double x) { return expr::eval(e, t, x); };
  if (config.kind == ProblemKind::kSingular) rhs.domain_floor = 0.0;
  return rhs;
}

GridFunction make_barrier(const ExpressionSetting& setting,
                          const GridTimeScale& grid) {
  return GridFunction::sample(grid, [&](double t) {
    return expr::eval(setting.parsed, t, 0.0);
  });
}

RegularProblem make_regular_problem(const RunConfig& config,
                                    const GridTimeScale& grid) {
  return RegularProblem{make_rhs(config), config.gT, grid};
}

SingularProblem make_singular_problem(const RunConfig& config,
                                      const GridTimeScale& grid) {
  SingularProblem p{make_rhs(config), config.gT, *config.c, *config.delta, grid};
  try {
    p.validate();
  } catch (const ValidationError& err) {
    throw ConfigError(config.source + ": [problem]: " + err.what(), 0);
  }
  return p;
}

}  // namespace tsbvp::cli
