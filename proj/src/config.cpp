#include "pint/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "pint/errors.hpp"
#include "pint/format.hpp"
#include "pint/tableau.hpp"

namespace pint {

namespace {

template <class E, std::size_t N>
E lookup(const std::pair<const char*, E> (&table)[N], const std::string& text, int line,
         const std::string& field) {
  for (const auto& [name, value] : table) {
    if (text == name) return value;
  }
  std::string allowed;
  for (const auto& [name, value] : table) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
  throw ConfigError("'" + text + "' is not one of " + allowed, line, field);
}

template <class E, std::size_t N>
const char* name_of(const std::pair<const char*, E> (&table)[N], E value) {
  for (const auto& [name, v] : table) {
    if (v == value) return name;
  }
  return "?";
}

const std::pair<const char*, Preset> kPresets[] = {
    {"ex1a", Preset::Ex1a}, {"ex1b", Preset::Ex1b}, {"ex2", Preset::Ex2}, {"custom", Preset::Custom}};
const std::pair<const char*, ProblemKind> kProblems[] = {{"linear", ProblemKind::Linear},
                                                         {"allen-cahn", ProblemKind::AllenCahn}};
const std::pair<const char*, InitialData> kInitial[] = {
    {"smooth-compatible", InitialData::SmoothCompatible},
    {"smooth-verbatim", InitialData::SmoothVerbatim},
    {"step", InitialData::Step},
    {"signed-step", InitialData::SignedStep},
    {"cosine", InitialData::Cosine}};
const std::pair<const char*, Forcing> kForcing[] = {{"none", Forcing::None},
                                                    {"cos-t-sin-x", Forcing::CosTSinX}};
const std::pair<const char*, Boundary> kBoundary[] = {{"dirichlet", Boundary::Dirichlet},
                                                      {"neumann", Boundary::Neumann}};
const std::pair<const char*, StopRule> kStop[] = {{"fixed", StopRule::FixedIterations},
                                                  {"tolerance", StopRule::Tolerance}};
const std::pair<const char*, InitialGuess> kGuess[] = {{"coarse-sweep", InitialGuess::CoarseSweep},
                                                       {"constant-u0", InitialGuess::ConstantU0}};
const std::pair<const char*, bool> kBool[] = {{"true", true}, {"false", false}};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_name(const std::string& name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

double real_value(const std::string& text, int line, const std::string& field) {
  double x = 0.0;
  if (!parse_double(text, x) || !std::isfinite(x)) {
    throw ConfigError("'" + text + "' is not a finite real number", line, field);
  }
  return x;
}

int int_value(const std::string& text, int line, const std::string& field) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size() || v < -1000000000L || v > 1000000000L) {
    throw ConfigError("'" + text + "' is not an integer", line, field);
  }
  return static_cast<int>(v);
}

void check(const ExperimentConfig& c, int line) {
  auto fail = [line](const std::string& field, const std::string& msg) {
    throw ConfigError(msg, line, field);
  };
  if (!valid_name(c.name)) fail("name", "run name must be non-empty and use only [A-Za-z0-9._-]");
  const auto& names = builtin_names();
  if (std::find(names.begin(), names.end(), c.scheme) == names.end()) {
    fail("scheme", "unknown scheme '" + c.scheme + "'");
  }
  if (c.M < 3) fail("M", "need at least 3 intervals");
  if (!(c.dt > 0.0)) fail("dt_fine", "must be positive");
  if (!(c.T > 0.0)) fail("T", "must be positive");
  if (c.J < 1) fail("J", "must be at least 1");
  if (c.K_max < 1) fail("K_max", "must be at least 1");
  if (c.threads < 1) fail("threads", "must be at least 1");
  if (!(c.tolerance > 0.0)) fail("tolerance", "must be positive");
  if (!(c.epsilon > 0.0)) fail("epsilon", "must be positive");
  if (c.output.empty()) fail("output", "must not be empty");

  const double coarse = c.J * c.dt;
  const double n = std::round(c.T / coarse);
  if (n < 1.0 || std::abs(n * coarse - c.T) > 1e-9 * c.T) {
    fail("T", "T = " + format_double(c.T) + " is not a whole number of coarse steps J*dt_fine = " +
                  format_double(coarse));
  }

  if (c.problem == ProblemKind::AllenCahn) {
    if (c.bc != Boundary::Neumann) fail("bc", "allen-cahn requires neumann boundary conditions");
    if (c.forcing != Forcing::None) fail("forcing", "allen-cahn takes no forcing");
  }
  switch (c.preset) {
    case Preset::Ex2:
      if (c.problem != ProblemKind::AllenCahn) fail("problem", "preset ex2 requires allen-cahn");
      break;
    case Preset::Ex1a:
    case Preset::Ex1b:
      if (c.problem != ProblemKind::Linear) fail("problem", "preset requires the linear problem");
      if (c.bc != Boundary::Dirichlet) fail("bc", "preset requires dirichlet boundary conditions");
      break;
    case Preset::Custom:
      break;
  }
}

}  // namespace

const char* to_string(Preset p) noexcept { return name_of(kPresets, p); }
const char* to_string(ProblemKind k) noexcept { return name_of(kProblems, k); }
const char* to_string(InitialData d) noexcept { return name_of(kInitial, d); }
const char* to_string(Forcing f) noexcept { return name_of(kForcing, f); }

Preset parse_preset(const std::string& name) { return lookup(kPresets, name, 0, "preset"); }

int ExperimentConfig::coarse_intervals() const {
  return static_cast<int>(std::lround(T / (J * dt)));
}

void ExperimentConfig::validate() const { check(*this, 0); }

ExperimentConfig preset_base(Preset preset) {
  ExperimentConfig c;
  c.preset = preset;
  if (preset != Preset::Custom) c.initial_guess = InitialGuess::ConstantU0;
  switch (preset) {
    case Preset::Ex1a:
      c.name = "ex1a";
      c.M = 1000;
      c.u0 = InitialData::SmoothCompatible;
      c.J = 10;
      c.dt = 1.0 / 3000.0;
      c.K_max = 10;
      break;
    case Preset::Ex1b:
      c.name = "ex1b";
      c.M = 1000;
      c.u0 = InitialData::Step;
      c.forcing = Forcing::CosTSinX;
      break;
    case Preset::Ex2:
      c.name = "ex2";
      c.M = 1000;
      c.problem = ProblemKind::AllenCahn;
      c.bc = Boundary::Neumann;
      c.u0 = InitialData::SignedStep;
      c.T = 0.1;
      c.dt = 1.0 / 600.0;
      break;
    case Preset::Custom:
      break;
  }
  return c;
}

std::vector<ExperimentConfig> parse_config(std::istream& in) {
  std::vector<ExperimentConfig> runs;
  std::vector<int> header_lines;
  std::set<std::string> seen_keys;
  std::set<std::string> seen_names;
  std::string raw;
  int line = 0;

  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text[0] == '#') continue;

    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("unterminated section header", line);
      const std::string name = trim(text.substr(1, text.size() - 2));
      if (!valid_name(name)) {
        throw ConfigError("section name must be non-empty and use only [A-Za-z0-9._-]", line, "name");
      }
      if (!seen_names.insert(name).second) throw ConfigError("duplicate run '" + name + "'", line, "name");
      runs.emplace_back();
      runs.back().name = name;
      header_lines.push_back(line);
      seen_keys.clear();
      continue;
    }

    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (runs.empty()) throw ConfigError("key outside of a [run] section", line, key);
    if (!seen_keys.insert(key).second) throw ConfigError("duplicate key", line, key);
    ExperimentConfig& c = runs.back();

    if (key == "preset") {
      if (seen_keys.size() != 1) throw ConfigError("preset must be the first key of a section", line, key);
      const std::string name = c.name;
      c = preset_base(lookup(kPresets, value, line, key));
      c.name = name;
    } else if (key == "problem") {
      c.problem = lookup(kProblems, value, line, key);
    } else if (key == "scheme") {
      c.scheme = value;
    } else if (key == "M") {
      c.M = int_value(value, line, key);
    } else if (key == "bc") {
      c.bc = lookup(kBoundary, value, line, key);
    } else if (key == "lumped_mass") {
      c.lumped_mass = lookup(kBool, value, line, key);
    } else if (key == "u0") {
      c.u0 = lookup(kInitial, value, line, key);
    } else if (key == "forcing") {
      c.forcing = lookup(kForcing, value, line, key);
    } else if (key == "epsilon") {
      c.epsilon = real_value(value, line, key);
    } else if (key == "T") {
      c.T = real_value(value, line, key);
    } else if (key == "dt_fine") {
      c.dt = real_value(value, line, key);
    } else if (key == "J") {
      c.J = int_value(value, line, key);
    } else if (key == "K_max") {
      c.K_max = int_value(value, line, key);
    } else if (key == "stop") {
      c.stop = lookup(kStop, value, line, key);
    } else if (key == "tolerance") {
      c.tolerance = real_value(value, line, key);
    } else if (key == "initial_guess") {
      c.initial_guess = lookup(kGuess, value, line, key);
    } else if (key == "threads") {
      c.threads = int_value(value, line, key);
    } else if (key == "output") {
      c.output = value;
    } else {
      throw ConfigError("unknown key", line, key);
    }
  }

  if (runs.empty()) throw ConfigError("no [run] sections");
  for (std::size_t i = 0; i < runs.size(); ++i) check(runs[i], header_lines[i]);
  return runs;
}

std::vector<ExperimentConfig> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void emit_config(std::ostream& out, const std::vector<ExperimentConfig>& runs) {
  out << "# pint run configuration, format 1\n";
  for (const auto& c : runs) {
    out << '\n' << '[' << c.name << "]\n";
    out << "preset = " << to_string(c.preset) << '\n';
    out << "problem = " << to_string(c.problem) << '\n';
    out << "scheme = " << c.scheme << '\n';
    out << "M = " << c.M << '\n';
    out << "bc = " << (c.bc == Boundary::Dirichlet ? "dirichlet" : "neumann") << '\n';
    out << "lumped_mass = " << (c.lumped_mass ? "true" : "false") << '\n';
    out << "u0 = " << to_string(c.u0) << '\n';
    out << "forcing = " << to_string(c.forcing) << '\n';
    out << "epsilon = " << format_double(c.epsilon) << '\n';
    out << "T = " << format_double(c.T) << '\n';
    out << "dt_fine = " << format_double(c.dt) << '\n';
    out << "J = " << c.J << '\n';
    out << "K_max = " << c.K_max << '\n';
    out << "stop = " << to_string(c.stop) << '\n';
    out << "tolerance = " << format_double(c.tolerance) << '\n';
    out << "initial_guess = " << to_string(c.initial_guess) << '\n';
    out << "threads = " << c.threads << '\n';
    out << "output = " << c.output << '\n';
  }
}

}  // namespace pint
