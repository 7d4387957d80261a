#include "orgsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <set>

#include "orgsim/format.hpp"
#include "orgsim/sweep.hpp"

namespace orgsim {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = value.find(',', start);
    out.push_back(trim(std::string_view(value).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(key + ": '" + text + "' is not a valid number");
  }
  return value;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  return parse_number<std::size_t>(key, text);
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "on" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "off" || text == "no" || text == "0") return false;
  throw ConfigError(key + ": '" + text + "' is not a boolean");
}

std::vector<double> parse_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_number<double>(key, item));
  return out;
}

void check_domain(const std::string& key, const std::vector<double>& values, double lo,
                  double hi, bool lo_open, bool hi_open, const std::string& domain) {
  for (double v : values) {
    const bool below = lo_open ? !(v > lo) : !(v >= lo);
    const bool above = hi_open ? !(v < hi) : !(v <= hi);
    if (below || above) {
      throw ConfigError(key + " = " + format_roundtrip(v) + " is outside " + domain);
    }
  }
}

const std::set<std::string> kSectionKeys = {
    "capacity", "realloc_interval", "shock_period", "horizon",
    "belief_update", "search", "realloc_position", "shock", "initial_allocation", "residual_view"};

// Keys valid both globally and inside a section.
void apply_scenario_key(ScenarioConfig& c, const std::string& key, const std::string& value) {
  try {
    if (key == "capacity") c.capacity = parse_count(key, value);
    else if (key == "realloc_interval") c.realloc_interval = parse_count(key, value);
    else if (key == "shock_period") c.shock_period = parse_count(key, value);
    else if (key == "horizon") c.horizon = parse_count(key, value);
    else if (key == "belief_update") c.switches.belief_update = parse_belief_update(value);
    else if (key == "search") c.switches.search = parse_search_mode(value);
    else if (key == "realloc_position") c.switches.realloc_position = parse_realloc_position(value);
    else if (key == "shock") c.switches.shock = parse_bool(key, value);
    else if (key == "residual_view") c.switches.residual_view = parse_residual_view(value);
    else if (key == "initial_allocation")
      c.switches.initial_allocation = parse_initial_allocation(value);
    else throw ConfigError("unknown key '" + key + "'");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

void apply_global_key(FileConfig& fc, const std::string& key, const std::string& value) {
  auto& g = fc.grid;
  auto& base = g.base;
  if (kSectionKeys.contains(key)) {
    apply_scenario_key(base, key, value);
  } else if (key == "seed") {
    base.master_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "runs") {
    base.runs = parse_count(key, value);
  } else if (key == "workers") {
    fc.workers = parse_count(key, value);
  } else if (key == "out") {
    fc.out = value;
  } else if (key == "t_test") {
    if (value != "student" && value != "welch") {
      throw ConfigError("t_test must be one of {student, welch}");
    }
    fc.welch = value == "welch";
  } else if (key == "n_tasks") {
    base.n_tasks = parse_count(key, value);
  } else if (key == "n_agents") {
    base.n_agents = parse_count(key, value);
  } else if (key == "pattern_file") {
    base.pattern_file = value;
  } else if (key == "rho") {
    g.rhos = parse_doubles(key, value);
    check_domain(key, g.rhos, -1.0, 1.0, true, true, "(-1, 1) (grid values {-0.5, 0.5})");
  } else if (key == "gamma") {
    g.gammas = parse_doubles(key, value);
    check_domain(key, g.gammas, 0.0, 1.0, false, false, "[0, 1] (grid values {0, 1})");
  } else if (key == "lambda") {
    g.lambdas = parse_doubles(key, value);
    check_domain(key, g.lambdas, 0.0, 1.0, true, false, "(0, 1] (grid values {0.33, 1})");
  } else if (key == "pattern") {
    g.patterns.clear();
    for (const auto& item : split_list(value)) {
      try {
        g.patterns.push_back(parse_pattern_kind(item));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  } else if (key == "modes") {
    g.modes.clear();
    for (const auto& item : split_list(value)) {
      try {
        g.modes.push_back(parse_mode(item));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

}  // namespace

FileConfig parse_config_text(std::istream& in) {
  FileConfig fc;
  std::string raw;
  std::size_t line_no = 0;
  ScenarioOverride* section = nullptr;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    // trailing comment: '#' or ';' after whitespace
    for (std::size_t k = 1; k < line.size(); ++k) {
      if ((line[k] == '#' || line[k] == ';') && (line[k - 1] == ' ' || line[k - 1] == '\t')) {
        line = trim(std::string_view(line).substr(0, k));
        break;
      }
    }
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError(where + "malformed section header '" + line + "'");
      }
      fc.sections.push_back({trim(std::string_view(line).substr(1, line.size() - 2)), {}});
      section = &fc.sections.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key");
    try {
      if (section) {
        if (!kSectionKeys.contains(key)) {
          throw ConfigError("key '" + key + "' is not allowed inside a scenario section");
        }
        ScenarioConfig probe;
        apply_scenario_key(probe, key, value);
        section->values.emplace_back(key, value);
      } else {
        apply_global_key(fc, key, value);
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return fc;
}

ResolvedConfig resolve_config(FileConfig file, const FlagOverrides& flags) {
  ResolvedConfig rc;
  rc.grid = std::move(file.grid);
  if (flags.seed) rc.grid.base.master_seed = *flags.seed;
  if (flags.runs) rc.grid.base.runs = *flags.runs;
  rc.sections = std::move(file.sections);
  rc.welch = file.welch;
  rc.filters = flags.filters;

  rc.workers = flags.workers ? *flags.workers
                             : file.workers ? *file.workers : default_worker_count();
  if (rc.workers == 0) throw ConfigError("workers must be at least 1");

  if (flags.out) {
    rc.out_dir = *flags.out;
  } else if (file.out) {
    rc.out_dir = *file.out;
  } else if (const char* env = std::getenv("ORGSIM_OUT"); env && *env) {
    rc.out_dir = env;
  } else {
    rc.out_dir = "results";
  }

  std::vector<ScenarioConfig> grid;
  try {
    grid = build_grid(rc.grid);
    for (const auto& section : rc.sections) {
      bool matched = false;
      for (auto& c : grid) {
        if (c.label.find(section.selector) == std::string::npos) continue;
        matched = true;
        for (const auto& [key, value] : section.values) apply_scenario_key(c, key, value);
        c.validate();
      }
      if (!matched) throw ConfigError("section [" + section.selector + "] matches no scenario");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  for (auto& c : grid) {
    if (!rc.filters.empty() &&
        std::ranges::none_of(rc.filters, [&](const std::string& f) {
          return c.label.find(f) != std::string::npos;
        })) {
      continue;
    }
    rc.scenarios.push_back(std::move(c));
  }
  if (rc.scenarios.empty()) throw ConfigError("no scenario matches the given filters");
  return rc;
}

ResolvedConfig parse_config(const FlagOverrides& flags) {
  FileConfig file;
  if (flags.config) {
    std::ifstream in(*flags.config);
    if (!in) throw ConfigError("cannot read config file " + flags.config->string());
    file = parse_config_text(in);
  }
  return resolve_config(std::move(file), flags);
}

}  // namespace orgsim
