#include "orgsim/landscape.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace orgsim {

std::string_view to_string(PatternKind kind) noexcept {
  switch (kind) {
    case PatternKind::modular: return "modular";
    case PatternKind::non_modular: return "non-modular";
    case PatternKind::custom: return "custom";
  }
  return "unknown";
}

PatternKind parse_pattern_kind(std::string_view text) {
  if (text == "modular") return PatternKind::modular;
  if (text == "non-modular" || text == "non_modular") return PatternKind::non_modular;
  if (text == "custom") return PatternKind::custom;
  throw std::invalid_argument("pattern must be one of {modular, non-modular, custom}, got '" +
                              std::string(text) + "'");
}

InteractionPattern::InteractionPattern(std::size_t n_tasks, std::vector<std::uint8_t> matrix)
    : n_(n_tasks), matrix_(std::move(matrix)), deps_(n_tasks), rdeps_(n_tasks) {
  if (n_ == 0) throw std::invalid_argument("interaction pattern needs at least one task");
  if (matrix_.size() != n_ * n_) {
    throw std::invalid_argument("interaction matrix must be " + std::to_string(n_) + "x" +
                                std::to_string(n_));
  }
  for (std::size_t i = 0; i < n_; ++i) {
    matrix_[i * n_ + i] = 1;
    for (std::size_t j = 0; j < n_; ++j) {
      auto& cell = matrix_[i * n_ + j];
      if (cell > 1) throw std::invalid_argument("interaction matrix entries must be 0 or 1");
      if (cell == 0) continue;
      if (i != j) deps_[i].push_back(j);
      rdeps_[j].push_back(i);
    }
  }
  if (std::ranges::any_of(deps_, [](const auto& d) { return d.size() > kMaxDependencies; })) {
    throw std::invalid_argument("a task may depend on at most " +
                                std::to_string(kMaxDependencies) + " other decisions");
  }
}

bool InteractionPattern::symmetric() const noexcept {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (matrix_[i * n_ + j] != matrix_[j * n_ + i]) return false;
  return true;
}

InteractionPattern modular_pattern(std::size_t n_tasks, std::size_t block) {
  if (block == 0 || n_tasks % block != 0) {
    throw std::invalid_argument("modular pattern: block size " + std::to_string(block) +
                                " does not divide " + std::to_string(n_tasks) + " tasks");
  }
  std::vector<std::uint8_t> m(n_tasks * n_tasks, 0);
  for (std::size_t i = 0; i < n_tasks; ++i)
    for (std::size_t j = 0; j < n_tasks; ++j)
      if (i / block == j / block) m[i * n_tasks + j] = 1;
  return InteractionPattern(n_tasks, std::move(m));
}

InteractionPattern ring_pattern(std::size_t n_tasks) {
  std::vector<std::uint8_t> m(n_tasks * n_tasks, 0);
  for (std::size_t i = 0; i < n_tasks; ++i) {
    m[i * n_tasks + (i + n_tasks - 1) % n_tasks] = 1;
    m[i * n_tasks + (i + 1) % n_tasks] = 1;
  }
  return InteractionPattern(n_tasks, std::move(m));
}

InteractionPattern read_pattern(std::istream& in) {
  std::string line;
  std::size_t n = 0;
  // First non-blank line holds N.
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    std::size_t used = 0;
    try {
      n = std::stoul(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || n == 0 || (ls >> tok)) {
      throw std::invalid_argument("pattern file: first line must be a positive task count");
    }
    break;
  }
  if (n == 0) throw std::invalid_argument("pattern file: missing task count");

  std::vector<std::uint8_t> m;
  m.reserve(n * n);
  std::size_t rows = 0;
  while (rows < n && std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    std::size_t cols = 0;
    while (ls >> tok) {
      if (tok != "0" && tok != "1") {
        throw std::invalid_argument("pattern file: entry '" + tok + "' in row " +
                                    std::to_string(rows + 1) + " is not 0/1");
      }
      m.push_back(tok == "1" ? 1 : 0);
      ++cols;
    }
    if (cols == 0) continue;
    if (cols != n) {
      throw std::invalid_argument("pattern file: row " + std::to_string(rows + 1) + " has " +
                                  std::to_string(cols) + " entries, expected " +
                                  std::to_string(n));
    }
    ++rows;
  }
  if (rows != n) {
    throw std::invalid_argument("pattern file: expected " + std::to_string(n) + " rows, got " +
                                std::to_string(rows));
  }
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      throw std::invalid_argument("pattern file: trailing data after matrix");
    }
  }
  return InteractionPattern(n, std::move(m));
}

InteractionPattern load_pattern_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open pattern file " + path.string());
  return read_pattern(in);
}

void write_pattern(std::ostream& out, const InteractionPattern& pattern) {
  const std::size_t n = pattern.n_tasks();
  out << n << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out << (j ? " " : "") << (pattern.depends(i, j) ? 1 : 0);
    out << '\n';
  }
}

InteractionPattern build_pattern(PatternKind kind, std::size_t n_tasks, std::size_t n_agents,
                                 const std::optional<std::filesystem::path>& source) {
  if (kind == PatternKind::custom) {
    if (!source) throw std::invalid_argument("custom pattern requires a pattern file");
    auto pattern = load_pattern_file(*source);
    if (pattern.n_tasks() != n_tasks) {
      throw std::invalid_argument("pattern file has " + std::to_string(pattern.n_tasks()) +
                                  " tasks, configuration expects " + std::to_string(n_tasks));
    }
    return pattern;
  }
  if (n_agents == 0 || n_tasks % n_agents != 0) {
    throw std::invalid_argument(std::to_string(n_agents) + " agents do not divide " +
                                std::to_string(n_tasks) + " tasks");
  }
  if (kind == PatternKind::modular) return modular_pattern(n_tasks, n_tasks / n_agents);
  return ring_pattern(n_tasks);
}

Landscape::Landscape(InteractionPattern pattern, std::vector<std::vector<double>> tables)
    : pattern_(std::move(pattern)), tables_(std::move(tables)) {
  if (tables_.size() != pattern_.n_tasks()) {
    throw std::invalid_argument("landscape needs one table per task");
  }
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    const std::size_t expected = std::size_t{1} << (1 + pattern_.dependencies(i).size());
    if (tables_[i].size() != expected) {
      throw std::invalid_argument("table " + std::to_string(i) + " has " +
                                  std::to_string(tables_[i].size()) + " entries, expected " +
                                  std::to_string(expected));
    }
    for (double v : tables_[i]) {
      if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("table values must lie in [0,1]");
    }
  }
}

std::size_t Landscape::table_index(const Config& config, std::size_t i) const {
  if (config.size() != n_tasks()) throw std::invalid_argument("configuration length mismatch");
  if (i >= n_tasks()) throw std::out_of_range("task index out of range");
  std::size_t index = config[i] & 1u;
  for (std::size_t j : pattern_.dependencies(i)) index = (index << 1) | (config[j] & 1u);
  return index;
}

double Landscape::contribution(const Config& config, std::size_t i) const {
  return tables_[i][table_index(config, i)];
}

std::vector<double> Landscape::contributions(const Config& config) const {
  std::vector<double> out(n_tasks());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = contribution(config, i);
  return out;
}

double Landscape::performance(const Config& config) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < n_tasks(); ++i) sum += contribution(config, i);
  return sum / static_cast<double>(n_tasks());
}

double Landscape::performance(const Config& config, std::span<const std::size_t> subset) const {
  if (subset.empty()) throw std::invalid_argument("performance over an empty task set");
  double sum = 0.0;
  for (std::size_t i : subset) sum += contribution(config, i);
  return sum / static_cast<double>(subset.size());
}

Landscape generate_landscape(const InteractionPattern& pattern, Rng& rng) {
  std::vector<std::vector<double>> tables(pattern.n_tasks());
  for (std::size_t i = 0; i < tables.size(); ++i) {
    tables[i].resize(std::size_t{1} << (1 + pattern.dependencies(i).size()));
    for (double& v : tables[i]) v = uniform01(rng);
  }
  return Landscape(pattern, std::move(tables));
}

double beta_shape(double rho) {
  if (!(rho > -1.0 && rho < 1.0)) {
    throw std::invalid_argument("rho must lie in the open interval (-1, 1)");
  }
  return 0.5 * (std::sqrt((49.0 + rho) / (1.0 + rho)) - 5.0);
}

ShockSample draw_shock_sample(double a, Rng& rng) {
  ShockSample s;
  s.a = a;
  s.v = uniform01(rng);
  s.w = std::pow(uniform01(rng), 1.0 / a);
  return s;
}

double shocked_value(double f, const ShockSample& sample) noexcept {
  if (sample.v < 0.5) return std::abs(sample.w - f);
  return 1.0 - std::abs(1.0 - sample.w - f);
}

Landscape apply_shock(const Landscape& landscape, double rho, Rng& rng) {
  const double a = beta_shape(rho);
  std::vector<std::vector<double>> tables(landscape.n_tasks());
  for (std::size_t i = 0; i < tables.size(); ++i) {
    auto src = landscape.table(i);
    tables[i].assign(src.begin(), src.end());
    for (double& f : tables[i]) f = shocked_value(f, draw_shock_sample(a, rng));
  }
  return Landscape(landscape.pattern(), std::move(tables));
}

GlobalOptimum global_max(const Landscape& landscape) {
  const std::size_t n = landscape.n_tasks();
  if (n > kMaxExhaustiveTasks) {
    throw std::invalid_argument("exhaustive optimum limited to " +
                                std::to_string(kMaxExhaustiveTasks) + " tasks");
  }
  const auto& pattern = landscape.pattern();
  Config config(n, 0);
  std::vector<double> contrib = landscape.contributions(config);

  auto exact_sum = [&] {
    double s = 0.0;
    for (double c : contrib) s += c;
    return s;
  };

  // Gray-code walk: each step flips one bit, so only that bit's dependents
  // change. The running sum screens candidates; exact_sum decides, matching
  // Landscape::performance bit for bit.
  constexpr double kScreen = 1e-9;
  double running = exact_sum();
  GlobalOptimum best{running / static_cast<double>(n), config};
  double best_sum = running;

  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(k));
    config[bit] ^= 1u;
    for (std::size_t i : pattern.dependents(bit)) {
      running -= contrib[i];
      contrib[i] = landscape.contribution(config, i);
      running += contrib[i];
    }
    if ((k & 1023u) == 0) running = exact_sum();
    if (running >= best_sum - kScreen) {
      const double s = exact_sum();
      if (s > best_sum) {
        best_sum = s;
        best.config = config;
      }
    }
  }
  best.value = best_sum / static_cast<double>(n);
  return best;
}

}  // namespace orgsim
