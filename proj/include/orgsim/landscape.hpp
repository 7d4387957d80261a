#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orgsim/random.hpp"

namespace orgsim {

/// One binary decision per task; entries are 0 or 1.
using Config = std::vector<std::uint8_t>;

// Tables hold 2^(1+K) entries; this bounds K.
inline constexpr std::size_t kMaxDependencies = 20;

enum class PatternKind { modular, non_modular, custom };

std::string_view to_string(PatternKind kind) noexcept;
PatternKind parse_pattern_kind(std::string_view text);

/// Which decisions feed each performance contribution. Entry (i, j) is true
/// iff the contribution of task i depends on decision j. The diagonal is
/// always true.
class InteractionPattern {
 public:
  InteractionPattern() = default;
  /// `matrix` is row-major n*n with 0/1 entries; the diagonal is forced to 1.
  InteractionPattern(std::size_t n_tasks, std::vector<std::uint8_t> matrix);

  std::size_t n_tasks() const noexcept { return n_; }
  bool depends(std::size_t i, std::size_t j) const { return matrix_.at(i * n_ + j) != 0; }

  /// Off-diagonal decisions task i depends on, ascending.
  std::span<const std::size_t> dependencies(std::size_t i) const { return deps_.at(i); }
  /// Tasks whose contribution depends on decision j (including j itself).
  std::span<const std::size_t> dependents(std::size_t j) const { return rdeps_.at(j); }

  bool symmetric() const noexcept;
  friend bool operator==(const InteractionPattern&, const InteractionPattern&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> matrix_;
  std::vector<std::vector<std::size_t>> deps_;
  std::vector<std::vector<std::size_t>> rdeps_;
};

/// Aligned diagonal blocks of `block` tasks with full dependence inside each.
InteractionPattern modular_pattern(std::size_t n_tasks, std::size_t block);
/// Symmetric ring: task i depends on i-1 and i+1 (mod n).
InteractionPattern ring_pattern(std::size_t n_tasks);

/// Pattern file: first token N, then N rows of N whitespace-separated 0/1.
InteractionPattern read_pattern(std::istream& in);
InteractionPattern load_pattern_file(const std::filesystem::path& path);
void write_pattern(std::ostream& out, const InteractionPattern& pattern);

/// Built-in kinds need n_agents | n_tasks; custom needs `source`.
InteractionPattern build_pattern(PatternKind kind, std::size_t n_tasks, std::size_t n_agents,
                                 const std::optional<std::filesystem::path>& source = {});

/// Per-task contribution tables over an interaction pattern.
///
/// Table i has 2^(1 + K_i) entries. The entry for a configuration is addressed
/// by reading (d_i, d_{j1}, ..., d_{jK}) as a binary number with the task's own
/// bit most significant and its dependencies in ascending task order.
class Landscape {
 public:
  Landscape(InteractionPattern pattern, std::vector<std::vector<double>> tables);

  const InteractionPattern& pattern() const noexcept { return pattern_; }
  std::size_t n_tasks() const noexcept { return pattern_.n_tasks(); }
  std::span<const double> table(std::size_t i) const { return tables_.at(i); }

  std::size_t table_index(const Config& config, std::size_t i) const;
  double contribution(const Config& config, std::size_t i) const;
  std::vector<double> contributions(const Config& config) const;

  /// Mean contribution over all tasks.
  double performance(const Config& config) const;
  /// Mean contribution over `subset`, which must be nonempty.
  double performance(const Config& config, std::span<const std::size_t> subset) const;

 private:
  InteractionPattern pattern_;
  std::vector<std::vector<double>> tables_;
};

/// Every table entry drawn independently from U(0,1).
Landscape generate_landscape(const InteractionPattern& pattern, Rng& rng);

/// Shape a of the Beta(a, 1) component of a rho-correlated redraw.
double beta_shape(double rho);

struct ShockSample {
  double v = 0.0;
  double w = 0.0;
  double a = 1.0;
};

/// v ~ U(0,1); w ~ Beta(a,1) by inverse CDF, w = u^(1/a).
ShockSample draw_shock_sample(double a, Rng& rng);

/// Correlated replacement for a single contribution value.
double shocked_value(double f, const ShockSample& sample) noexcept;

/// New landscape with every entry replaced by its correlated redraw. Draws
/// (v, w) per entry in task order, then table order.
Landscape apply_shock(const Landscape& landscape, double rho, Rng& rng);

struct GlobalOptimum {
  double value = 0.0;
  Config config;
};

inline constexpr std::size_t kMaxExhaustiveTasks = 25;

/// Exact maximum of performance over all 2^N configurations.
/// The returned value is bit-identical to landscape.performance(config).
GlobalOptimum global_max(const Landscape& landscape);

}  // namespace orgsim
