#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orgsim/landscape.hpp"
#include "orgsim/organization.hpp"
#include "orgsim/random.hpp"

namespace orgsim {

enum class Mode { top_down, bottom_up };
enum class ReallocPosition { before_search, after_search };
enum class InitialAllocation { sequential, random };

std::string_view to_string(Mode mode) noexcept;
std::string_view to_string(ReallocPosition position) noexcept;
std::string_view to_string(InitialAllocation init) noexcept;
Mode parse_mode(std::string_view text);
InitialAllocation parse_initial_allocation(std::string_view text);
ReallocPosition parse_realloc_position(std::string_view text);

inline constexpr std::uint64_t kDefaultSeed = 20240501;

struct Switches {
  BeliefUpdate belief_update = BeliefUpdate::per_bit;
  SearchMode search = SearchMode::single_flip;
  ResidualView residual_view = ResidualView::recomputed;
  ReallocPosition realloc_position = ReallocPosition::before_search;
  bool shock = true;
  /// Starting allocation of bottom-up runs; top-down always starts sequential.
  InitialAllocation initial_allocation = InitialAllocation::sequential;

  friend bool operator==(const Switches&, const Switches&) = default;
};

/// One cell of the experiment grid.
struct ScenarioConfig {
  std::string label;
  Mode mode = Mode::top_down;
  double rho = 0.5;
  PatternKind pattern = PatternKind::modular;
  std::optional<std::filesystem::path> pattern_file;
  double gamma = 0.0;   // bottom-up only
  double lambda = 1.0;
  std::size_t n_tasks = 15;
  std::size_t n_agents = 5;
  std::size_t capacity = 7;
  std::size_t realloc_interval = 20;
  std::size_t shock_period = 50;
  std::size_t horizon = 200;
  std::size_t runs = 600;
  std::uint64_t master_seed = kDefaultSeed;
  Switches switches;

  /// Throws std::invalid_argument naming the violated domain.
  void validate() const;
  InteractionPattern interaction_pattern() const;
  /// Stream id derived from the label.
  std::uint64_t scenario_id() const noexcept { return stable_hash(label); }
};

struct TraceEvent {
  enum class Kind { offer, transfer, shock };
  std::size_t t = 0;
  Kind kind = Kind::offer;
  std::size_t agent = 0;  // offering agent / previous owner
  std::size_t task = 0;
  std::size_t to = 0;     // transfers only
};

/// Per-period record of one run, t = 0..horizon.
struct RunTrace {
  std::uint64_t seed = 0;
  std::vector<double> raw;
  std::vector<double> pmax;
  std::vector<double> normalized;
  std::vector<TraceEvent> events;
  std::vector<std::vector<std::size_t>> owners;  // only with TraceOptions::allocations
};

struct TraceOptions {
  bool events = false;
  bool allocations = false;
};

/// One run, a deterministic function of (config, run_index). Uses `pattern`
/// instead of rebuilding it from the config.
RunTrace simulate_run(const ScenarioConfig& config, std::size_t run_index,
                      const InteractionPattern& pattern, TraceOptions options = {});
RunTrace simulate_run(const ScenarioConfig& config, std::size_t run_index,
                      TraceOptions options = {});

/// Stream of run `run_index` within `config`.
Rng run_stream(const ScenarioConfig& config, std::size_t run_index);

/// CSV with header `t,raw,pmax,normalized`.
void write_trace_csv(std::ostream& out, const RunTrace& trace);

}  // namespace orgsim
