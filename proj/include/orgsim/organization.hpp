#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "orgsim/landscape.hpp"
#include "orgsim/random.hpp"

namespace orgsim {

/// Sorted list of task indices.
using TaskSet = std::vector<std::size_t>;

/// Partition of tasks among agents. Agents and tasks are 0-based.
class Allocation {
 public:
  Allocation() = default;
  Allocation(std::vector<std::size_t> owner, std::size_t n_agents);

  std::size_t n_tasks() const noexcept { return owner_.size(); }
  std::size_t n_agents() const noexcept { return n_agents_; }
  std::size_t owner(std::size_t task) const { return owner_.at(task); }
  std::span<const std::size_t> owners() const noexcept { return owner_; }

  TaskSet area(std::size_t agent) const;
  TaskSet residual(std::size_t agent) const;
  std::size_t area_size(std::size_t agent) const;

  void assign(std::size_t task, std::size_t agent);

  /// Throws std::logic_error unless every agent owns between lo and hi tasks.
  void check_sizes(std::size_t lo, std::size_t hi) const;

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<std::size_t> owner_;
  std::size_t n_agents_ = 0;
};

/// Agent 0 owns the first N/M tasks, agent 1 the next N/M, and so on.
Allocation top_down_allocation(std::size_t n_tasks, std::size_t n_agents);

/// lambda * P(own) + (1 - lambda) * P(residual). Both sets must be nonempty.
double utility(const Landscape& landscape, std::span<const std::size_t> own,
               std::span<const std::size_t> residual, const Config& config, double lambda);
double utility(const Landscape& landscape, const Allocation& allocation, std::size_t agent,
               const Config& config, double lambda);

enum class BeliefUpdate { per_bit, literal };
enum class SearchMode { single_flip, best_of_neighborhood };

/// How the residual term of the search utility is evaluated.
/// recomputed: residual contributions under the candidate own bits.
/// observed: residual performance as observed in the previous period, so it
/// is the same for every candidate.
enum class ResidualView { recomputed, observed };

std::string_view to_string(BeliefUpdate mode) noexcept;
std::string_view to_string(SearchMode mode) noexcept;
BeliefUpdate parse_belief_update(std::string_view text);
SearchMode parse_search_mode(std::string_view text);
std::string_view to_string(ResidualView view) noexcept;
ResidualView parse_residual_view(std::string_view text);

/// Beta-count beliefs of one agent about whether decision i moves contribution j.
class BeliefState {
 public:
  BeliefState() = default;
  explicit BeliefState(std::size_t n_tasks);

  std::size_t n_tasks() const noexcept { return n_; }
  std::uint32_t alpha(std::size_t i, std::size_t j) const { return alpha_.at(i * n_ + j); }
  std::uint32_t beta(std::size_t i, std::size_t j) const { return beta_.at(i * n_ + j); }

  /// alpha / (alpha + beta); i and j must differ.
  double mean(std::size_t i, std::size_t j) const;

  /// One observation: interdependence seen (alpha++) or not (beta++).
  void record(std::size_t i, std::size_t j, bool interdependent);

  /// Test hook for hand-set beliefs.
  void set_counts(std::size_t i, std::size_t j, std::uint32_t alpha, std::uint32_t beta);

  friend bool operator==(const BeliefState&, const BeliefState&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> alpha_;
  std::vector<std::uint32_t> beta_;
};

/// Learning step for one agent. `f_now` / `f_before` are the contributions the
/// agent observed for its own tasks, parallel to `own`.
///
/// Nothing changes when now == before. Otherwise, for each own task j and each
/// i != j: per_bit touches only pairs whose bit i changed; literal touches every
/// pair. A touched pair gets alpha++ when the stored contribution of j differs
/// (exact comparison) and beta++ otherwise.
void update_beliefs(BeliefState& beliefs, std::span<const std::size_t> own, const Config& now,
                    const Config& before, std::span<const double> f_now,
                    std::span<const double> f_before, BeliefUpdate mode = BeliefUpdate::per_bit);

struct OrgState {
  /// Latest implemented configuration (d_{t-1} while period t is being decided).
  Config current;
  /// The configuration implemented one period before `current`.
  Config previous;
  Allocation allocation;
  std::vector<BeliefState> beliefs;
  std::size_t period = 0;
};

/// Fresh state: allocation as given, beliefs at alpha = beta = 1.
OrgState make_org_state(Config initial, Allocation allocation);

/// One agent's decision for the next period. Evaluates the status quo and a
/// Hamming-1 neighbour of its own bits against the residual bits of
/// state.current and keeps the utility argmax; ties keep the status quo.
/// Returns the agent's own bits, parallel to its area.
std::vector<std::uint8_t> agent_search_step(const Landscape& landscape, const OrgState& state,
                                            std::size_t agent, double lambda, Rng& rng,
                                            SearchMode mode = SearchMode::single_flip,
                                            ResidualView view = ResidualView::recomputed);

}  // namespace orgsim
