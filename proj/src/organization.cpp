#include "orgsim/organization.hpp"

#include <stdexcept>
#include <string>

namespace orgsim {

Allocation::Allocation(std::vector<std::size_t> owner, std::size_t n_agents)
    : owner_(std::move(owner)), n_agents_(n_agents) {
  for (std::size_t a : owner_) {
    if (a >= n_agents_) throw std::invalid_argument("task owner out of agent range");
  }
}

TaskSet Allocation::area(std::size_t agent) const {
  TaskSet out;
  for (std::size_t i = 0; i < owner_.size(); ++i)
    if (owner_[i] == agent) out.push_back(i);
  return out;
}

TaskSet Allocation::residual(std::size_t agent) const {
  TaskSet out;
  for (std::size_t i = 0; i < owner_.size(); ++i)
    if (owner_[i] != agent) out.push_back(i);
  return out;
}

std::size_t Allocation::area_size(std::size_t agent) const {
  std::size_t n = 0;
  for (std::size_t a : owner_) n += (a == agent);
  return n;
}

void Allocation::assign(std::size_t task, std::size_t agent) {
  if (agent >= n_agents_) throw std::out_of_range("agent index out of range");
  owner_.at(task) = agent;
}

void Allocation::check_sizes(std::size_t lo, std::size_t hi) const {
  std::vector<std::size_t> counts(n_agents_, 0);
  for (std::size_t a : owner_) ++counts[a];
  for (std::size_t m = 0; m < n_agents_; ++m) {
    if (counts[m] < lo || counts[m] > hi) {
      throw std::logic_error("agent " + std::to_string(m) + " owns " + std::to_string(counts[m]) +
                             " tasks, outside [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
    }
  }
}

Allocation top_down_allocation(std::size_t n_tasks, std::size_t n_agents) {
  if (n_agents == 0 || n_tasks % n_agents != 0) {
    throw std::invalid_argument(std::to_string(n_agents) + " agents do not divide " +
                                std::to_string(n_tasks) + " tasks");
  }
  const std::size_t block = n_tasks / n_agents;
  std::vector<std::size_t> owner(n_tasks);
  for (std::size_t i = 0; i < n_tasks; ++i) owner[i] = i / block;
  return Allocation(std::move(owner), n_agents);
}

double utility(const Landscape& landscape, std::span<const std::size_t> own,
               std::span<const std::size_t> residual, const Config& config, double lambda) {
  if (own.empty()) throw std::invalid_argument("utility: agent owns no tasks");
  if (residual.empty()) throw std::invalid_argument("utility: empty residual area");
  return lambda * landscape.performance(config, own) +
         (1.0 - lambda) * landscape.performance(config, residual);
}

double utility(const Landscape& landscape, const Allocation& allocation, std::size_t agent,
               const Config& config, double lambda) {
  return utility(landscape, allocation.area(agent), allocation.residual(agent), config, lambda);
}

std::string_view to_string(BeliefUpdate mode) noexcept {
  return mode == BeliefUpdate::per_bit ? "per_bit" : "literal";
}

std::string_view to_string(SearchMode mode) noexcept {
  return mode == SearchMode::single_flip ? "single_flip" : "best_of_neighborhood";
}

BeliefUpdate parse_belief_update(std::string_view text) {
  if (text == "per_bit") return BeliefUpdate::per_bit;
  if (text == "literal") return BeliefUpdate::literal;
  throw std::invalid_argument("belief_update must be one of {per_bit, literal}");
}

SearchMode parse_search_mode(std::string_view text) {
  if (text == "single_flip") return SearchMode::single_flip;
  if (text == "best_of_neighborhood") return SearchMode::best_of_neighborhood;
  throw std::invalid_argument("search must be one of {single_flip, best_of_neighborhood}");
}

std::string_view to_string(ResidualView view) noexcept {
  return view == ResidualView::recomputed ? "recomputed" : "observed";
}

ResidualView parse_residual_view(std::string_view text) {
  if (text == "recomputed") return ResidualView::recomputed;
  if (text == "observed") return ResidualView::observed;
  throw std::invalid_argument("residual_view must be one of {recomputed, observed}");
}

BeliefState::BeliefState(std::size_t n_tasks)
    : n_(n_tasks), alpha_(n_tasks * n_tasks, 1), beta_(n_tasks * n_tasks, 1) {}

double BeliefState::mean(std::size_t i, std::size_t j) const {
  if (i == j) throw std::invalid_argument("belief_mean: i and j must differ");
  const double a = alpha(i, j);
  return a / (a + static_cast<double>(beta(i, j)));
}

void BeliefState::record(std::size_t i, std::size_t j, bool interdependent) {
  if (i == j) return;
  if (interdependent)
    ++alpha_.at(i * n_ + j);
  else
    ++beta_.at(i * n_ + j);
}

void BeliefState::set_counts(std::size_t i, std::size_t j, std::uint32_t alpha,
                             std::uint32_t beta) {
  if (alpha == 0 || beta == 0) throw std::invalid_argument("belief counts must be positive");
  alpha_.at(i * n_ + j) = alpha;
  beta_.at(i * n_ + j) = beta;
}

void update_beliefs(BeliefState& beliefs, std::span<const std::size_t> own, const Config& now,
                    const Config& before, std::span<const double> f_now,
                    std::span<const double> f_before, BeliefUpdate mode) {
  if (f_now.size() != own.size() || f_before.size() != own.size()) {
    throw std::invalid_argument("update_beliefs: observations must match the area");
  }
  if (now == before) return;
  const std::size_t n = now.size();
  for (std::size_t k = 0; k < own.size(); ++k) {
    const std::size_t j = own[k];
    const bool moved = f_now[k] != f_before[k];
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      if (mode == BeliefUpdate::per_bit && now[i] == before[i]) continue;
      beliefs.record(i, j, moved);
    }
  }
}

OrgState make_org_state(Config initial, Allocation allocation) {
  OrgState state;
  state.previous = initial;
  state.current = std::move(initial);
  state.beliefs.assign(allocation.n_agents(), BeliefState(state.current.size()));
  state.allocation = std::move(allocation);
  return state;
}

std::vector<std::uint8_t> agent_search_step(const Landscape& landscape, const OrgState& state,
                                            std::size_t agent, double lambda, Rng& rng,
                                            SearchMode mode, ResidualView view) {
  const TaskSet own = state.allocation.area(agent);
  const TaskSet residual = state.allocation.residual(agent);
  if (own.empty()) throw std::invalid_argument("agent_search_step: agent owns no tasks");

  Config probe = state.current;
  const double status_quo = utility(landscape, own, residual, probe, lambda);
  const double residual_seen =
      residual.empty() ? 0.0 : landscape.performance(state.current, residual);
  auto evaluate = [&](const Config& candidate) {
    if (view == ResidualView::recomputed) return utility(landscape, own, residual, candidate, lambda);
    return lambda * landscape.performance(candidate, own) + (1.0 - lambda) * residual_seen;
  };

  std::vector<std::uint8_t> bits(own.size());
  for (std::size_t k = 0; k < own.size(); ++k) bits[k] = state.current[own[k]];

  if (mode == SearchMode::single_flip) {
    const std::size_t k = uniform_index(rng, own.size());
    probe[own[k]] ^= 1u;
    if (evaluate(probe) > status_quo) bits[k] ^= 1u;
    return bits;
  }

  // Best of all Hamming-1 neighbours; first strictly best in area order wins.
  double best = status_quo;
  std::size_t best_k = own.size();
  for (std::size_t k = 0; k < own.size(); ++k) {
    probe[own[k]] ^= 1u;
    const double u = evaluate(probe);
    probe[own[k]] ^= 1u;
    if (u > best) {
      best = u;
      best_k = k;
    }
  }
  if (best_k < own.size()) bits[best_k] ^= 1u;
  return bits;
}

}  // namespace orgsim
