#include "orgsim/reallocation.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

namespace orgsim {
namespace {

TaskSet with(TaskSet set, std::size_t x) {
  set.insert(std::lower_bound(set.begin(), set.end(), x), x);
  return set;
}

TaskSet without(TaskSet set, std::size_t x) {
  set.erase(std::lower_bound(set.begin(), set.end(), x));
  return set;
}

}  // namespace

double drop_gain(const Landscape& landscape, const Allocation& allocation, std::size_t agent,
                 std::size_t task, const Config& config, double lambda) {
  if (allocation.owner(task) != agent) {
    throw std::invalid_argument("drop_gain: task is not owned by the agent");
  }
  const TaskSet own = allocation.area(agent);
  const TaskSet residual = allocation.residual(agent);
  return utility(landscape, without(own, task), with(residual, task), config, lambda) -
         utility(landscape, own, residual, config, lambda);
}

double coupling_score(const BeliefState& beliefs, std::span<const std::size_t> area,
                      std::size_t task) {
  double sum = 0.0;
  for (std::size_t j : area)
    if (j != task) sum += beliefs.mean(task, j);
  return sum;
}

double acquire_gain(const Landscape& landscape, const Allocation& allocation, std::size_t agent,
                    std::size_t task, const Config& config, double lambda, double epsilon) {
  if (allocation.owner(task) == agent) return epsilon;
  const TaskSet own = allocation.area(agent);
  const TaskSet residual = allocation.residual(agent);
  return utility(landscape, with(own, task), without(residual, task), config, lambda) -
         utility(landscape, own, residual, config, lambda) + epsilon;
}

double signal_for_task(double gamma, double gain, double coupling) noexcept {
  return gamma * gain + (1.0 - gamma) * coupling;
}

std::optional<std::size_t> select_offer(const Landscape& landscape, const OrgState& state,
                                        std::size_t agent, double gamma, double lambda, Rng& rng) {
  const TaskSet own = state.allocation.area(agent);
  if (own.size() < 2) return std::nullopt;

  std::vector<std::size_t> best;
  double best_score = 0.0;
  for (std::size_t i : own) {
    const double score =
        gamma * (1.0 - drop_gain(landscape, state.allocation, agent, i, state.current, lambda)) +
        (1.0 - gamma) * coupling_score(state.beliefs.at(agent), own, i);
    if (best.empty() || score < best_score) {
      best.assign(1, i);
      best_score = score;
    } else if (score == best_score) {
      best.push_back(i);
    }
  }
  if (best.size() == 1) return best.front();
  return best[uniform_index(rng, best.size())];
}

double draw_signal_noise(Rng& rng) {
  std::normal_distribution<double> noise(0.0, kSignalNoiseSd);
  return noise(rng);
}

OfferBoard post_offers(const Landscape& landscape, const OrgState& state, double gamma,
                       double lambda, Rng& rng) {
  OfferBoard board;
  for (std::size_t m = 0; m < state.allocation.n_agents(); ++m) {
    if (auto task = select_offer(landscape, state, m, gamma, lambda, rng)) {
      board.offers.push_back({m, *task});
    }
  }
  return board;
}

void post_signals(OfferBoard& board, const Landscape& landscape, const OrgState& state,
                  double gamma, double lambda, std::size_t capacity, Rng& rng) {
  const auto& alloc = state.allocation;
  std::vector<TaskSet> areas(alloc.n_agents());
  for (std::size_t m = 0; m < areas.size(); ++m) areas[m] = alloc.area(m);

  for (const Offer& offer : board.offers) {
    for (std::size_t m = 0; m < areas.size(); ++m) {
      const bool owner = m == offer.agent;
      const bool free = !areas[m].empty() && areas[m].size() < capacity;
      if (!owner && !free) continue;
      const double eps = draw_signal_noise(rng);
      const double gain =
          acquire_gain(landscape, alloc, m, offer.task, state.current, lambda, eps);
      const double coupling = coupling_score(state.beliefs.at(m), areas[m], offer.task);
      board.signals.push_back(
          {m, offer.task, signal_for_task(gamma, gain, coupling), eps, owner});
    }
  }
}

RoundResult resolve_offers(OfferBoard board, const Allocation& allocation, std::size_t capacity,
                           Rng& rng) {
  RoundResult result{allocation, std::move(board), {}};
  auto& alloc = result.allocation;

  struct Ranked {
    double value;
    std::uint64_t key;
    std::size_t index;
  };
  auto by_rank = [](const Ranked& a, const Ranked& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.key < b.key;
  };

  const auto& offers = result.board.offers;
  const auto& signals = result.board.signals;

  // Random keys break exact ties uniformly; drawn for every entry so the
  // stream advances identically regardless of the signal values.
  std::vector<std::vector<Ranked>> per_offer(offers.size());
  for (std::size_t s = 0; s < signals.size(); ++s) {
    const std::uint64_t key = rng();
    for (std::size_t o = 0; o < offers.size(); ++o) {
      if (offers[o].task == signals[s].task) {
        per_offer[o].push_back({signals[s].value, key, s});
        break;
      }
    }
  }
  std::vector<Ranked> order;
  for (std::size_t o = 0; o < offers.size(); ++o) {
    auto& list = per_offer[o];
    std::sort(list.begin(), list.end(), by_rank);
    const std::uint64_t key = rng();
    order.push_back({list.empty() ? -std::numeric_limits<double>::infinity() : list.front().value,
                     key, o});
  }
  std::sort(order.begin(), order.end(), by_rank);

  std::vector<std::size_t> sizes(alloc.n_agents(), 0);
  for (std::size_t a : alloc.owners()) ++sizes[a];

  for (const Ranked& entry : order) {
    const Offer& offer = offers[entry.index];
    for (const Ranked& cand : per_offer[entry.index]) {
      const std::size_t m = signals[cand.index].agent;
      if (m == offer.agent) break;
      if (sizes[m] >= capacity) continue;
      ++sizes[m];
      --sizes[offer.agent];
      alloc.assign(offer.task, m);
      result.transfers.push_back({offer.task, offer.agent, m});
      break;
    }
  }
  return result;
}

RoundResult reallocation_round(const Landscape& landscape, const OrgState& state, double gamma,
                               double lambda, std::size_t capacity, Rng& rng) {
  state.allocation.check_sizes(1, capacity);
  OfferBoard board = post_offers(landscape, state, gamma, lambda, rng);
  post_signals(board, landscape, state, gamma, lambda, capacity, rng);
  return resolve_offers(std::move(board), state.allocation, capacity, rng);
}

}  // namespace orgsim
