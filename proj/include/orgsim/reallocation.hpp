#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "orgsim/landscape.hpp"
#include "orgsim/organization.hpp"
#include "orgsim/random.hpp"

namespace orgsim {

/// Standard deviation of the signal noise (variance 0.01).
inline constexpr double kSignalNoiseSd = 0.1;

struct Offer {
  std::size_t agent = 0;
  std::size_t task = 0;
};

struct Signal {
  std::size_t agent = 0;
  std::size_t task = 0;
  double value = 0.0;
  double epsilon = 0.0;
  bool retention = false;  // sent by the task's current owner
};

struct OfferBoard {
  std::vector<Offer> offers;
  std::vector<Signal> signals;
};

struct Transfer {
  std::size_t task = 0;
  std::size_t from = 0;
  std::size_t to = 0;
};

struct RoundResult {
  Allocation allocation;
  OfferBoard board;
  std::vector<Transfer> transfers;
};

/// Utility change for agent m if task i (owned by m) moved to the residual.
double drop_gain(const Landscape& landscape, const Allocation& allocation, std::size_t agent,
                 std::size_t task, const Config& config, double lambda);

/// Sum of beliefs eta^{i j} over j in `area`, j != i.
double coupling_score(const BeliefState& beliefs, std::span<const std::size_t> area,
                      std::size_t task);

/// Utility change for agent m if it took over task i, plus the noise draw.
/// Exactly `epsilon` when i already belongs to m.
double acquire_gain(const Landscape& landscape, const Allocation& allocation, std::size_t agent,
                    std::size_t task, const Config& config, double lambda, double epsilon);

double signal_for_task(double gamma, double gain, double coupling) noexcept;

/// The own task agent m puts on offer, or nothing when it owns a single task.
/// Minimizes gamma * (1 - drop_gain) + (1 - gamma) * coupling_score; exact ties
/// are broken uniformly at random.
std::optional<std::size_t> select_offer(const Landscape& landscape, const OrgState& state,
                                        std::size_t agent, double gamma, double lambda, Rng& rng);

double draw_signal_noise(Rng& rng);

/// Step 1: one offer per agent holding two or more tasks, in agent order.
OfferBoard post_offers(const Landscape& landscape, const OrgState& state, double gamma,
                       double lambda, Rng& rng);

/// Step 2: for each offer, the owner's retention signal and one signal from
/// every other agent with free resources (1 <= |area| < capacity). Each signal
/// draws its own epsilon, in offer order then agent order.
void post_signals(OfferBoard& board, const Landscape& landscape, const OrgState& state,
                  double gamma, double lambda, std::size_t capacity, Rng& rng);

/// Steps 3-4: offered tasks are settled in descending order of their best
/// signal. A task goes to its highest signaller that still has room; it stays
/// when the owner's retention signal ranks first or nobody has room.
RoundResult resolve_offers(OfferBoard board, const Allocation& allocation, std::size_t capacity,
                           Rng& rng);

/// Full bottom-up round on the current configuration. Throws std::logic_error
/// when an agent enters the round owning 0 or more than `capacity` tasks.
RoundResult reallocation_round(const Landscape& landscape, const OrgState& state, double gamma,
                               double lambda, std::size_t capacity, Rng& rng);

}  // namespace orgsim
