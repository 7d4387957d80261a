#include "orgsim/simulation.hpp"

#include <ostream>
#include <stdexcept>

#include "orgsim/format.hpp"
#include "orgsim/reallocation.hpp"

namespace orgsim {

std::string_view to_string(Mode mode) noexcept {
  return mode == Mode::top_down ? "top-down" : "bottom-up";
}

std::string_view to_string(ReallocPosition position) noexcept {
  return position == ReallocPosition::before_search ? "before_search" : "after_search";
}

std::string_view to_string(InitialAllocation init) noexcept {
  return init == InitialAllocation::sequential ? "sequential" : "random";
}

InitialAllocation parse_initial_allocation(std::string_view text) {
  if (text == "sequential") return InitialAllocation::sequential;
  if (text == "random") return InitialAllocation::random;
  throw std::invalid_argument("initial_allocation must be one of {sequential, random}");
}

Mode parse_mode(std::string_view text) {
  if (text == "top-down" || text == "top_down") return Mode::top_down;
  if (text == "bottom-up" || text == "bottom_up") return Mode::bottom_up;
  throw std::invalid_argument("mode must be one of {top-down, bottom-up}");
}

ReallocPosition parse_realloc_position(std::string_view text) {
  if (text == "before_search") return ReallocPosition::before_search;
  if (text == "after_search") return ReallocPosition::after_search;
  throw std::invalid_argument("realloc_position must be one of {before_search, after_search}");
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (!(rho > -1.0 && rho < 1.0)) fail("rho must lie in (-1, 1)");
  if (!(lambda > 0.0 && lambda <= 1.0)) fail("lambda must lie in (0, 1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) fail("gamma must lie in [0, 1]");
  if (n_agents < 2) fail("n_agents must be at least 2");
  if (n_tasks == 0 || n_tasks % n_agents != 0) fail("n_agents must divide n_tasks");
  if (n_tasks > kMaxExhaustiveTasks) {
    fail("n_tasks must not exceed " + std::to_string(kMaxExhaustiveTasks));
  }
  if (capacity < n_tasks / n_agents || capacity >= n_tasks) {
    fail("capacity must lie in [n_tasks/n_agents, n_tasks)");
  }
  if (realloc_interval == 0) fail("realloc_interval must be positive");
  if (horizon == 0) fail("horizon must be positive");
  if (shock_period >= horizon) fail("shock_period must be below horizon");
  if (runs == 0) fail("runs must be positive");
  if (pattern == PatternKind::custom && !pattern_file) fail("custom pattern needs pattern_file");
}

InteractionPattern ScenarioConfig::interaction_pattern() const {
  return build_pattern(pattern, n_tasks, n_agents, pattern_file);
}

Rng run_stream(const ScenarioConfig& config, std::size_t run_index) {
  return derive_stream(config.master_seed, config.scenario_id(), run_index);
}

RunTrace simulate_run(const ScenarioConfig& config, std::size_t run_index,
                      TraceOptions options) {
  return simulate_run(config, run_index, config.interaction_pattern(), options);
}

RunTrace simulate_run(const ScenarioConfig& config, std::size_t run_index,
                      const InteractionPattern& pattern, TraceOptions options) {
  config.validate();
  if (pattern.n_tasks() != config.n_tasks) {
    throw std::invalid_argument("pattern size does not match n_tasks");
  }
  Rng rng = run_stream(config, run_index);
  const std::size_t n = config.n_tasks;
  const std::size_t m_count = config.n_agents;

  RunTrace trace;
  trace.seed = run_key(config.master_seed, config.scenario_id(), run_index);
  trace.raw.reserve(config.horizon + 1);
  trace.pmax.reserve(config.horizon + 1);
  trace.normalized.reserve(config.horizon + 1);

  Landscape landscape = generate_landscape(pattern, rng);
  Config initial(n);
  for (auto& bit : initial) bit = static_cast<std::uint8_t>(rng() & 1u);
  Allocation allocation = top_down_allocation(n, m_count);
  if (config.mode == Mode::bottom_up &&
      config.switches.initial_allocation == InitialAllocation::random) {
    // Uniform permutation of the sequential owners keeps N/M tasks per agent.
    std::vector<std::size_t> owners(allocation.owners().begin(), allocation.owners().end());
    for (std::size_t i = owners.size(); i > 1; --i) {
      std::swap(owners[i - 1], owners[uniform_index(rng, i)]);
    }
    allocation = Allocation(std::move(owners), m_count);
  }
  OrgState state = make_org_state(std::move(initial), std::move(allocation));
  GlobalOptimum optimum = global_max(landscape);

  std::vector<double> contrib_now = landscape.contributions(state.current);

  auto record = [&] {
    const double raw = landscape.performance(state.current);
    trace.raw.push_back(raw);
    trace.pmax.push_back(optimum.value);
    trace.normalized.push_back(raw / optimum.value);
    if (options.allocations) {
      auto owners = state.allocation.owners();
      trace.owners.emplace_back(owners.begin(), owners.end());
    }
  };

  auto reallocate = [&](std::size_t t) {
    RoundResult round = reallocation_round(landscape, state, config.gamma, config.lambda,
                                           config.capacity, rng);
    if (options.events) {
      for (const Offer& o : round.board.offers)
        trace.events.push_back({t, TraceEvent::Kind::offer, o.agent, o.task, o.agent});
      for (const Transfer& tr : round.transfers)
        trace.events.push_back({t, TraceEvent::Kind::transfer, tr.from, tr.task, tr.to});
    }
    state.allocation = std::move(round.allocation);
  };

  record();

  const bool bottom_up = config.mode == Mode::bottom_up;
  const bool realloc_first =
      config.switches.realloc_position == ReallocPosition::before_search;
  std::vector<TaskSet> areas(m_count);
  std::vector<std::vector<std::uint8_t>> decisions(m_count);

  for (std::size_t t = 1; t <= config.horizon; ++t) {
    const bool realloc_now = bottom_up && t % config.realloc_interval == 0;
    if (realloc_now && realloc_first) reallocate(t);

    if (config.switches.shock && t == config.shock_period + 1) {
      landscape = apply_shock(landscape, config.rho, rng);
      optimum = global_max(landscape);
      if (options.events) trace.events.push_back({t, TraceEvent::Kind::shock, 0, 0, 0});
    }

    // Simultaneous moves against the frozen t-1 state.
    for (std::size_t m = 0; m < m_count; ++m) {
      areas[m] = state.allocation.area(m);
      decisions[m] = agent_search_step(landscape, state, m, config.lambda, rng,
                                       config.switches.search, config.switches.residual_view);
    }
    Config next = state.current;
    for (std::size_t m = 0; m < m_count; ++m)
      for (std::size_t k = 0; k < areas[m].size(); ++k) next[areas[m][k]] = decisions[m][k];

    // Each agent sees only the contributions of its own tasks.
    std::vector<double> contrib_next = landscape.contributions(next);
    std::vector<double> seen_now, seen_before;
    for (std::size_t m = 0; m < m_count; ++m) {
      seen_now.clear();
      seen_before.clear();
      for (std::size_t j : areas[m]) {
        seen_now.push_back(contrib_next[j]);
        seen_before.push_back(contrib_now[j]);
      }
      update_beliefs(state.beliefs[m], areas[m], next, state.current, seen_now, seen_before,
                     config.switches.belief_update);
    }

    state.previous = std::move(state.current);
    state.current = std::move(next);
    state.period = t;
    contrib_now = std::move(contrib_next);

    if (realloc_now && !realloc_first) reallocate(t);
    record();
  }
  return trace;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "t,raw,pmax,normalized\n";
  for (std::size_t t = 0; t < trace.raw.size(); ++t) {
    out << t << ',' << format_roundtrip(trace.raw[t]) << ',' << format_roundtrip(trace.pmax[t])
        << ',' << format_roundtrip(trace.normalized[t]) << '\n';
  }
}

}  // namespace orgsim
