#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "orgsim/experiments.hpp"
#include "orgsim/simulation.hpp"

namespace orgsim {

/// Called after each completed run with (completed, total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

std::size_t default_worker_count() noexcept;

/// Executes every run of every scenario on `workers` threads. Runs are
/// independent jobs; results are keyed by (scenario, run index) so the output
/// does not depend on the worker count or completion order.
std::vector<ScenarioResult> run_scenarios(std::span<const ScenarioConfig> scenarios,
                                          std::size_t workers, const ProgressFn& progress = {});

}  // namespace orgsim
