#include "orgsim/sweep.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace orgsim {

std::size_t default_worker_count() noexcept {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

std::vector<ScenarioResult> run_scenarios(std::span<const ScenarioConfig> scenarios,
                                          std::size_t workers, const ProgressFn& progress) {
  std::vector<InteractionPattern> patterns;
  std::vector<std::vector<RunTrace>> traces(scenarios.size());
  struct Job {
    std::size_t scenario;
    std::size_t run;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    scenarios[s].validate();
    patterns.push_back(scenarios[s].interaction_pattern());
    traces[s].resize(scenarios[s].runs);
    for (std::size_t r = 0; r < scenarios[s].runs; ++r) jobs.push_back({s, r});
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex error_mutex;
  std::mutex progress_mutex;
  std::exception_ptr error;

  auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= jobs.size()) return;
      const Job job = jobs[k];
      try {
        RunTrace trace = simulate_run(scenarios[job.scenario], job.run, patterns[job.scenario]);
        // Only the normalized series feeds aggregation.
        trace.raw = {};
        trace.pmax = {};
        traces[job.scenario][job.run] = std::move(trace);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(jobs.size());
        return;
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, jobs.size());
      }
    }
  };

  const std::size_t n_threads = std::max<std::size_t>(1, std::min(workers, jobs.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  std::vector<ScenarioResult> results;
  results.reserve(scenarios.size());
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    results.push_back(aggregate(scenarios[s], traces[s]));
  }
  return results;
}

}  // namespace orgsim
