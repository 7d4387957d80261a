#include "orgsim/validation.hpp"

#include <algorithm>
#include <cmath>

#include "orgsim/format.hpp"
#include "orgsim/landscape.hpp"
#include "orgsim/random.hpp"
#include "orgsim/stats.hpp"

namespace orgsim {

CheckResult check_shock_correlation(double rho, std::uint64_t seed, std::size_t entries) {
  Rng rng = derive_stream(seed, stable_hash("validate/shock"), stable_hash(format_roundtrip(rho)));
  const double a = beta_shape(rho);
  std::vector<double> before(entries), after(entries);
  for (std::size_t k = 0; k < entries; ++k) {
    before[k] = uniform01(rng);
    after[k] = shocked_value(before[k], draw_shock_sample(a, rng));
  }
  const double r = pearson(before, after);
  CheckResult res;
  res.name = "shock correlation rho=" + format_roundtrip(rho);
  res.passed = std::abs(r - rho) <= 0.05 &&
               std::ranges::all_of(after, [](double v) { return v >= 0.0 && v <= 1.0; });
  res.detail = "empirical " + format_fixed(r, 4) + " (allowed " + format_fixed(rho - 0.05, 2) +
               ".." + format_fixed(rho + 0.05, 2) + ")";
  if (rho == 0.0) {
    const double d = ks_uniform_statistic(after);
    const double crit = ks_critical_1pct(after.size());
    res.passed = res.passed && d < crit;
    res.detail += ", KS " + format_fixed(d, 5) + " < " + format_fixed(crit, 5);
  }
  return res;
}

CheckResult check_global_max(std::uint64_t seed, std::size_t landscapes) {
  Rng rng = derive_stream(seed, stable_hash("validate/global_max"), 0);
  std::size_t mismatches = 0;
  for (std::size_t k = 0; k < landscapes; ++k) {
    const std::size_t n = 2 + uniform_index(rng, 9);
    std::vector<std::uint8_t> m(n * n);
    for (auto& cell : m) cell = uniform01(rng) < 0.3 ? 1 : 0;
    const Landscape land = generate_landscape(InteractionPattern(n, std::move(m)), rng);

    double best = -1.0;
    Config config(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      for (std::size_t i = 0; i < n; ++i) config[i] = (mask >> i) & 1u;
      best = std::max(best, land.performance(config));
    }
    const GlobalOptimum opt = global_max(land);
    if (opt.value != best || land.performance(opt.config) != opt.value) ++mismatches;
  }
  CheckResult res;
  res.name = "global_max vs enumeration";
  res.passed = mismatches == 0;
  res.detail = std::to_string(landscapes - mismatches) + "/" + std::to_string(landscapes) +
               " landscapes agree";
  return res;
}

std::vector<CheckResult> run_validation(std::uint64_t seed, std::span<const double> extra_rhos) {
  std::vector<double> rhos{-0.5, 0.0, 0.5};
  for (double r : extra_rhos)
    if (std::ranges::find(rhos, r) == rhos.end()) rhos.push_back(r);
  std::vector<CheckResult> out;
  for (double r : rhos) out.push_back(check_shock_correlation(r, seed));
  out.push_back(check_global_max(seed));
  return out;
}

}  // namespace orgsim
