#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace orgsim {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Empirical correlation between 1e5 uniform contributions and their shocked
/// replacements must lie within rho +- 0.05; at rho = 0 the replacements must
/// also pass a 1% KS uniformity test.
CheckResult check_shock_correlation(double rho, std::uint64_t seed, std::size_t entries = 100000);

/// global_max against plain enumeration on `landscapes` random landscapes of
/// 2..10 tasks with random interaction patterns.
CheckResult check_global_max(std::uint64_t seed, std::size_t landscapes = 200);

/// Both checks above for rho in {-0.5, 0, 0.5} plus any extra values.
std::vector<CheckResult> run_validation(std::uint64_t seed, std::span<const double> extra_rhos = {});

}  // namespace orgsim
