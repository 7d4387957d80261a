#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace orgsim {

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;          // two-sided
  bool degenerate = false; // zero variance; p fixed by convention
};

double mean(std::span<const double> xs);
/// Unbiased sample variance (n - 1 denominator).
double sample_variance(std::span<const double> xs);

/// Two-sample t-test of mean(a) - mean(b). Student's pooled-variance form by
/// default, Welch's unequal-variance form when `welch` is set. Each sample
/// needs at least two values.
///
/// Zero variance in both samples is degenerate: p = 1 when the means agree,
/// otherwise t = +-inf and p = 0.
TTestResult t_test_independent(std::span<const double> a, std::span<const double> b,
                               bool welch = false);

/// One-sample t-test on after[k] - before[k]; positive t means `after` is
/// higher. Zero-variance differences are degenerate (p = 1 for a zero mean,
/// p = 0 otherwise).
TTestResult t_test_paired(std::span<const double> before, std::span<const double> after);

/// "**" for p <= 0.01, "*" for p <= 0.05, "n.s." otherwise.
std::string_view significance_stars(double p) noexcept;

}  // namespace orgsim

namespace orgsim {

/// Sample Pearson correlation; both series need the same length >= 2.
double pearson(std::span<const double> x, std::span<const double> y);

/// Kolmogorov-Smirnov distance between the sample and U(0,1).
double ks_uniform_statistic(std::span<const double> xs);

/// Asymptotic 1% critical value of the one-sample KS statistic.
double ks_critical_1pct(std::size_t n) noexcept;

}  // namespace orgsim
