#include "orgsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace orgsim {
namespace {

// Variances below this fraction of the data scale are rounding noise.
constexpr double kZeroVariance = 1e-12;

double scale_of(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (double x : a) s = std::max(s, std::abs(x));
  for (double x : b) s = std::max(s, std::abs(x));
  return std::max(s, 1.0);
}

double two_sided_p(double t, double df) {
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

TTestResult degenerate_result(double diff, double df, double scale) {
  TTestResult r;
  r.df = df;
  r.degenerate = true;
  if (std::abs(diff) <= kZeroVariance * scale) {
    r.t = 0.0;
    r.p = 1.0;
  } else {
    r.t = diff > 0 ? std::numeric_limits<double>::infinity()
                   : -std::numeric_limits<double>::infinity();
    r.p = 0.0;
  }
  return r;
}

}  // namespace

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of an empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("variance needs at least two values");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

TTestResult t_test_independent(std::span<const double> a, std::span<const double> b,
                               bool welch) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("t-test needs at least two values per sample");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean(a), mb = mean(b);
  const double va = sample_variance(a), vb = sample_variance(b);
  const double scale = scale_of(a, b);

  double se = 0.0;
  double df = 0.0;
  if (welch) {
    const double qa = va / na, qb = vb / nb;
    se = std::sqrt(qa + qb);
    df = (qa + qb) * (qa + qb) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
  } else {
    df = na + nb - 2.0;
    const double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / df;
    se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  }
  if (se <= kZeroVariance * scale) {
    return degenerate_result(ma - mb, welch ? na + nb - 2.0 : df, scale);
  }
  TTestResult r;
  r.t = (ma - mb) / se;
  r.df = df;
  r.p = two_sided_p(r.t, df);
  return r;
}

TTestResult t_test_paired(std::span<const double> before, std::span<const double> after) {
  if (before.size() != after.size()) throw std::invalid_argument("paired samples differ in size");
  if (before.size() < 2) throw std::invalid_argument("paired t-test needs at least two pairs");
  std::vector<double> diff(before.size());
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = after[k] - before[k];
  const double n = static_cast<double>(diff.size());
  const double md = mean(diff);
  const double sd = std::sqrt(sample_variance(diff));
  const double df = n - 1.0;
  const double scale = scale_of(before, after);
  if (sd <= kZeroVariance * scale) return degenerate_result(md, df, scale);
  TTestResult r;
  r.t = md / (sd / std::sqrt(n));
  r.df = df;
  r.p = two_sided_p(r.t, df);
  return r;
}

std::string_view significance_stars(double p) noexcept {
  if (p <= 0.01) return "**";
  if (p <= 0.05) return "*";
  return "n.s.";
}

}  // namespace orgsim

namespace orgsim {

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("pearson: series must match in length and hold two values");
  }
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

double ks_uniform_statistic(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("ks statistic of an empty sample");
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double u = std::clamp(sorted[k], 0.0, 1.0);
    d = std::max({d, (static_cast<double>(k) + 1.0) / n - u, u - static_cast<double>(k) / n});
  }
  return d;
}

double ks_critical_1pct(std::size_t n) noexcept {
  return 1.6276 / std::sqrt(static_cast<double>(n));
}

}  // namespace orgsim
