#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "orgsim/stats.hpp"

using namespace orgsim;

// Reference values below were produced with an independent statistics package.

TEST_CASE("student two-sample fixture") {
  const std::vector<double> a{1, 2, 3, 4, 5}, b{3, 4, 5, 6, 7};
  const auto r = t_test_independent(a, b);
  CHECK(r.t == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(r.df == 8.0);
  CHECK(std::abs(r.p - 0.08051623795726257) < 1e-6);
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("unequal sizes, student and welch") {
  const std::vector<double> x{0.12, 0.35, 0.29, 0.41, 0.18, 0.27};
  const std::vector<double> y{0.22, 0.31, 0.45, 0.52, 0.38, 0.40, 0.33};
  const auto s = t_test_independent(x, y);
  CHECK(std::abs(s.t - -1.8117562246220866) < 1e-9);
  CHECK(s.df == 11.0);
  CHECK(std::abs(s.p - 0.09738492028778076) < 1e-6);
  const auto w = t_test_independent(x, y, true);
  CHECK(std::abs(w.t - -1.7986889338045104) < 1e-9);
  CHECK(std::abs(w.df - 10.333254409849651) < 1e-9);
  CHECK(std::abs(w.p - 0.1012998993953335) < 1e-6);
}

TEST_CASE("paired fixture") {
  const std::vector<double> before{0.81, 0.77, 0.92, 0.85, 0.88, 0.79, 0.90, 0.83};
  const std::vector<double> after{0.84, 0.80, 0.91, 0.89, 0.93, 0.80, 0.95, 0.86};
  const auto r = t_test_paired(before, after);
  CHECK(std::abs(r.t - 4.00378608698105) < 1e-9);
  CHECK(r.df == 7.0);
  CHECK(std::abs(r.p - 0.005164966868807357) < 1e-6);
}

TEST_CASE("swapping samples negates t") {
  const std::vector<double> x{0.12, 0.35, 0.29, 0.41, 0.18, 0.27};
  const std::vector<double> y{0.22, 0.31, 0.45, 0.52, 0.38, 0.40, 0.33};
  for (bool welch : {false, true}) {
    const auto a = t_test_independent(x, y, welch), b = t_test_independent(y, x, welch);
    CHECK(a.t == doctest::Approx(-b.t));
    CHECK(a.p == doctest::Approx(b.p));
  }
}

TEST_CASE("identical samples") {
  const std::vector<double> x{0.3, 0.5, 0.9};
  const auto r = t_test_independent(x, x);
  CHECK(r.t == 0.0);
  CHECK(r.p == doctest::Approx(1.0));
  const auto p = t_test_paired(x, x);
  CHECK(p.p == 1.0);
  CHECK(p.degenerate);
}

TEST_CASE("degenerate cases") {
  const std::vector<double> before{0.5, 0.6, 0.7};
  const std::vector<double> shifted{0.6, 0.7, 0.8};
  // float noise in the differences must not count as variance
  const auto r = t_test_paired(before, shifted);
  CHECK(r.degenerate);
  CHECK(r.p == 0.0);
  CHECK(r.t > 0.0);

  const std::vector<double> c1{0.2, 0.2}, c2{0.4, 0.4};
  const auto flat = t_test_independent(c1, c2);
  CHECK(flat.degenerate);
  CHECK(flat.p == 0.0);
  CHECK(std::isinf(flat.t));
  const auto same = t_test_independent(c1, c1);
  CHECK(same.degenerate);
  CHECK(same.p == 1.0);
}

TEST_CASE("size checks") {
  const std::vector<double> one{0.1}, two{0.1, 0.2}, three{0.1, 0.2, 0.3};
  CHECK_THROWS(t_test_independent(one, two));
  CHECK_THROWS(t_test_paired(two, three));
  CHECK_THROWS(t_test_paired(one, one));
}

TEST_CASE("stars") {
  CHECK(significance_stars(0.03) == "*");
  CHECK(significance_stars(0.05) == "*");
  CHECK(significance_stars(0.005) == "**");
  CHECK(significance_stars(0.01) == "**");
  CHECK(significance_stars(0.2) == "n.s.");
}

TEST_CASE("moments and correlation") {
  const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 6, 8}, z{4, 3, 2, 1};
  CHECK(mean(x) == 2.5);
  CHECK(sample_variance(x) == doctest::Approx(5.0 / 3));
  CHECK(pearson(x, y) == doctest::Approx(1.0));
  CHECK(pearson(x, z) == doctest::Approx(-1.0));
}

TEST_CASE("ks statistic") {
  std::vector<double> grid;
  for (int k = 0; k < 1000; ++k) grid.push_back((k + 0.5) / 1000);
  CHECK(ks_uniform_statistic(grid) == doctest::Approx(0.0005));
  const std::vector<double> skewed(1000, 0.9);
  CHECK(ks_uniform_statistic(skewed) > ks_critical_1pct(1000));
  CHECK(ks_critical_1pct(100000) == doctest::Approx(0.005147).epsilon(1e-3));
}
