#include <vector>

#include "doctest.h"
#include "orgsim/organization.hpp"

using namespace orgsim;

namespace {

Landscape separable(std::vector<std::vector<double>> tables) {
  const std::size_t n = tables.size();
  return Landscape(InteractionPattern(n, std::vector<std::uint8_t>(n * n, 0)), std::move(tables));
}

Landscape uniform_landscape(const InteractionPattern& p, double c) {
  std::vector<std::vector<double>> tables;
  for (std::size_t i = 0; i < p.n_tasks(); ++i)
    tables.emplace_back(std::size_t{1} << (1 + p.dependencies(i).size()), c);
  return Landscape(p, tables);
}

// Apply agent decisions to a copy of state.current.
Config compose(const OrgState& s, const std::vector<std::vector<std::uint8_t>>& bits) {
  Config next = s.current;
  for (std::size_t m = 0; m < bits.size(); ++m) {
    const auto area = s.allocation.area(m);
    for (std::size_t k = 0; k < area.size(); ++k) next[area[k]] = bits[m][k];
  }
  return next;
}

}  // namespace

TEST_CASE("sequential allocation") {
  const auto a = top_down_allocation(15, 5);
  CHECK(a.area(0) == TaskSet{0, 1, 2});
  CHECK(a.area(4) == TaskSet{12, 13, 14});
  CHECK(a.residual(0).size() == 12);
  a.check_sizes(3, 3);
  const auto b = top_down_allocation(4, 2);
  CHECK(b.area(0) == TaskSet{0, 1});
  CHECK(b.area(1) == TaskSet{2, 3});
  CHECK_THROWS(top_down_allocation(15, 4));
}

TEST_CASE("allocation bookkeeping") {
  Allocation a({0, 0, 1}, 2);
  a.assign(1, 1);
  CHECK(a.area(0) == TaskSet{0});
  CHECK(a.area(1) == TaskSet{1, 2});
  CHECK(a.area_size(1) == 2);
  CHECK_NOTHROW(a.check_sizes(1, 2));
  CHECK_THROWS_AS(a.check_sizes(2, 2), std::logic_error);
  CHECK_THROWS(Allocation({0, 2}, 2));
}

TEST_CASE("utility") {
  const auto l = separable({{0.6, 0.6}, {0.3, 0.3}, {0.3, 0.3}});
  const TaskSet own{0}, residual{1, 2};
  const Config c{0, 0, 0};
  CHECK(utility(l, own, residual, c, 1.0) == l.performance(c, own));
  CHECK(utility(l, own, residual, c, 0.33) == doctest::Approx(0.399));
  CHECK_THROWS(utility(l, own, TaskSet{}, c, 0.5));
  CHECK_THROWS(utility(l, TaskSet{}, residual, c, 0.5));

  const auto flat = uniform_landscape(build_pattern(PatternKind::modular, 6, 2), 0.42);
  const auto alloc = top_down_allocation(6, 2);
  for (double lambda : {0.33, 0.5, 1.0})
    CHECK(utility(flat, alloc, 1, Config{1, 0, 1, 1, 0, 0}, lambda) == doctest::Approx(0.42));
}

TEST_CASE("belief means") {
  BeliefState b(3);
  CHECK(b.mean(0, 1) == 0.5);
  b.set_counts(0, 1, 2, 1);
  CHECK(b.mean(0, 1) == doctest::Approx(2.0 / 3));
  b.set_counts(0, 1, 1, 3);
  CHECK(b.mean(0, 1) == 0.25);
  CHECK_THROWS(b.mean(1, 1));
}

TEST_CASE("belief updates") {
  const TaskSet own{1};
  const Config before{0, 0, 0};
  const std::vector<double> f_before{0.4};

  SUBCASE("no change") {
    BeliefState b(3);
    const BeliefState copy = b;
    update_beliefs(b, own, before, before, std::vector<double>{0.4}, f_before);
    CHECK(b == copy);
  }
  SUBCASE("interdependence seen") {
    BeliefState b(3);
    update_beliefs(b, own, Config{1, 0, 0}, before, std::vector<double>{0.7}, f_before);
    CHECK(b.alpha(0, 1) == 2);
    CHECK(b.mean(0, 1) == doctest::Approx(2.0 / 3));
    CHECK(b.alpha(2, 1) == 1);
    CHECK(b.beta(2, 1) == 1);
  }
  SUBCASE("no interdependence seen") {
    BeliefState b(3);
    update_beliefs(b, own, Config{1, 0, 0}, before, std::vector<double>{0.4}, f_before);
    CHECK(b.beta(0, 1) == 2);
    CHECK(b.mean(0, 1) == doctest::Approx(1.0 / 3));
  }
  SUBCASE("literal rule touches every pair") {
    BeliefState b(3);
    update_beliefs(b, own, Config{1, 0, 0}, before, std::vector<double>{0.7}, f_before,
                   BeliefUpdate::literal);
    CHECK(b.alpha(0, 1) == 2);
    CHECK(b.alpha(2, 1) == 2);
    CHECK(b.alpha(1, 0) == 1);
  }
}

TEST_CASE("belief counts grow by at most one per period") {
  Rng rng(3);
  const auto l = generate_landscape(build_pattern(PatternKind::non_modular, 6, 2), rng);
  const TaskSet own{0, 1, 2};
  BeliefState b(6);
  Config prev(6, 0);
  for (int t = 0; t < 200; ++t) {
    Config now = prev;
    now[uniform_index(rng, 6)] ^= 1u;
    if (uniform01(rng) < 0.3) now = prev;
    const BeliefState old = b;
    std::vector<double> fn, fb;
    for (auto j : own) fn.push_back(l.contribution(now, j)), fb.push_back(l.contribution(prev, j));
    update_beliefs(b, own, now, prev, fn, fb);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        if (i == j) continue;
        const auto grown = (b.alpha(i, j) + b.beta(i, j)) - (old.alpha(i, j) + old.beta(i, j));
        CHECK(grown <= 1);
        CHECK(b.alpha(i, j) >= old.alpha(i, j));
        CHECK(b.beta(i, j) >= old.beta(i, j));
        CHECK((b.mean(i, j) > 0.0 && b.mean(i, j) < 1.0));
      }
    prev = now;
  }
}

TEST_CASE("search keeps the better of status quo and one flip") {
  // agent 0 owns task 0; its only neighbour is flipping bit 0
  SUBCASE("better candidate adopted") {
    const auto l = separable({{0.6, 0.7}, {0.5, 0.5}});
    auto s = make_org_state(Config{0, 0}, top_down_allocation(2, 2));
    Rng rng(1);
    CHECK(agent_search_step(l, s, 0, 1.0, rng) == std::vector<std::uint8_t>{1});
  }
  SUBCASE("worse candidate rejected") {
    const auto l = separable({{0.6, 0.5}, {0.5, 0.5}});
    auto s = make_org_state(Config{0, 0}, top_down_allocation(2, 2));
    Rng rng(1);
    CHECK(agent_search_step(l, s, 0, 1.0, rng) == std::vector<std::uint8_t>{0});
  }
  SUBCASE("tie keeps status quo") {
    const auto l = separable({{0.6, 0.6}, {0.5, 0.5}});
    auto s = make_org_state(Config{0, 0}, top_down_allocation(2, 2));
    Rng rng(1);
    CHECK(agent_search_step(l, s, 0, 1.0, rng) == std::vector<std::uint8_t>{0});
    CHECK(agent_search_step(l, s, 0, 1.0, rng, SearchMode::best_of_neighborhood) ==
          std::vector<std::uint8_t>{0});
  }
}

TEST_CASE("search moves at most one bit") {
  Rng rng(4);
  const auto l = generate_landscape(build_pattern(PatternKind::non_modular, 15, 5), rng);
  Config c(15);
  for (auto& b : c) b = uniform_index(rng, 2);
  const auto s = make_org_state(c, top_down_allocation(15, 5));
  for (int rep = 0; rep < 200; ++rep)
    for (std::size_t m = 0; m < 5; ++m)
      for (auto mode : {SearchMode::single_flip, SearchMode::best_of_neighborhood}) {
        const auto bits = agent_search_step(l, s, m, 0.33, rng, mode);
        const auto area = s.allocation.area(m);
        int moved = 0;
        for (std::size_t k = 0; k < area.size(); ++k) moved += bits[k] != c[area[k]];
        CHECK(moved <= 1);
      }
}

TEST_CASE("observed residual view ignores the residual when choosing") {
  // task 1 depends on task 0; flipping bit 0 costs task 0 a little but helps task 1
  std::vector<std::uint8_t> m{1, 0, 1, 1};
  const Landscape l(InteractionPattern(2, m), {{0.5, 0.45}, {0.1, 0.9, 0.1, 0.9}});
  const auto s = make_org_state(Config{0, 0}, top_down_allocation(2, 2));
  Rng r1(1), r2(1);
  CHECK(agent_search_step(l, s, 0, 0.33, r1) == std::vector<std::uint8_t>{1});
  CHECK(agent_search_step(l, s, 0, 0.33, r2, SearchMode::single_flip, ResidualView::observed) ==
        std::vector<std::uint8_t>{0});
}

TEST_CASE("modular individual climb never loses performance") {
  Rng rng(6);
  const auto pattern = build_pattern(PatternKind::modular, 15, 5);
  for (int run = 0; run < 20; ++run) {
    const auto l = generate_landscape(pattern, rng);
    Config c(15);
    for (auto& b : c) b = uniform_index(rng, 2);
    auto s = make_org_state(c, top_down_allocation(15, 5));
    double last = l.performance(s.current);
    for (int t = 0; t < 50; ++t) {
      std::vector<std::vector<std::uint8_t>> bits;
      for (std::size_t m = 0; m < 5; ++m) bits.push_back(agent_search_step(l, s, m, 1.0, rng));
      s.previous = s.current;
      s.current = compose(s, bits);
      const double now = l.performance(s.current);
      CHECK(now >= last);
      last = now;
    }
  }
}

TEST_CASE("long climb ends in a local optimum of each area") {
  Rng rng(7);
  for (std::size_t n : {4u, 6u}) {
    const auto l = generate_landscape(build_pattern(PatternKind::modular, n, 2), rng);
    Config c(n);
    for (auto& b : c) b = uniform_index(rng, 2);
    auto s = make_org_state(c, top_down_allocation(n, 2));
    for (int t = 0; t < 500; ++t) {
      std::vector<std::vector<std::uint8_t>> bits;
      for (std::size_t m = 0; m < 2; ++m) bits.push_back(agent_search_step(l, s, m, 1.0, rng));
      s.current = compose(s, bits);
    }
    for (std::size_t m = 0; m < 2; ++m) {
      const auto area = s.allocation.area(m);
      const double here = l.performance(s.current, area);
      for (auto task : area) {
        Config probe = s.current;
        probe[task] ^= 1u;
        CHECK(l.performance(probe, area) <= here);
      }
    }
  }
}

TEST_CASE("switch names round trip") {
  for (auto m : {BeliefUpdate::per_bit, BeliefUpdate::literal})
    CHECK(parse_belief_update(to_string(m)) == m);
  for (auto m : {SearchMode::single_flip, SearchMode::best_of_neighborhood})
    CHECK(parse_search_mode(to_string(m)) == m);
  for (auto v : {ResidualView::recomputed, ResidualView::observed})
    CHECK(parse_residual_view(to_string(v)) == v);
  CHECK_THROWS(parse_search_mode("random"));
}
