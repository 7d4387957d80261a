#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "orgsim/config.hpp"

using namespace orgsim;

namespace {

ResolvedConfig resolve_text(const std::string& text, FlagOverrides flags = {}) {
  std::istringstream in(text);
  return resolve_config(parse_config_text(in), flags);
}

}  // namespace

TEST_CASE("empty config gives the default grid") {
  ::unsetenv("ORGSIM_OUT");
  const auto rc = resolve_text("");
  REQUIRE(rc.scenarios.size() == 24);
  const auto& c = rc.scenarios.front();
  CHECK(c.n_tasks == 15);
  CHECK(c.n_agents == 5);
  CHECK(c.capacity == 7);
  CHECK(c.realloc_interval == 20);
  CHECK(c.shock_period == 50);
  CHECK(c.horizon == 200);
  CHECK(c.runs == 600);
  CHECK(c.master_seed == kDefaultSeed);
  CHECK(c.switches == Switches{});
  CHECK(rc.out_dir == "results");
  CHECK_FALSE(rc.welch);
  CHECK(rc.workers >= 1);
}

TEST_CASE("flags win over the file") {
  FlagOverrides flags;
  flags.runs = 100;
  flags.seed = 7;
  flags.workers = 3;
  flags.out = "elsewhere";
  const auto rc = resolve_text("runs = 50\nseed = 1\nworkers = 2\nout = here\n", flags);
  for (const auto& c : rc.scenarios) {
    CHECK(c.runs == 100);
    CHECK(c.master_seed == 7);
  }
  CHECK(rc.workers == 3);
  CHECK(rc.out_dir == "elsewhere");

  const auto file_only = resolve_text("runs = 50\nworkers = 2\nout = here\n");
  CHECK(file_only.scenarios[0].runs == 50);
  CHECK(file_only.workers == 2);
  CHECK(file_only.out_dir == "here");
}

TEST_CASE("output directory falls back to the environment") {
  ::setenv("ORGSIM_OUT", "/tmp/from-env", 1);
  CHECK(resolve_text("").out_dir == "/tmp/from-env");
  CHECK(resolve_text("out = mine\n").out_dir == "mine");
  ::unsetenv("ORGSIM_OUT");
}

TEST_CASE("domain errors name the domain") {
  std::istringstream in("rho = 1.5\n");
  CHECK_THROWS_WITH_AS(parse_config_text(in), doctest::Contains("(-1, 1)"), ConfigError);
  std::istringstream lam("lambda = 0\n");
  CHECK_THROWS_WITH_AS(parse_config_text(lam), doctest::Contains("(0, 1]"), ConfigError);
  std::istringstream gam("gamma = 2\n");
  CHECK_THROWS_AS(parse_config_text(gam), ConfigError);
}

TEST_CASE("syntax errors carry the line number") {
  std::istringstream unknown("runs = 10\ncolour = blue\n");
  CHECK_THROWS_WITH_AS(parse_config_text(unknown), doctest::Contains("line 2"), ConfigError);
  std::istringstream bare("runs 10\n");
  CHECK_THROWS_AS(parse_config_text(bare), ConfigError);
  std::istringstream nan("runs = many\n");
  CHECK_THROWS_AS(parse_config_text(nan), ConfigError);
  std::istringstream switch_value("search = sideways\n");
  CHECK_THROWS_AS(parse_config_text(switch_value), ConfigError);
}

TEST_CASE("comments and lists") {
  const auto rc = resolve_text(
      "# grid\n; also a comment\n  rho = -0.5  \nlambda = 0.33, 0.5, 1\nmodes = top-down\n"
      "pattern = modular   # just one\nsearch = best_of_neighborhood ; neighbourhood\n");
  CHECK(rc.scenarios.size() == 3);
  for (const auto& c : rc.scenarios) {
    CHECK(c.rho == -0.5);
    CHECK(c.switches.search == SearchMode::best_of_neighborhood);
  }
}

TEST_CASE("scenario sections") {
  const auto rc = resolve_text("[non-modular]\ncapacity = 5\nhorizon = 120\n");
  for (const auto& c : rc.scenarios) {
    const bool hit = c.label.find("non-modular") != std::string::npos;
    CHECK(c.capacity == (hit ? 5u : 7u));
    CHECK(c.horizon == (hit ? 120u : 200u));
  }
  CHECK_THROWS_AS(resolve_text("[nowhere]\ncapacity = 5\n"), ConfigError);
  std::istringstream grid_key("[modular]\nrho = 0.5\n");
  CHECK_THROWS_AS(parse_config_text(grid_key), ConfigError);
  CHECK_THROWS_AS(resolve_text("[benchmark]\ncapacity = 1\n"), ConfigError);
}

TEST_CASE("filters") {
  FlagOverrides flags;
  flags.filters = {"negative_modular_benchmark"};
  const auto rc = resolve_text("", flags);
  CHECK(rc.scenarios.size() == 2);
  flags.filters = {"nothing-like-this"};
  CHECK_THROWS_AS(resolve_text("", flags), ConfigError);
}

TEST_CASE("welch flag") {
  CHECK(resolve_text("t_test = welch\n").welch);
  std::istringstream bad("t_test = fisher\n");
  CHECK_THROWS_AS(parse_config_text(bad), ConfigError);
}

TEST_CASE("missing config file") {
  FlagOverrides flags;
  flags.config = "/nonexistent/orgsim.cfg";
  CHECK_THROWS_AS(parse_config(flags), ConfigError);
}
