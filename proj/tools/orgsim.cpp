// orgsim: command-line driver for the organizational resilience simulator.
//
//   orgsim sweep    [--config F] [--out DIR] [--seed S] [--workers N] [--runs N] [--filter L]...
//   orgsim run      --filter LABEL [--trace] [--run-index K] ...
//   orgsim report   [--out DIR]
//   orgsim validate [--seed S]
//   orgsim dump-landscape --filter LABEL [--run-index K]
//
// Exit codes: 0 success, 1 validation failure or incomplete results,
// 2 configuration error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "orgsim/config.hpp"
#include "orgsim/experiments.hpp"
#include "orgsim/format.hpp"
#include "orgsim/simulation.hpp"
#include "orgsim/sweep.hpp"
#include "orgsim/validation.hpp"

namespace fs = std::filesystem;
using namespace orgsim;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kConfigError = 2;

const char* kVersion = "0.1.0";

struct CliOptions {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t workers = 0;
  std::size_t runs = 0;
  std::vector<std::string> filters;
  bool trace = false;
  std::size_t run_index = 0;
};

FlagOverrides to_flags(const CliOptions& o, const CLI::App& app) {
  FlagOverrides f;
  if (!o.config.empty()) f.config = o.config;
  if (!o.out.empty()) f.out = o.out;
  if (app.count("--seed")) f.seed = o.seed;
  if (app.count("--workers")) f.workers = o.workers;
  if (app.count("--runs")) f.runs = o.runs;
  f.filters = o.filters;
  return f;
}

const ScenarioConfig& single_scenario(const ResolvedConfig& rc) {
  if (rc.scenarios.size() != 1) {
    std::string msg = "this command needs exactly one scenario; --filter matched " +
                      std::to_string(rc.scenarios.size()) + ":";
    for (const auto& s : rc.scenarios) msg += "\n  " + s.label;
    throw ConfigError(msg);
  }
  return rc.scenarios.front();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

ManifestInfo manifest_info(const ResolvedConfig& rc) {
  ManifestInfo info;
  info.master_seed = rc.grid.base.master_seed;
  info.welch = rc.welch;
  info.code_version = kVersion;
  return info;
}

void print_progress(std::size_t done, std::size_t total) {
  if (done == total || done % 500 == 0) {
    std::cerr << "\r" << done << "/" << total << " runs" << (done == total ? "\n" : "")
              << std::flush;
  }
}

int cmd_sweep(const ResolvedConfig& rc) {
  std::cerr << "sweep: " << rc.scenarios.size() << " scenarios, " << rc.workers
            << " workers -> " << rc.out_dir.string() << "\n";
  const auto results = run_scenarios(rc.scenarios, rc.workers, print_progress);
  const bool tables = write_results(rc.out_dir, results, manifest_info(rc));
  if (tables) {
    const auto rendered = render_tables(results, rc.welch);
    std::cout << "## Ability to absorb shocks\n\n" << rendered.table2_md
              << "\n## Ability to recover from shocks\n\n" << rendered.table3_md;
  } else {
    std::cerr << "sweep: grid has bottom-up scenarios without a benchmark (or none at all); "
                 "tables skipped\n";
  }
  return kOk;
}

int cmd_run(const ResolvedConfig& rc, const CliOptions& o) {
  const ScenarioConfig& sc = single_scenario(rc);
  const fs::path dir = rc.out_dir / sc.label;
  fs::create_directories(dir);
  if (o.trace) {
    const RunTrace trace = simulate_run(sc, o.run_index, TraceOptions{.events = true});
    const fs::path path = dir / ("trace_run" + std::to_string(o.run_index) + ".csv");
    std::ofstream out(path, std::ios::binary);
    write_trace_csv(out, trace);
    std::ofstream ev(dir / ("events_run" + std::to_string(o.run_index) + ".csv"),
                     std::ios::binary);
    ev << "t,kind,agent,task,to\n";
    for (const auto& e : trace.events) {
      const char* kind = e.kind == TraceEvent::Kind::offer      ? "offer"
                         : e.kind == TraceEvent::Kind::transfer ? "transfer"
                                                                : "shock";
      ev << e.t << ',' << kind << ',' << e.agent << ',' << e.task << ',' << e.to << '\n';
    }
    std::cout << path.string() << " (" << trace.raw.size() << " periods)\n";
    return kOk;
  }
  const auto results = run_scenarios(std::span(&sc, 1), rc.workers, print_progress);
  const ScenarioResult& r = results.front();
  std::ostringstream runs, series;
  write_runs_csv(runs, r.runs);
  write_series_csv(series, r.series);
  write_text(dir / "runs.csv", runs.str());
  write_text(dir / "series.csv", series.str());
  const AnchorPeriods a = anchors_for(sc);
  std::cout << sc.label << ": P" << a.before << "=" << format_fixed(r.series[a.before], 3)
            << " P" << a.after << "=" << format_fixed(r.series[a.after], 3) << " P" << a.mid
            << "=" << format_fixed(r.series[a.mid], 3) << " P" << a.end << "="
            << format_fixed(r.series[a.end], 3) << "\n";
  return kOk;
}

int cmd_report(const ResolvedConfig& rc) {
  ManifestInfo info;
  std::vector<ScenarioResult> results;
  try {
    results = load_results(rc.out_dir, info);
    write_tables(rc.out_dir, results, info.welch);
  } catch (const std::exception& e) {
    std::cerr << "report: " << e.what() << "\n";
    return kFailure;
  }
  const auto rendered = render_tables(results, info.welch);
  std::cout << "## Ability to absorb shocks\n\n" << rendered.table2_md
            << "\n## Ability to recover from shocks\n\n" << rendered.table3_md;
  return kOk;
}

int cmd_validate(const ResolvedConfig& rc) {
  const auto checks = run_validation(rc.grid.base.master_seed, rc.grid.rhos);
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    ok = ok && c.passed;
  }
  return ok ? kOk : kFailure;
}

int cmd_dump_landscape(const ResolvedConfig& rc, const CliOptions& o) {
  const ScenarioConfig& sc = single_scenario(rc);
  const InteractionPattern pattern = sc.interaction_pattern();
  Rng rng = run_stream(sc, o.run_index);
  const Landscape land = generate_landscape(pattern, rng);
  std::cout << "# pattern\n";
  write_pattern(std::cout, pattern);
  std::cout << "# tables\ntask,index,value\n";
  for (std::size_t i = 0; i < land.n_tasks(); ++i) {
    const auto table = land.table(i);
    for (std::size_t k = 0; k < table.size(); ++k)
      std::cout << i << ',' << k << ',' << format_roundtrip(table[k]) << '\n';
  }
  const GlobalOptimum opt = global_max(land);
  std::cout << "# optimum " << format_roundtrip(opt.value) << " at ";
  for (auto b : opt.config) std::cout << int(b);
  std::cout << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based simulator of top-down vs bottom-up organizations under shocks"};
  app.require_subcommand(1);
  CliOptions o;
  app.add_option("--config", o.config, "key = value configuration file");
  app.add_option("--out", o.out, "results directory (default $ORGSIM_OUT or ./results)");
  app.add_option("--seed", o.seed, "master seed");
  app.add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--runs", o.runs, "runs per scenario")->check(CLI::PositiveNumber);
  app.add_option("--filter", o.filters, "keep scenarios whose label contains this text");
  app.add_flag("--trace", o.trace, "run: dump a per-period trace of one run");
  app.add_option("--run-index", o.run_index, "run: index of the traced run");

  auto* sweep = app.add_subcommand("sweep", "run the full scenario grid and write tables");
  auto* run = app.add_subcommand("run", "run a single scenario");
  auto* report = app.add_subcommand("report", "re-render tables from a finished sweep");
  auto* validate = app.add_subcommand("validate", "shock-correlation and optimum oracle checks");
  auto* dump = app.add_subcommand("dump-landscape", "print the initial landscape of one run");
  for (auto* sub : {sweep, run, report, validate, dump}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const ResolvedConfig rc = parse_config(to_flags(o, app));
    if (*sweep) return cmd_sweep(rc);
    if (*run) return cmd_run(rc, o);
    if (*report) return cmd_report(rc);
    if (*validate) return cmd_validate(rc);
    if (*dump) return cmd_dump_landscape(rc, o);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
