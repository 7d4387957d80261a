#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "orgsim/simulation.hpp"
#include "orgsim/stats.hpp"

namespace orgsim {

// ---------------------------------------------------------------------------
// Grid

struct LabelParts {
  std::string shock;      // positive / negative / rho<value>
  std::string pattern;    // modular / non-modular / custom
  std::string alloc;      // mirroring / utility / gamma<value> / benchmark
  std::string incentive;  // altruistic / individual / lambda<value>

  std::string joined() const;  // parts joined by '_'; doubles as directory name
};

LabelParts label_parts(const ScenarioConfig& config);
std::string make_label(const ScenarioConfig& config);

/// Axes of the experiment grid plus the shared per-scenario settings.
struct GridSpec {
  ScenarioConfig base;
  std::vector<double> rhos{0.5, -0.5};
  std::vector<PatternKind> patterns{PatternKind::modular, PatternKind::non_modular};
  std::vector<double> gammas{0.0, 1.0};
  std::vector<double> lambdas{0.33, 1.0};
  std::vector<Mode> modes{Mode::bottom_up, Mode::top_down};
};

/// Bottom-up cells (rho x pattern x gamma x lambda) followed by top-down
/// benchmarks (rho x pattern x lambda). Throws std::invalid_argument on empty
/// or out-of-domain axes and duplicate values.
std::vector<ScenarioConfig> build_grid(const GridSpec& spec);

// ---------------------------------------------------------------------------
// Aggregation

/// Periods stored per run. Defaults: 50, 51, 100, 200.
struct AnchorPeriods {
  std::size_t before = 50;
  std::size_t after = 51;
  std::size_t mid = 100;
  std::size_t end = 200;
};

/// before = shock period, after = the period following it,
/// mid = min(2 * shock period, horizon), end = horizon.
AnchorPeriods anchors_for(const ScenarioConfig& config);

struct RunRecord {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  double p50 = 0.0;
  double p51 = 0.0;
  double p100 = 0.0;
  double p200 = 0.0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

RunRecord make_run_record(const RunTrace& trace, std::size_t run, const AnchorPeriods& anchors);

struct ScenarioResult {
  ScenarioConfig config;
  std::vector<RunRecord> runs;   // ordered by run index
  std::vector<double> series;    // mean normalized performance per period; may be empty when loaded
};

/// Mean over runs of the normalized performance in period t.
double mean_normalized(std::span<const RunTrace> traces, std::size_t t);

/// Fold completed traces (indexed by run) into a scenario result.
ScenarioResult aggregate(const ScenarioConfig& config, std::span<const RunTrace> traces);

struct Deltas {
  double absolute = 0.0;
  double relative = 0.0;
};

Deltas deltas(double before, double after) noexcept;
/// Differences between series[t] and series[tau].
Deltas deltas(std::span<const double> series, std::size_t tau, std::size_t t);

/// Column of one anchor across runs.
std::vector<double> anchor_column(std::span<const RunRecord> runs, double RunRecord::*field);
/// Per-run p51 - p50.
std::vector<double> shock_drops(std::span<const RunRecord> runs);

// ---------------------------------------------------------------------------
// Tables

struct AbsorbRow {
  LabelParts parts;
  double bu_p50 = 0, bu_p51 = 0, bu_delta = 0;
  double bm_p50 = 0, bm_p51 = 0, bm_delta = 0;
  TTestResult test;  // per-run drops, bottom-up vs benchmark
};

struct RecoveryRow {
  bool benchmark = false;
  LabelParts parts;
  double p50 = 0, p100 = 0, p200 = 0;
  Deltas d100, d200;
  TTestResult test100, test200;  // paired against p50
};

/// One row per bottom-up scenario, matched with the top-down scenario of the
/// same shock, pattern and incentive. Throws when a benchmark is missing.
std::vector<AbsorbRow> absorb_rows(std::span<const ScenarioResult> results, bool welch = false);
/// Bottom-up rows followed by benchmark rows.
std::vector<RecoveryRow> recovery_rows(std::span<const ScenarioResult> results);

struct RenderedTables {
  std::string table2_csv, table2_md;
  std::string table3_csv, table3_md;
};

RenderedTables render_tables(std::span<const ScenarioResult> results, bool welch = false);

// ---------------------------------------------------------------------------
// Persistence

void write_runs_csv(std::ostream& out, std::span<const RunRecord> runs);
std::vector<RunRecord> read_runs_csv(std::istream& in);
void write_series_csv(std::ostream& out, std::span<const double> series);

struct ManifestInfo {
  std::uint64_t master_seed = kDefaultSeed;
  bool welch = false;
  std::string code_version;
};

/// Writes <dir>/<label>/{runs,series}.csv, table2/3 (csv, md) when the grid
/// is complete, and manifest.json. Returns false when tables were skipped.
bool write_results(const std::filesystem::path& dir, std::span<const ScenarioResult> results,
                   const ManifestInfo& info);

/// Writes only the table files for already loaded results.
void write_tables(const std::filesystem::path& dir, std::span<const ScenarioResult> results,
                  bool welch);

/// Reads manifest.json and every runs.csv. Throws std::runtime_error when the
/// directory holds no completed sweep.
std::vector<ScenarioResult> load_results(const std::filesystem::path& dir, ManifestInfo& info);

std::string manifest_json(std::span<const ScenarioResult> results, const ManifestInfo& info);

}  // namespace orgsim
