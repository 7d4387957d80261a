#include "orgsim/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "orgsim/format.hpp"

namespace orgsim {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Grid

std::string LabelParts::joined() const {
  return shock + "_" + pattern + "_" + alloc + "_" + incentive;
}

LabelParts label_parts(const ScenarioConfig& c) {
  LabelParts p;
  if (c.rho == 0.5)
    p.shock = "positive";
  else if (c.rho == -0.5)
    p.shock = "negative";
  else
    p.shock = "rho" + format_roundtrip(c.rho);
  p.pattern = std::string(to_string(c.pattern));
  if (c.mode == Mode::top_down)
    p.alloc = "benchmark";
  else if (c.gamma == 0.0)
    p.alloc = "mirroring";
  else if (c.gamma == 1.0)
    p.alloc = "utility";
  else
    p.alloc = "gamma" + format_roundtrip(c.gamma);
  if (c.lambda == 0.33)
    p.incentive = "altruistic";
  else if (c.lambda == 1.0)
    p.incentive = "individual";
  else
    p.incentive = "lambda" + format_roundtrip(c.lambda);
  return p;
}

std::string make_label(const ScenarioConfig& config) { return label_parts(config).joined(); }

namespace {

template <typename T>
void check_axis(const std::vector<T>& axis, const char* name) {
  if (axis.empty()) throw std::invalid_argument(std::string(name) + " axis is empty");
  std::set<T> seen(axis.begin(), axis.end());
  if (seen.size() != axis.size()) {
    throw std::invalid_argument(std::string(name) + " axis lists a value twice");
  }
}

}  // namespace

std::vector<ScenarioConfig> build_grid(const GridSpec& spec) {
  check_axis(spec.modes, "mode");
  check_axis(spec.rhos, "rho");
  check_axis(spec.patterns, "pattern");
  check_axis(spec.lambdas, "lambda");
  const bool any_bottom_up =
      std::ranges::find(spec.modes, Mode::bottom_up) != spec.modes.end();
  if (any_bottom_up) check_axis(spec.gammas, "gamma");

  std::vector<ScenarioConfig> grid;
  auto push = [&](ScenarioConfig c) {
    c.label = make_label(c);
    c.validate();
    grid.push_back(std::move(c));
  };
  for (Mode mode : {Mode::bottom_up, Mode::top_down}) {
    if (std::ranges::find(spec.modes, mode) == spec.modes.end()) continue;
    for (double rho : spec.rhos) {
      for (PatternKind pattern : spec.patterns) {
        ScenarioConfig c = spec.base;
        c.mode = mode;
        c.rho = rho;
        c.pattern = pattern;
        if (mode == Mode::bottom_up) {
          for (double gamma : spec.gammas) {
            for (double lambda : spec.lambdas) {
              c.gamma = gamma;
              c.lambda = lambda;
              push(c);
            }
          }
        } else {
          c.gamma = 0.0;
          for (double lambda : spec.lambdas) {
            c.lambda = lambda;
            push(c);
          }
        }
      }
    }
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Aggregation

AnchorPeriods anchors_for(const ScenarioConfig& config) {
  AnchorPeriods a;
  a.before = config.shock_period;
  a.after = config.shock_period + 1;
  a.mid = std::min(2 * config.shock_period, config.horizon);
  a.end = config.horizon;
  return a;
}

RunRecord make_run_record(const RunTrace& trace, std::size_t run, const AnchorPeriods& anchors) {
  const auto& p = trace.normalized;
  return {run, trace.seed, p.at(anchors.before), p.at(anchors.after), p.at(anchors.mid),
          p.at(anchors.end)};
}

double mean_normalized(std::span<const RunTrace> traces, std::size_t t) {
  if (traces.empty()) throw std::invalid_argument("mean_normalized: no traces");
  double sum = 0.0;
  for (const RunTrace& tr : traces) sum += tr.normalized.at(t);
  return sum / static_cast<double>(traces.size());
}

ScenarioResult aggregate(const ScenarioConfig& config, std::span<const RunTrace> traces) {
  if (traces.empty()) throw std::invalid_argument("aggregate: no traces");
  const std::size_t periods = traces.front().normalized.size();
  for (const RunTrace& tr : traces) {
    if (tr.normalized.size() != periods) throw std::invalid_argument("traces differ in horizon");
  }
  ScenarioResult result;
  result.config = config;
  const AnchorPeriods anchors = anchors_for(config);
  result.runs.reserve(traces.size());
  for (std::size_t r = 0; r < traces.size(); ++r) {
    result.runs.push_back(make_run_record(traces[r], r, anchors));
  }
  result.series.resize(periods);
  for (std::size_t t = 0; t < periods; ++t) result.series[t] = mean_normalized(traces, t);
  return result;
}

Deltas deltas(double before, double after) noexcept {
  return {after - before, (after - before) / before};
}

Deltas deltas(std::span<const double> series, std::size_t tau, std::size_t t) {
  if (tau >= series.size() || t >= series.size()) {
    throw std::out_of_range("deltas: period outside the horizon");
  }
  return deltas(series[tau], series[t]);
}

std::vector<double> anchor_column(std::span<const RunRecord> runs, double RunRecord::*field) {
  std::vector<double> out;
  out.reserve(runs.size());
  for (const RunRecord& r : runs) out.push_back(r.*field);
  return out;
}

std::vector<double> shock_drops(std::span<const RunRecord> runs) {
  std::vector<double> out;
  out.reserve(runs.size());
  for (const RunRecord& r : runs) out.push_back(r.p51 - r.p50);
  return out;
}

// ---------------------------------------------------------------------------
// Tables

namespace {

double column_mean(std::span<const RunRecord> runs, double RunRecord::*field) {
  const auto col = anchor_column(runs, field);
  return mean(col);
}

const ScenarioResult* find_benchmark(std::span<const ScenarioResult> results,
                                     const LabelParts& parts) {
  for (const ScenarioResult& r : results) {
    if (r.config.mode != Mode::top_down) continue;
    const LabelParts bp = label_parts(r.config);
    if (bp.shock == parts.shock && bp.pattern == parts.pattern &&
        bp.incentive == parts.incentive) {
      return &r;
    }
  }
  return nullptr;
}

std::string pct(double rel) { return format_fixed(100.0 * rel, 2) + "%"; }

}  // namespace

std::vector<AbsorbRow> absorb_rows(std::span<const ScenarioResult> results, bool welch) {
  std::vector<AbsorbRow> rows;
  for (const ScenarioResult& bu : results) {
    if (bu.config.mode != Mode::bottom_up) continue;
    AbsorbRow row;
    row.parts = label_parts(bu.config);
    const ScenarioResult* bm = find_benchmark(results, row.parts);
    if (!bm) {
      throw std::invalid_argument("incomplete grid: no benchmark for " + row.parts.joined());
    }
    row.bu_p50 = column_mean(bu.runs, &RunRecord::p50);
    row.bu_p51 = column_mean(bu.runs, &RunRecord::p51);
    row.bu_delta = row.bu_p51 - row.bu_p50;
    row.bm_p50 = column_mean(bm->runs, &RunRecord::p50);
    row.bm_p51 = column_mean(bm->runs, &RunRecord::p51);
    row.bm_delta = row.bm_p51 - row.bm_p50;
    row.test = t_test_independent(shock_drops(bu.runs), shock_drops(bm->runs), welch);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RecoveryRow> recovery_rows(std::span<const ScenarioResult> results) {
  std::vector<RecoveryRow> rows;
  for (Mode mode : {Mode::bottom_up, Mode::top_down}) {
    for (const ScenarioResult& r : results) {
      if (r.config.mode != mode) continue;
      RecoveryRow row;
      row.benchmark = mode == Mode::top_down;
      row.parts = label_parts(r.config);
      const auto p50 = anchor_column(r.runs, &RunRecord::p50);
      const auto p100 = anchor_column(r.runs, &RunRecord::p100);
      const auto p200 = anchor_column(r.runs, &RunRecord::p200);
      row.p50 = mean(p50);
      row.p100 = mean(p100);
      row.p200 = mean(p200);
      row.d100 = deltas(row.p50, row.p100);
      row.d200 = deltas(row.p50, row.p200);
      row.test100 = t_test_paired(p50, p100);
      row.test200 = t_test_paired(p50, p200);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

RenderedTables render_tables(std::span<const ScenarioResult> results, bool welch) {
  if (results.empty()) throw std::invalid_argument("incomplete grid: no scenarios");
  const auto absorb = absorb_rows(results, welch);
  const auto recovery = recovery_rows(results);
  if (absorb.empty()) throw std::invalid_argument("incomplete grid: no bottom-up scenarios");
  auto r = [](double v) { return format_roundtrip(v); };
  auto f3 = [](double v) { return format_fixed(v, 3); };

  RenderedTables out;
  {
    std::ostringstream csv, md;
    csv << "shock,pattern,task_alloc,incentive,bu_p50,bu_p51,bu_delta,bm_p50,bm_p51,bm_delta,"
           "t,df,p,sign\n";
    md << "| Shock | Pattern | Task alloc. | Incentive | BU P50 | BU P51 | BU Δ50:51 | BM P50 "
          "| BM P51 | BM Δ50:51 | Sign. |\n";
    md << "|---|---|---|---|---:|---:|---:|---:|---:|---:|---|\n";
    for (const AbsorbRow& row : absorb) {
      const auto& p = row.parts;
      const auto stars = significance_stars(row.test.p);
      csv << p.shock << ',' << p.pattern << ',' << p.alloc << ',' << p.incentive << ','
          << r(row.bu_p50) << ',' << r(row.bu_p51) << ',' << r(row.bu_delta) << ','
          << r(row.bm_p50) << ',' << r(row.bm_p51) << ',' << r(row.bm_delta) << ','
          << r(row.test.t) << ',' << r(row.test.df) << ',' << r(row.test.p) << ',' << stars
          << '\n';
      md << "| " << p.shock << " | " << p.pattern << " | " << p.alloc << " | " << p.incentive
         << " | " << f3(row.bu_p50) << " | " << f3(row.bu_p51) << " | " << f3(row.bu_delta)
         << " | " << f3(row.bm_p50) << " | " << f3(row.bm_p51) << " | " << f3(row.bm_delta)
         << " | " << stars << " |\n";
    }
    out.table2_csv = csv.str();
    out.table2_md = md.str();
  }
  {
    std::ostringstream csv, md;
    csv << "section,shock,pattern,task_alloc,incentive,p50,p100,drel_50_100,t_100,p_100,sign_100,"
           "p200,drel_50_200,t_200,p_200,sign_200\n";
    md << "| Section | Shock | Pattern | Task alloc. | Incentive | P50 | P100 | Δrel50:100 | "
          "Sign. | P200 | Δrel50:200 | Sign. |\n";
    md << "|---|---|---|---|---|---:|---:|---:|---|---:|---:|---|\n";
    for (const RecoveryRow& row : recovery) {
      const auto& p = row.parts;
      const char* section = row.benchmark ? "benchmark" : "bottom-up";
      const std::string alloc = row.benchmark ? "n.a." : p.alloc;
      const auto s100 = significance_stars(row.test100.p);
      const auto s200 = significance_stars(row.test200.p);
      csv << section << ',' << p.shock << ',' << p.pattern << ',' << alloc << ',' << p.incentive
          << ',' << r(row.p50) << ',' << r(row.p100) << ',' << r(row.d100.relative) << ','
          << r(row.test100.t) << ',' << r(row.test100.p) << ',' << s100 << ',' << r(row.p200)
          << ',' << r(row.d200.relative) << ',' << r(row.test200.t) << ',' << r(row.test200.p)
          << ',' << s200 << '\n';
      md << "| " << section << " | " << p.shock << " | " << p.pattern << " | " << alloc << " | "
         << p.incentive << " | " << f3(row.p50) << " | " << f3(row.p100) << " | "
         << pct(row.d100.relative) << " | " << s100 << " | " << f3(row.p200) << " | "
         << pct(row.d200.relative) << " | " << s200 << " |\n";
    }
    out.table3_csv = csv.str();
    out.table3_md = md.str();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

constexpr std::string_view kRunsHeader = "run,seed,p50,p51,p100,p200";

template <typename T>
T parse_field(std::string_view text, std::size_t line) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::runtime_error("runs.csv line " + std::to_string(line) + ": bad field '" +
                             std::string(text) + "'");
  }
  return value;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

ordered_json scenario_to_json(const ScenarioConfig& c) {
  ordered_json j;
  j["label"] = c.label;
  j["mode"] = std::string(to_string(c.mode));
  j["rho"] = c.rho;
  j["pattern"] = std::string(to_string(c.pattern));
  j["pattern_file"] = c.pattern_file ? c.pattern_file->string() : std::string();
  j["gamma"] = c.gamma;
  j["lambda"] = c.lambda;
  j["n_tasks"] = c.n_tasks;
  j["n_agents"] = c.n_agents;
  j["capacity"] = c.capacity;
  j["realloc_interval"] = c.realloc_interval;
  j["shock_period"] = c.shock_period;
  j["horizon"] = c.horizon;
  j["runs"] = c.runs;
  j["master_seed"] = c.master_seed;
  j["belief_update"] = std::string(to_string(c.switches.belief_update));
  j["search"] = std::string(to_string(c.switches.search));
  j["residual_view"] = std::string(to_string(c.switches.residual_view));
  j["realloc_position"] = std::string(to_string(c.switches.realloc_position));
  j["shock"] = c.switches.shock;
  j["initial_allocation"] = std::string(to_string(c.switches.initial_allocation));
  const AnchorPeriods a = anchors_for(c);
  j["anchors"] = {a.before, a.after, a.mid, a.end};
  return j;
}

ScenarioConfig scenario_from_json(const ordered_json& j) {
  ScenarioConfig c;
  c.label = j.at("label").get<std::string>();
  c.mode = parse_mode(j.at("mode").get<std::string>());
  c.rho = j.at("rho").get<double>();
  c.pattern = parse_pattern_kind(j.at("pattern").get<std::string>());
  if (auto f = j.at("pattern_file").get<std::string>(); !f.empty()) c.pattern_file = f;
  c.gamma = j.at("gamma").get<double>();
  c.lambda = j.at("lambda").get<double>();
  c.n_tasks = j.at("n_tasks").get<std::size_t>();
  c.n_agents = j.at("n_agents").get<std::size_t>();
  c.capacity = j.at("capacity").get<std::size_t>();
  c.realloc_interval = j.at("realloc_interval").get<std::size_t>();
  c.shock_period = j.at("shock_period").get<std::size_t>();
  c.horizon = j.at("horizon").get<std::size_t>();
  c.runs = j.at("runs").get<std::size_t>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  c.switches.belief_update = parse_belief_update(j.at("belief_update").get<std::string>());
  c.switches.search = parse_search_mode(j.at("search").get<std::string>());
  c.switches.residual_view = parse_residual_view(j.at("residual_view").get<std::string>());
  c.switches.realloc_position =
      parse_realloc_position(j.at("realloc_position").get<std::string>());
  c.switches.shock = j.at("shock").get<bool>();
  c.switches.initial_allocation =
      parse_initial_allocation(j.at("initial_allocation").get<std::string>());
  return c;
}

}  // namespace

void write_runs_csv(std::ostream& out, std::span<const RunRecord> runs) {
  out << kRunsHeader << '\n';
  for (const RunRecord& r : runs) {
    out << r.run << ',' << r.seed << ',' << format_roundtrip(r.p50) << ','
        << format_roundtrip(r.p51) << ',' << format_roundtrip(r.p100) << ','
        << format_roundtrip(r.p200) << '\n';
  }
}

std::vector<RunRecord> read_runs_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRunsHeader) {
    throw std::runtime_error("runs.csv: missing header '" + std::string(kRunsHeader) + "'");
  }
  std::vector<RunRecord> runs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 6) {
      throw std::runtime_error("runs.csv line " + std::to_string(line_no) + ": expected 6 fields");
    }
    RunRecord r;
    r.run = parse_field<std::size_t>(fields[0], line_no);
    r.seed = parse_field<std::uint64_t>(fields[1], line_no);
    r.p50 = parse_field<double>(fields[2], line_no);
    r.p51 = parse_field<double>(fields[3], line_no);
    r.p100 = parse_field<double>(fields[4], line_no);
    r.p200 = parse_field<double>(fields[5], line_no);
    runs.push_back(r);
  }
  return runs;
}

void write_series_csv(std::ostream& out, std::span<const double> series) {
  out << "t,mean_normalized\n";
  for (std::size_t t = 0; t < series.size(); ++t) {
    out << t << ',' << format_roundtrip(series[t]) << '\n';
  }
}

std::string manifest_json(std::span<const ScenarioResult> results, const ManifestInfo& info) {
  ordered_json j;
  j["code_version"] = info.code_version;
  j["master_seed"] = info.master_seed;
  j["t_test"] = info.welch ? "welch" : "student";
  j["scenarios"] = ordered_json::array();
  for (const ScenarioResult& r : results) j["scenarios"].push_back(scenario_to_json(r.config));
  return j.dump(2) + "\n";
}

void write_tables(const std::filesystem::path& dir, std::span<const ScenarioResult> results,
                  bool welch) {
  const RenderedTables tables = render_tables(results, welch);
  write_file(dir / "table2.csv", tables.table2_csv);
  write_file(dir / "table2.md", tables.table2_md);
  write_file(dir / "table3.csv", tables.table3_csv);
  write_file(dir / "table3.md", tables.table3_md);
}

bool write_results(const std::filesystem::path& dir, std::span<const ScenarioResult> results,
                   const ManifestInfo& info) {
  std::filesystem::create_directories(dir);
  for (const ScenarioResult& r : results) {
    const auto sub = dir / r.config.label;
    std::filesystem::create_directories(sub);
    std::ostringstream runs;
    write_runs_csv(runs, r.runs);
    write_file(sub / "runs.csv", runs.str());
    std::ostringstream series;
    write_series_csv(series, r.series);
    write_file(sub / "series.csv", series.str());
  }
  bool tables = true;
  try {
    write_tables(dir, results, info.welch);
  } catch (const std::invalid_argument&) {
    tables = false;
  }
  write_file(dir / "manifest.json", manifest_json(results, info));
  return tables;
}

std::vector<ScenarioResult> load_results(const std::filesystem::path& dir, ManifestInfo& info) {
  const auto manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) {
    throw std::runtime_error("no sweep results in " + dir.string() +
                             " (manifest.json not found); run `sweep` first");
  }
  ordered_json j;
  try {
    j = ordered_json::parse(in);
    info.code_version = j.at("code_version").get<std::string>();
    info.master_seed = j.at("master_seed").get<std::uint64_t>();
    info.welch = j.at("t_test").get<std::string>() == "welch";
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed manifest.json: " + std::string(e.what()));
  }
  std::vector<ScenarioResult> results;
  for (const auto& s : j.at("scenarios")) {
    ScenarioResult r;
    r.config = scenario_from_json(s);
    const auto runs_path = dir / r.config.label / "runs.csv";
    std::ifstream runs(runs_path);
    if (!runs) throw std::runtime_error("incomplete sweep: missing " + runs_path.string());
    r.runs = read_runs_csv(runs);
    if (r.runs.size() != r.config.runs) {
      throw std::runtime_error("incomplete sweep: " + runs_path.string() + " holds " +
                               std::to_string(r.runs.size()) + " of " +
                               std::to_string(r.config.runs) + " runs");
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace orgsim
