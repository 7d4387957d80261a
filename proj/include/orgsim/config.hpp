#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orgsim/experiments.hpp"

namespace orgsim {

/// Any problem with configuration input: unknown key, bad syntax, value
/// outside its domain.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `[selector]` block: keys applied to every scenario whose label contains
/// the selector.
struct ScenarioOverride {
  std::string selector;
  std::vector<std::pair<std::string, std::string>> values;
};

/// Contents of a `key = value` config file.
///
///   # comment
///   runs = 100
///   rho = -0.5, 0.5
///   [non-modular]
///   capacity = 5
struct FileConfig {
  GridSpec grid;
  std::optional<std::size_t> workers;
  std::optional<std::filesystem::path> out;
  bool welch = false;
  std::vector<ScenarioOverride> sections;
};

FileConfig parse_config_text(std::istream& in);

/// Command-line values; any that are set win over the file.
struct FlagOverrides {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::size_t> runs;
  std::vector<std::string> filters;
};

struct ResolvedConfig {
  GridSpec grid;
  std::vector<ScenarioOverride> sections;
  /// Grid after sections and filters.
  std::vector<ScenarioConfig> scenarios;
  std::filesystem::path out_dir;
  std::size_t workers = 1;
  std::vector<std::string> filters;
  bool welch = false;
};

/// Merge file and flags, build the grid, apply sections and filters. The
/// output directory falls back to $ORGSIM_OUT, then "results".
ResolvedConfig resolve_config(FileConfig file, const FlagOverrides& flags);

/// Reads flags.config (when set) and resolves it.
ResolvedConfig parse_config(const FlagOverrides& flags);

}  // namespace orgsim
