#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace serilin {

/// Raised for configs that violate the published schema (CLI exit code 2).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kConfigSchemaVersion = 1;

struct Preset {
  std::string name;
  std::string description;
  nlohmann::json config;
};

/// Bundled scenarios in stable order.
const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

/// JSON Schema (draft 2020-12) for run configs, generated from the same
/// parameter table the validator uses.
nlohmann::json config_schema();

/// Fills defaults and checks types, ranges and unknown keys. Throws ConfigError.
nlohmann::json normalize_config(const nlohmann::json& config);

struct RunOutcome {
  std::filesystem::path directory;
  std::vector<std::string> artifacts;
  nlohmann::json summary;
  std::vector<std::string> warnings;
  double wallSeconds = 0.0;
};

/// Runs a normalized config, writing CSV artifacts and manifest.json into `directory`.
/// A seed override replaces the config's seed before the run.
RunOutcome run_experiment(const nlohmann::json& config, const std::filesystem::path& directory,
                          std::optional<std::uint64_t> seedOverride = std::nullopt);

}  // namespace serilin
