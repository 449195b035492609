// Scenario files are JSON documents; see scenarios/ and README.md for the
// key reference. Overrides address keys by dot path ("schedule.lambda_s").

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "coverage/sim_engine.hpp"

namespace coverage {

/// Bad or missing scenario key; key() is the dot path of the offender.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error("config key '" + key + "': " + what), key_(std::move(key)) {}
  [[nodiscard]] const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

[[nodiscard]] nlohmann::json load_json(const std::filesystem::path& path);

/// Sets `dot_path` to `value`, parsed as JSON when possible (numbers, lists,
/// booleans) and as a string otherwise. Intermediate objects are created.
void apply_override(nlohmann::json& doc, std::string_view dot_path, std::string_view value);
/// "key=value" form.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Unknown keys are rejected so a typo cannot silently fall back to a default.
[[nodiscard]] ScenarioConfig parse_scenario(const nlohmann::json& doc);
[[nodiscard]] ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace coverage
