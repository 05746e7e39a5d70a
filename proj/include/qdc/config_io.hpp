#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qdc/system.hpp"

namespace qdc {

/// Sweep options read from the optional "sweep" section of a config file.
struct SweepSettings {
  enum class Normalization { PerRow, Global };
  Normalization normalization = Normalization::PerRow;
  int power_points = 41;
  double max_splitting = 300.0;        // ueV, splitting reached by the strongest power row
  int detuning_points = 41;
  double detuning_span = 4 * 74.0;     // laser detuning covers [-span, +span] (ueV)
  double zero_detuning_splitting = 60.0;
};

std::string to_string(SweepSettings::Normalization n);
SweepSettings::Normalization parse_normalization(const std::string& name);

nlohmann::json to_json(const SystemConfig& cfg);
SystemConfig config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SweepSettings& s);
SweepSettings sweep_settings_from_json(const nlohmann::json& j);

/// Reads a config file; a missing key keeps its default, an unknown key is a ConfigError.
/// Keys beginning with '_' are treated as comments.
SystemConfig load_config(const std::filesystem::path& path);
SweepSettings load_sweep_settings(const std::filesystem::path& path);

/// 16 hex digits (FNV-1a 64) of the canonical JSON form; changes with any field.
std::string config_hash(const SystemConfig& cfg);

}  // namespace qdc
