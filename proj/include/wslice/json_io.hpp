#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "wslice/domain.hpp"
#include "wslice/policy.hpp"
#include "wslice/training.hpp"

namespace wslice {

/// Configuration file: a "network" object (NetworkConfig fields) and an
/// optional "training" object (TrainConfig fields). Missing fields keep their
/// defaults; unknown fields are rejected.
struct RunConfig {
  NetworkConfig network;
  TrainConfig training;
};

std::string to_json(const NetworkConfig& config, int indent = 2);
NetworkConfig network_config_from_json(std::string_view text);

std::string to_json(const NetworkRealization& realization, int indent = 2);
NetworkRealization realization_from_json(std::string_view text);

std::string to_json(const RunConfig& config, int indent = 2);
RunConfig run_config_from_json(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

inline constexpr int kCheckpointFormatVersion = 1;

/// Policy checkpoint with the metadata execution needs.
struct Checkpoint {
  PolicyParams params;
  std::string algo = "sapd";    ///< "sapd" or "pd"
  DualMultipliers lambda;       ///< PD execution multiplier
  DualMultipliers lambda_max;   ///< SA-PD sampling bound at the end of training
  std::uint64_t seed = 0;
};

std::string to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(std::string_view text);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
/// Throws MissingArtifactError when the file does not exist, ConfigError when malformed.
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// FNV-1a 64-bit, printed as 16 hex digits. Used as a stable config hash.
std::string fnv1a_hex(std::string_view data);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace wslice
