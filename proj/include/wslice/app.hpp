#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wslice/json_io.hpp"
#include "wslice/report.hpp"

namespace wslice {

/// Overrides applied on top of a config file.
struct CommonOptions {
  std::optional<std::filesystem::path> config_path;
  std::optional<std::uint64_t> seed;  ///< root seed for realizations and training
  std::optional<int> threads;
  bool literal_latency = false;
  std::optional<std::string> log_base;  ///< "2" or "e"
};

/// Loads the config (defaults when no path) and applies the overrides.
RunConfig resolve_config(const CommonOptions& options);

struct TrainOptions {
  std::string algo = "sapd";
  std::optional<int> epochs;
  std::filesystem::path out_dir = "runs/train";
  bool record_wall_time = false;
  bool verbose = false;
};

/// Writes checkpoint.json, epochs.csv and summary.json into out_dir.
Checkpoint cmd_train(const RunConfig& config, const TrainOptions& options);

/// Builds a method; learned methods load their checkpoint (MissingArtifactError when absent).
Method make_method(const std::string& name, const std::optional<std::filesystem::path>& checkpoint);

struct EvalOptions {
  std::string method = "uniform";
  std::optional<std::filesystem::path> checkpoint;
  std::optional<int> num_test;
  std::filesystem::path out_dir = "runs/eval";
  std::optional<std::filesystem::path> slot_log;  ///< per-slot trace of the first realization
};

/// Writes trajectories.jsonl, table.csv, curves.csv and summary.json into out_dir.
std::vector<Trajectory> cmd_eval(const RunConfig& config, const EvalOptions& options);

struct SweepOptions {
  std::vector<std::string> methods{"sapd", "pd", "uniform", "proportional", "tw"};
  std::optional<std::filesystem::path> checkpoint_sapd;
  std::optional<std::filesystem::path> checkpoint_pd;
  std::string grid = "0.7:5,0.9:10,0.9:20,1.0:10";
  std::optional<int> num_test;
  std::filesystem::path out_dir = "runs/sweep";
};

/// Writes table.csv and summary.json into out_dir.
std::vector<SweepRow> cmd_sweep(const RunConfig& config, const SweepOptions& options);

/// "wslice <version>".
std::string version_string();

}  // namespace wslice
