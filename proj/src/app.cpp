#include "wslice/app.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "wslice/execution.hpp"
#include "wslice/training.hpp"

namespace wslice {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

json run_metadata(const RunConfig& config, const char* command) {
  return json{{"command", command},
              {"version", version_string()},
              {"config_hash", fnv1a_hex(to_json(config))},
              {"seeds", {{"root", config.network.rng_seed}, {"training", config.training.seed}}}};
}

json rates_json(const ViolationRates& v) {
  return json{{"h_inst", v.h_inst}, {"h_erg", v.h_erg}, {"l_inst", v.l_inst}, {"l_erg", v.l_erg}};
}

int test_count(const RunConfig& config, const std::optional<int>& override_count) {
  const int n = override_count.value_or(config.training.num_test);
  if (n < 2) throw ConfigError("--num-test must be at least 2");
  return n;
}

std::unique_ptr<Controller> make_controller(const Method& method, const NetworkConfig& network, double eta) {
  switch (method.kind) {
    case MethodKind::StateAugmented:
      return std::make_unique<StateAugmentedController>(*method.params, network.dual_period, eta);
    case MethodKind::PrimalDual:
      return std::make_unique<FixedMultiplierController>(*method.params, method.lambda);
    case MethodKind::Baseline:
      break;
  }
  return std::make_unique<BaselineController>(method.baseline);
}

}  // namespace

std::string version_string() { return std::string("wslice ") + WSLICE_VERSION; }

RunConfig resolve_config(const CommonOptions& options) {
  RunConfig config = options.config_path ? load_run_config(*options.config_path) : RunConfig{};
  if (options.seed) {
    config.network.rng_seed = *options.seed;
    config.training.seed = *options.seed;
  }
  if (options.threads) config.training.threads = *options.threads;
  if (options.literal_latency) config.network.latency_mode = LatencyMode::Literal;
  if (options.log_base) {
    if (*options.log_base == "2") config.network.log_base = LogBase::Two;
    else if (*options.log_base == "e") config.network.log_base = LogBase::E;
    else throw ConfigError("--log-base must be 2 or e");
  }
  require_valid(config.network);
  if (const auto errors = validate_train_config(config.training); !errors.empty()) {
    std::string msg = "invalid training config:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return config;
}

Checkpoint cmd_train(const RunConfig& config_in, const TrainOptions& options) {
  RunConfig config = config_in;
  if (options.epochs) {
    if (*options.epochs < 0) throw ConfigError("--epochs must be nonnegative");
    config.training.num_epochs = *options.epochs;
  }
  if (options.algo != "sapd" && options.algo != "pd") throw ConfigError("--algo must be sapd or pd");

  const auto& tc = config.training;
  const auto sets = make_realization_sets(config.network.rng_seed, config.network, tc.num_train, tc.num_val, 0);

  EpochCallback log_epoch;
  if (options.verbose) {
    log_epoch = [](const EpochLog& e) {
      std::cerr << "epoch " << e.epoch << " obj " << e.val_objective << " f_h " << e.val_f_h << " f_l " << e.val_f_l
                << " lambda_max (" << e.lambda_max.lambda_h << ", " << e.lambda_max.lambda_l << ") "
                << e.wall_time << "s\n";
    };
  }

  Checkpoint ckpt;
  ckpt.algo = options.algo;
  ckpt.seed = tc.seed;
  TrainResult result = options.algo == "sapd" ? train_state_augmented(sets.train, sets.validation, tc, log_epoch)
                                              : train_vanilla_pd(sets.train, tc, sets.validation, log_epoch);
  ckpt.params = std::move(result.params);
  if (options.algo == "sapd") {
    ckpt.lambda_max = result.lambda_max;
  } else {
    ckpt.lambda = result.final_lambda;
    ckpt.lambda_max = result.final_lambda;
  }

  std::filesystem::create_directories(options.out_dir);
  save_checkpoint(options.out_dir / "checkpoint.json", ckpt);
  {
    auto out = open_out(options.out_dir / "epochs.csv");
    write_epochs_csv(out, result.log, options.record_wall_time);
  }
  json summary = run_metadata(config, "train");
  summary["algo"] = options.algo;
  summary["epochs"] = tc.num_epochs;
  summary["num_train"] = tc.num_train;
  summary["num_val"] = tc.num_val;
  summary["lambda"] = {ckpt.lambda.lambda_h, ckpt.lambda.lambda_l};
  summary["lambda_max"] = {ckpt.lambda_max.lambda_h, ckpt.lambda_max.lambda_l};
  write_text_file(options.out_dir / "summary.json", summary.dump(2) + "\n");
  return ckpt;
}

Method make_method(const std::string& name, const std::optional<std::filesystem::path>& checkpoint) {
  Method m;
  m.name = name;
  if (name == "sapd" || name == "pd") {
    m.kind = name == "sapd" ? MethodKind::StateAugmented : MethodKind::PrimalDual;
    if (!checkpoint) throw MissingArtifactError("method '" + name + "' needs a checkpoint");
    Checkpoint ckpt = load_checkpoint(*checkpoint);
    if (ckpt.algo != name)
      throw ConfigError("checkpoint " + checkpoint->string() + " was trained with '" + ckpt.algo + "', not '" +
                        name + "'");
    m.params = std::move(ckpt.params);
    m.lambda = ckpt.lambda;
    return m;
  }
  const auto kind = parse_baseline(name);
  if (!kind) throw ConfigError("unknown method '" + name + "' (expected sapd, pd, uniform, proportional or tw)");
  m.kind = MethodKind::Baseline;
  m.baseline = *kind;
  return m;
}

std::vector<Trajectory> cmd_eval(const RunConfig& config, const EvalOptions& options) {
  const Method method = make_method(options.method, options.checkpoint);
  const int n = test_count(config, options.num_test);
  const auto test_set = make_test_set(config.network.rng_seed, config.network, n);
  const double eta = config.training.dual_step;
  auto runs = evaluate_method(method, test_set, eta, config.training.threads);

  std::filesystem::create_directories(options.out_dir);
  {
    auto out = open_out(options.out_dir / "trajectories.jsonl");
    write_trajectory_jsonl(out, runs);
  }
  const ViolationRates rates = violation_rates(runs, config.network.qos);
  {
    auto out = open_out(options.out_dir / "table.csv");
    const SweepRow row{method.name, config.network.qos, rates};
    write_table_csv(out, std::span(&row, 1));
  }
  {
    auto out = open_out(options.out_dir / "curves.csv");
    write_curves_csv(out, method.name, aggregate_curves(runs));
  }
  if (options.slot_log) {
    std::vector<SlotEvent> events;
    auto controller = make_controller(method, config.network, eta);
    rollout(Episode(test_set.front()), *controller, &events);
    auto out = open_out(*options.slot_log);
    write_slot_log_csv(out, events);
  }

  json summary = run_metadata(config, "eval");
  summary["method"] = method.name;
  summary["num_test"] = n;
  summary["num_windows"] = config.network.num_windows;
  summary["qos"] = {{"r_min", config.network.qos.r_min}, {"ell_max", config.network.qos.ell_max}};
  summary["violations"] = rates_json(rates);
  write_text_file(options.out_dir / "summary.json", summary.dump(2) + "\n");
  return runs;
}

std::vector<SweepRow> cmd_sweep(const RunConfig& config, const SweepOptions& options) {
  if (options.methods.empty()) throw ConfigError("no methods to sweep");
  for (const auto& name : options.methods) {
    if (name != "sapd" && name != "pd" && !parse_baseline(name))
      throw ConfigError("unknown method '" + name + "' (expected sapd, pd, uniform, proportional or tw)");
  }
  const auto grid = parse_qos_grid(options.grid);
  std::vector<Method> methods;
  for (const auto& name : options.methods) {
    const auto& ckpt = name == "sapd" ? options.checkpoint_sapd : options.checkpoint_pd;
    methods.push_back(make_method(name, ckpt));
  }
  const int n = test_count(config, options.num_test);
  const auto test_set = make_test_set(config.network.rng_seed, config.network, n);
  auto rows = sweep_table(methods, grid, test_set, config.training.dual_step, config.training.threads);

  std::filesystem::create_directories(options.out_dir);
  {
    auto out = open_out(options.out_dir / "table.csv");
    write_table_csv(out, rows);
  }
  json summary = run_metadata(config, "sweep");
  summary["methods"] = options.methods;
  summary["grid"] = options.grid;
  summary["num_test"] = n;
  json table = json::array();
  for (const auto& row : rows) {
    json entry = rates_json(row.rates);
    entry["method"] = row.method;
    entry["r_min"] = row.qos.r_min;
    entry["ell_max"] = row.qos.ell_max;
    table.push_back(entry);
  }
  summary["rows"] = table;
  write_text_file(options.out_dir / "summary.json", summary.dump(2) + "\n");
  return rows;
}

}  // namespace wslice
