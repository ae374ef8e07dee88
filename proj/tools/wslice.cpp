// wslice: train, evaluate and sweep network-slicing policies.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 missing artifact.

#include <iostream>

#include "CLI11.hpp"
#include "wslice/app.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitMissing = 3;

void add_common(CLI::App* cmd, wslice::CommonOptions& common) {
  cmd->add_option("--config", common.config_path, "JSON config file (defaults when omitted)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", common.seed, "root seed for realizations and training");
  cmd->add_option("--threads", common.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--literal-latency", common.literal_latency, "packet-normalized latency mode");
  cmd->add_option("--log-base", common.log_base, "Shannon rate logarithm")->check(CLI::IsMember({"2", "e"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network slicing with state-augmented primal-dual learning"};
  app.set_version_flag("--version", wslice::version_string());
  app.require_subcommand(1);

  wslice::CommonOptions common;

  wslice::TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "train a slicing policy");
  add_common(train_cmd, common);
  train_cmd->add_option("--algo", train.algo, "sapd or pd")->check(CLI::IsMember({"sapd", "pd"}));
  train_cmd->add_option("--epochs", train.epochs, "override the number of epochs");
  train_cmd->add_option("--out", train.out_dir, "output directory");
  train_cmd->add_flag("--wall-time", train.record_wall_time, "record wall-clock seconds in epochs.csv");
  train_cmd->add_flag("-v,--verbose", train.verbose, "print per-epoch progress");

  wslice::EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a method on test realizations");
  add_common(eval_cmd, common);
  eval_cmd->add_option("--method", eval.method, "sapd, pd, uniform, proportional or tw");
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "checkpoint for learned methods");
  eval_cmd->add_option("--num-test", eval.num_test, "number of test realizations");
  eval_cmd->add_option("--out", eval.out_dir, "output directory");
  eval_cmd->add_option("--slot-log", eval.slot_log, "write the per-slot schedule of the first realization");

  wslice::SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "violation table over QoS targets");
  add_common(sweep_cmd, common);
  sweep_cmd->add_option("--method", sweep.methods, "methods to compare")->delimiter(',');
  sweep_cmd->add_option("--checkpoint-sapd", sweep.checkpoint_sapd, "SA-PD checkpoint");
  sweep_cmd->add_option("--checkpoint-pd", sweep.checkpoint_pd, "PD checkpoint");
  sweep_cmd->add_option("--grid", sweep.grid, "QoS points r_min:ell_max[,...]");
  sweep_cmd->add_option("--num-test", sweep.num_test, "number of test realizations");
  sweep_cmd->add_option("--out", sweep.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const auto config = wslice::resolve_config(common);
    if (*train_cmd) {
      wslice::cmd_train(config, train);
    } else if (*eval_cmd) {
      wslice::cmd_eval(config, eval);
    } else if (*sweep_cmd) {
      wslice::cmd_sweep(config, sweep);
    }
  } catch (const wslice::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const wslice::MissingArtifactError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMissing;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
