#include "wslice/json_io.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

namespace wslice {

using nlohmann::json;

namespace {

/// Reads keys of one JSON object into fields, rejecting keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string context) : j_(j), context_(std::move(context)) {
    if (!j_.is_object()) throw ConfigError(context_ + ": expected a JSON object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(context_ + "." + key + ": " + e.what());
    }
  }

  [[nodiscard]] const json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.contains(key)) throw ConfigError(context_ + ": unknown field '" + key + "'");
    }
  }

 private:
  const json& j_;
  std::string context_;
  std::set<std::string> seen_;
};

json parse(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

json interval_json(const Interval& v) { return json::array({v.lo, v.hi}); }

Interval interval_from(const json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(context + ": expected [lo, hi]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json per_sla_json(const std::array<Interval, kNumSlices>& v) {
  json out = json::object();
  for (auto sla : kAllSlas) out[std::string(to_string(sla))] = interval_json(v[index_of(sla)]);
  return out;
}

std::array<Interval, kNumSlices> per_sla_from(const json& j, std::array<Interval, kNumSlices> base,
                                              const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + ": expected an object keyed by H, L, B");
  for (const auto& [key, value] : j.items()) {
    const auto sla = parse_sla(key);
    if (!sla) throw ConfigError(context + ": unknown SLA key '" + key + "'");
    base[index_of(*sla)] = interval_from(value, context + "." + key);
  }
  return base;
}

json network_json(const NetworkConfig& c) {
  return json{
      {"bandwidth_hz", c.bandwidth_hz},
      {"num_flows", c.num_flows},
      {"num_windows", c.num_windows},
      {"dual_period", c.dual_period},
      {"window_duration", c.window_duration},
      {"slot_duration", c.slot_duration},
      {"packet_size_bits", c.packet_size_bits},
      {"queue_capacity_packets", c.queue_capacity_packets},
      {"noise_power", c.noise_power},
      {"qos", {{"r_min", c.qos.r_min}, {"ell_max", c.qos.ell_max}}},
      {"rng_seed", c.rng_seed},
      {"log_base", c.log_base == LogBase::Two ? "2" : "e"},
      {"latency_mode", c.latency_mode == LatencyMode::Conventional ? "conventional" : "literal"},
      {"mean_snr_db", interval_json(c.mean_snr_db)},
      {"rate_walk_std", c.rate_walk_std},
      {"initial_rate", per_sla_json(c.initial_rate)},
      {"rate_bounds", per_sla_json(c.rate_bounds)},
  };
}

NetworkConfig network_from(const json& j) {
  NetworkConfig c;
  ObjectReader r(j, "network");
  r.get("bandwidth_hz", c.bandwidth_hz);
  r.get("num_flows", c.num_flows);
  r.get("num_windows", c.num_windows);
  r.get("dual_period", c.dual_period);
  r.get("window_duration", c.window_duration);
  r.get("slot_duration", c.slot_duration);
  r.get("packet_size_bits", c.packet_size_bits);
  r.get("queue_capacity_packets", c.queue_capacity_packets);
  r.get("noise_power", c.noise_power);
  r.get("rng_seed", c.rng_seed);
  r.get("rate_walk_std", c.rate_walk_std);
  if (const json* q = r.child("qos")) {
    ObjectReader qr(*q, "network.qos");
    qr.get("r_min", c.qos.r_min);
    qr.get("ell_max", c.qos.ell_max);
    qr.finish();
  }
  if (const json* b = r.child("log_base")) {
    const std::string s = b->is_string() ? b->get<std::string>() : b->dump();
    if (s == "2") c.log_base = LogBase::Two;
    else if (s == "e") c.log_base = LogBase::E;
    else throw ConfigError("network.log_base must be \"2\" or \"e\"");
  }
  if (const json* m = r.child("latency_mode")) {
    const std::string s = m->is_string() ? m->get<std::string>() : "";
    if (s == "conventional") c.latency_mode = LatencyMode::Conventional;
    else if (s == "literal") c.latency_mode = LatencyMode::Literal;
    else throw ConfigError("network.latency_mode must be \"conventional\" or \"literal\"");
  }
  if (const json* s = r.child("mean_snr_db")) c.mean_snr_db = interval_from(*s, "network.mean_snr_db");
  if (const json* s = r.child("initial_rate")) c.initial_rate = per_sla_from(*s, c.initial_rate, "network.initial_rate");
  if (const json* s = r.child("rate_bounds")) c.rate_bounds = per_sla_from(*s, c.rate_bounds, "network.rate_bounds");
  r.finish();
  return c;
}

json training_json(const TrainConfig& c) {
  return json{
      {"num_epochs", c.num_epochs},
      {"batch_size", c.batch_size},
      {"learning_rate", c.learning_rate},
      {"lr_final_fraction", c.lr_final_fraction},
      {"dual_step_pd", c.dual_step_pd},
      {"dual_step", c.dual_step},
      {"lambda_max_init", json::array({c.lambda_max_init.lambda_h, c.lambda_max_init.lambda_l})},
      {"lambda_max_margin", c.lambda_max_margin},
      {"lambda_max_floor", c.lambda_max_floor},
      {"lambda_max_quantile", c.lambda_max_quantile},
      {"fd_epsilon", c.fd_epsilon},
      {"adam_beta1", c.adam_beta1},
      {"adam_beta2", c.adam_beta2},
      {"adam_epsilon", c.adam_epsilon},
      {"seed", c.seed},
      {"num_train", c.num_train},
      {"num_val", c.num_val},
      {"num_test", c.num_test},
      {"threads", c.threads},
  };
}

TrainConfig training_from(const json& j) {
  TrainConfig c;
  ObjectReader r(j, "training");
  r.get("num_epochs", c.num_epochs);
  r.get("batch_size", c.batch_size);
  r.get("learning_rate", c.learning_rate);
  r.get("lr_final_fraction", c.lr_final_fraction);
  r.get("dual_step_pd", c.dual_step_pd);
  r.get("dual_step", c.dual_step);
  if (const json* lm = r.child("lambda_max_init")) {
    const auto v = interval_from(*lm, "training.lambda_max_init");
    c.lambda_max_init = {v.lo, v.hi};
  }
  r.get("lambda_max_margin", c.lambda_max_margin);
  r.get("lambda_max_floor", c.lambda_max_floor);
  r.get("lambda_max_quantile", c.lambda_max_quantile);
  r.get("fd_epsilon", c.fd_epsilon);
  r.get("adam_beta1", c.adam_beta1);
  r.get("adam_beta2", c.adam_beta2);
  r.get("adam_epsilon", c.adam_epsilon);
  r.get("seed", c.seed);
  r.get("num_train", c.num_train);
  r.get("num_val", c.num_val);
  r.get("num_test", c.num_test);
  r.get("threads", c.threads);
  r.finish();
  return c;
}

json params_json(const PolicyParams& p) {
  json layers = json::array();
  for (const auto& layer : p.layers) {
    json weights = json::array();
    for (Eigen::Index row = 0; row < layer.weight.rows(); ++row)
      for (Eigen::Index col = 0; col < layer.weight.cols(); ++col) weights.push_back(layer.weight(row, col));
    json bias = json::array();
    for (Eigen::Index row = 0; row < layer.bias.size(); ++row) bias.push_back(layer.bias[row]);
    layers.push_back(json{{"in", layer.weight.cols()}, {"out", layer.weight.rows()}, {"weights", weights},
                          {"bias", bias}});
  }
  return layers;
}

PolicyParams params_from(const json& layers) {
  if (!layers.is_array() || layers.size() != kNumLayers)
    throw ConfigError("checkpoint: expected " + std::to_string(kNumLayers) + " layers");
  PolicyParams p = PolicyParams::zeros();
  for (std::size_t l = 0; l < kNumLayers; ++l) {
    const auto& j = layers[l];
    const std::string ctx = "checkpoint.layers[" + std::to_string(l) + "]";
    if (!j.is_object() || j.value("in", -1) != kLayerWidths[l] || j.value("out", -1) != kLayerWidths[l + 1])
      throw ConfigError(ctx + ": shape mismatch");
    const auto& w = j.at("weights");
    const auto& b = j.at("bias");
    auto& layer = p.layers[l];
    if (!w.is_array() || static_cast<Eigen::Index>(w.size()) != layer.weight.size() || !b.is_array() ||
        static_cast<Eigen::Index>(b.size()) != layer.bias.size())
      throw ConfigError(ctx + ": wrong number of entries");
    std::size_t k = 0;
    for (Eigen::Index row = 0; row < layer.weight.rows(); ++row)
      for (Eigen::Index col = 0; col < layer.weight.cols(); ++col) layer.weight(row, col) = w[k++].get<double>();
    for (Eigen::Index row = 0; row < layer.bias.size(); ++row) layer.bias[row] = b[static_cast<std::size_t>(row)].get<double>();
  }
  if (!p.all_finite()) throw ConfigError("checkpoint: non-finite parameter");
  return p;
}

json duals_json(const DualMultipliers& d) { return json::array({d.lambda_h, d.lambda_l}); }

DualMultipliers duals_from(const json& j, const std::string& ctx) {
  const auto v = interval_from(j, ctx);
  return {v.lo, v.hi};
}

}  // namespace

std::string to_json(const NetworkConfig& config, int indent) { return network_json(config).dump(indent); }

NetworkConfig network_config_from_json(std::string_view text) { return network_from(parse(text, "network config")); }

std::string to_json(const NetworkRealization& r, int indent) {
  json flows = json::array();
  for (const auto& f : r.flows) {
    flows.push_back(json{{"id", f.id},
                         {"sla", std::string(to_string(f.sla))},
                         {"mu_init", f.mu_init},
                         {"mean_snr_db", f.mean_snr_db}});
  }
  return json{{"config", network_json(r.config)},
              {"flows", flows},
              {"traffic_seed", r.traffic_seed},
              {"channel_seed", r.channel_seed}}
      .dump(indent);
}

NetworkRealization realization_from_json(std::string_view text) {
  const json j = parse(text, "realization");
  NetworkRealization r;
  ObjectReader reader(j, "realization");
  if (const json* c = reader.child("config")) r.config = network_from(*c);
  reader.get("traffic_seed", r.traffic_seed);
  reader.get("channel_seed", r.channel_seed);
  if (const json* flows = reader.child("flows")) {
    if (!flows->is_array()) throw ConfigError("realization.flows: expected an array");
    for (const auto& fj : *flows) {
      FlowSpec f;
      ObjectReader fr(fj, "realization.flows[]");
      fr.get("id", f.id);
      std::string sla = "B";
      fr.get("sla", sla);
      const auto parsed = parse_sla(sla);
      if (!parsed) throw ConfigError("realization.flows[]: unknown sla '" + sla + "'");
      f.sla = *parsed;
      fr.get("mu_init", f.mu_init);
      fr.get("mean_snr_db", f.mean_snr_db);
      fr.finish();
      r.flows.push_back(f);
    }
  }
  reader.finish();
  check_realization(r);
  return r;
}

std::string to_json(const RunConfig& c, int indent) {
  return json{{"network", network_json(c.network)}, {"training", training_json(c.training)}}.dump(indent);
}

RunConfig run_config_from_json(std::string_view text) {
  const json j = parse(text, "config");
  RunConfig c;
  ObjectReader r(j, "config");
  if (const json* n = r.child("network")) c.network = network_from(*n);
  if (const json* t = r.child("training")) c.training = training_from(*t);
  r.finish();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
  return run_config_from_json(read_text_file(path));
}

std::string to_json(const Checkpoint& ckpt) {
  return json{{"format_version", kCheckpointFormatVersion},
              {"algo", ckpt.algo},
              {"layer_widths", kLayerWidths},
              {"lambda", duals_json(ckpt.lambda)},
              {"lambda_max", duals_json(ckpt.lambda_max)},
              {"seed", ckpt.seed},
              {"layers", params_json(ckpt.params)}}
      .dump();
}

Checkpoint checkpoint_from_json(std::string_view text) {
  const json j = parse(text, "checkpoint");
  if (!j.is_object()) throw ConfigError("checkpoint: expected a JSON object");
  if (j.value("format_version", -1) != kCheckpointFormatVersion)
    throw ConfigError("checkpoint: unsupported format_version");
  Checkpoint c;
  c.algo = j.value("algo", std::string("sapd"));
  if (c.algo != "sapd" && c.algo != "pd") throw ConfigError("checkpoint: unknown algo '" + c.algo + "'");
  if (j.contains("lambda")) c.lambda = duals_from(j.at("lambda"), "checkpoint.lambda");
  if (j.contains("lambda_max")) c.lambda_max = duals_from(j.at("lambda_max"), "checkpoint.lambda_max");
  c.seed = j.value("seed", std::uint64_t{0});
  if (!j.contains("layers")) throw ConfigError("checkpoint: missing layers");
  c.params = params_from(j.at("layers"));
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  write_text_file(path, to_json(checkpoint));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw MissingArtifactError("checkpoint not found: " + path.string());
  return checkpoint_from_json(read_text_file(path));
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace wslice
