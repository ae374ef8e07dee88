// Python bindings for the slicing simulator, baselines and trained policies.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "wslice/app.hpp"
#include "wslice/channel.hpp"
#include "wslice/execution.hpp"
#include "wslice/json_io.hpp"
#include "wslice/policy.hpp"
#include "wslice/report.hpp"
#include "wslice/training.hpp"

namespace py = pybind11;
using namespace wslice;

namespace {

/// Per-window series of a batch of trajectories as (n, T[, k]) arrays.
py::dict trajectory_arrays(const std::vector<Trajectory>& runs) {
  const auto n = static_cast<py::ssize_t>(runs.size());
  const auto t = n > 0 ? static_cast<py::ssize_t>(runs.front().records.size()) : 0;
  py::array_t<double> alloc({n, t, py::ssize_t{3}});
  py::array_t<double> lambda({n, t, py::ssize_t{2}});
  py::array_t<double> constraints({n, t, py::ssize_t{2}});
  py::array_t<double> objective({n, t});
  auto a = alloc.mutable_unchecked<3>();
  auto l = lambda.mutable_unchecked<3>();
  auto c = constraints.mutable_unchecked<3>();
  auto o = objective.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i) {
    const auto& recs = runs[static_cast<std::size_t>(i)].records;
    for (py::ssize_t w = 0; w < t; ++w) {
      const auto& r = recs[static_cast<std::size_t>(w)];
      a(i, w, 0) = r.allocation.p_h;
      a(i, w, 1) = r.allocation.p_l;
      a(i, w, 2) = r.allocation.p_b;
      l(i, w, 0) = r.lambda.lambda_h;
      l(i, w, 1) = r.lambda.lambda_l;
      c(i, w, 0) = r.eval.constraints.f_h;
      c(i, w, 1) = r.eval.constraints.f_l;
      o(i, w) = r.eval.objective;
    }
  }
  py::dict out;
  out["allocation"] = alloc;
  out["lambda"] = lambda;
  out["constraints"] = constraints;
  out["objective"] = objective;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Network slicing with state-augmented primal-dual learning";
  m.attr("__version__") = WSLICE_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<MissingArtifactError>(m, "MissingArtifactError", PyExc_FileNotFoundError);

  py::class_<QosSpec>(m, "QosSpec")
      .def(py::init<>())
      .def(py::init([](double r_min, double ell_max) { return QosSpec{r_min, ell_max}; }), py::arg("r_min"),
           py::arg("ell_max"))
      .def_readwrite("r_min", &QosSpec::r_min)
      .def_readwrite("ell_max", &QosSpec::ell_max)
      .def("__repr__", [](const QosSpec& q) {
        return "QosSpec(r_min=" + std::to_string(q.r_min) + ", ell_max=" + std::to_string(q.ell_max) + ")";
      });

  py::class_<SliceAllocation>(m, "SliceAllocation")
      .def(py::init<>())
      .def_readonly("p_h", &SliceAllocation::p_h)
      .def_readonly("p_l", &SliceAllocation::p_l)
      .def_readonly("p_b", &SliceAllocation::p_b)
      .def("as_tuple", [](const SliceAllocation& a) { return py::make_tuple(a.p_h, a.p_l, a.p_b); })
      .def_static("from_weights", &SliceAllocation::from_weights, py::arg("w_h"), py::arg("w_l"), py::arg("w_b"));

  py::class_<DualMultipliers>(m, "DualMultipliers")
      .def(py::init<>())
      .def(py::init([](double h, double l) { return DualMultipliers{h, l}; }), py::arg("lambda_h"),
           py::arg("lambda_l"))
      .def_readwrite("lambda_h", &DualMultipliers::lambda_h)
      .def_readwrite("lambda_l", &DualMultipliers::lambda_l);

  py::class_<ViolationRates>(m, "ViolationRates")
      .def_readonly("h_inst", &ViolationRates::h_inst)
      .def_readonly("h_erg", &ViolationRates::h_erg)
      .def_readonly("l_inst", &ViolationRates::l_inst)
      .def_readonly("l_erg", &ViolationRates::l_erg)
      .def("as_dict", [](const ViolationRates& v) {
        py::dict d;
        d["h_inst"] = v.h_inst;
        d["h_erg"] = v.h_erg;
        d["l_inst"] = v.l_inst;
        d["l_erg"] = v.l_erg;
        return d;
      });

  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def(py::init<>())
      .def_readwrite("bandwidth_hz", &NetworkConfig::bandwidth_hz)
      .def_readwrite("num_flows", &NetworkConfig::num_flows)
      .def_readwrite("num_windows", &NetworkConfig::num_windows)
      .def_readwrite("dual_period", &NetworkConfig::dual_period)
      .def_readwrite("window_duration", &NetworkConfig::window_duration)
      .def_readwrite("slot_duration", &NetworkConfig::slot_duration)
      .def_readwrite("packet_size_bits", &NetworkConfig::packet_size_bits)
      .def_readwrite("queue_capacity_packets", &NetworkConfig::queue_capacity_packets)
      .def_readwrite("qos", &NetworkConfig::qos)
      .def_readwrite("rng_seed", &NetworkConfig::rng_seed)
      .def("validate", &validate_config)
      .def("to_json", [](const NetworkConfig& c) { return to_json(c); })
      .def_static("from_json", &network_config_from_json, py::arg("text"));

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("num_epochs", &TrainConfig::num_epochs)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("dual_step", &TrainConfig::dual_step)
      .def_readwrite("dual_step_pd", &TrainConfig::dual_step_pd)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("num_train", &TrainConfig::num_train)
      .def_readwrite("num_val", &TrainConfig::num_val)
      .def_readwrite("num_test", &TrainConfig::num_test)
      .def_readwrite("threads", &TrainConfig::threads)
      .def("validate", &validate_train_config);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("network", &RunConfig::network)
      .def_readwrite("training", &RunConfig::training)
      .def("to_json", [](const RunConfig& c) { return to_json(c); })
      .def_static("from_json", &run_config_from_json, py::arg("text"))
      .def_static("load", &load_run_config, py::arg("path"));

  m.def("shannon_rate",
        [](double h, double sigma2, const std::string& base) {
          if (base != "2" && base != "e") throw ConfigError("base must be '2' or 'e'");
          return shannon_rate(h, sigma2, base == "2" ? LogBase::Two : LogBase::E);
        },
        py::arg("h"), py::arg("sigma2") = 1.0, py::arg("base") = "2");

  m.def("sample_composition",
        [](int total, std::uint64_t seed) {
          auto rng = make_rng(seed, SeedTag::kComposition);
          const auto c = sample_composition(total, rng);
          return py::make_tuple(c[0], c[1], c[2]);
        },
        py::arg("total") = 20, py::arg("seed") = 0);

  m.def("policy_allocation",
        [](const std::filesystem::path& checkpoint, const std::vector<double>& state, double lambda_h,
           double lambda_l) {
          if (state.size() != NetworkStateVector::kSize) throw ConfigError("state must have 9 entries");
          const auto ck = load_checkpoint(checkpoint);
          NetworkStateVector s;
          std::copy(state.begin(), state.end(), s.values.begin());
          return forward(ck.params, make_policy_input(s, {lambda_h, lambda_l})).allocation;
        },
        py::arg("checkpoint"), py::arg("state"), py::arg("lambda_h") = 0.0, py::arg("lambda_l") = 0.0,
        "Slice allocation of a trained policy for one state and multiplier pair.");

  m.def("evaluate",
        [](const RunConfig& config, const std::string& method, std::optional<std::filesystem::path> checkpoint,
           std::optional<int> num_test) {
          const Method mth = make_method(method, checkpoint);
          const int n = num_test.value_or(config.training.num_test);
          if (n < 1) throw ConfigError("num_test must be positive");
          std::vector<Trajectory> runs;
          {
            py::gil_scoped_release release;
            const auto test = make_test_set(config.network.rng_seed, config.network, n);
            runs = evaluate_method(mth, test, config.training.dual_step, config.training.threads);
          }
          py::dict out = trajectory_arrays(runs);
          out["violations"] = violation_rates(runs, config.network.qos);
          return out;
        },
        py::arg("config"), py::arg("method"), py::arg("checkpoint") = py::none(), py::arg("num_test") = py::none(),
        "Runs a method on the paired test set; returns per-window arrays and violation rates.");

  m.def("train",
        [](const RunConfig& config, const std::string& algo, const std::filesystem::path& out_dir,
           std::optional<int> epochs) {
          TrainOptions opts;
          opts.algo = algo;
          opts.out_dir = out_dir;
          opts.epochs = epochs;
          Checkpoint ck;
          {
            py::gil_scoped_release release;
            ck = cmd_train(config, opts);
          }
          py::dict out;
          out["checkpoint"] = (out_dir / "checkpoint.json").string();
          out["lambda"] = DualMultipliers(ck.lambda);
          out["lambda_max"] = DualMultipliers(ck.lambda_max);
          return out;
        },
        py::arg("config"), py::arg("algo") = "sapd", py::arg("out_dir"), py::arg("epochs") = py::none(),
        "Trains SA-PD or PD and writes checkpoint.json, epochs.csv and summary.json.");
}
