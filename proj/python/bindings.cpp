// Python bindings for the guidrift core. JSON-shaped results cross the
// boundary as native Python objects (via the stdlib json module) so callers
// get plain dicts and lists, not wrapped C++ types.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "guidrift/bench.hpp"
#include "guidrift/runtime.hpp"
#include "guidrift/scenario.hpp"

namespace py = pybind11;
using namespace guidrift;

namespace {

py::object json_to_py(const ordered_json& j) {
  py::object loads = py::module_::import("json").attr("loads");
  return loads(j.dump());
}

uint64_t effective_seed(const Scenario& sc, std::optional<int64_t> seed) {
  if (!seed) return sc.seed;
  if (*seed < 0) throw ScenarioError("seed must be >= 0");
  return static_cast<uint64_t>(*seed);
}

// Sense the scenario's screen once (episode 0, step 0 sensor streams, drift
// optionally applied) and fuse it. The perception smoke path.
std::vector<Affordance> sense(const Scenario& sc, uint64_t seed, bool apply_drift) {
  Environment env(sc.screen, seed);
  if (sc.popup) env.set_popup_prototype(*sc.popup);
  if (apply_drift) apply_scheduled_drifts(sc, seed, 0, env);
  const Observation obs = env.observe();
  Rng det = substream(seed, uint64_t{0}, uint64_t{0}, uint64_t{0}, std::string_view("det"));
  Rng ocr = substream(seed, uint64_t{0}, uint64_t{0}, uint64_t{0}, std::string_view("ocr"));
  const auto dets = detect_widgets(obs, sc.noise, det);
  const auto texts = read_text(obs, sc.noise, ocr);
  return fuse_frame(dets, texts, sc.fusion_config());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Resilient visual-agent runtime and GUI-drift simulator";

  // Translators run newest-first, so the base class goes in first and the
  // derived error still wins for scenario parsing failures.
  py::register_exception<SimError>(m, "SimError", PyExc_RuntimeError);
  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);

  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly("name", [](const Scenario& s) { return s.name; })
      .def_property_readonly("seed", [](const Scenario& s) { return s.seed; })
      .def_property_readonly("records", [](const Scenario& s) { return s.defaults.records; })
      .def_property_readonly("tau", [](const Scenario& s) { return s.defaults.tau; })
      .def("__repr__", [](const Scenario& s) { return "<Scenario '" + s.name + "'>"; });

  m.def("load_scenario", &load_scenario, py::arg("path"),
        "Parse a scenario JSON file; raises ScenarioError with a field path on bad input.");

  m.def(
      "parse_scenario",
      [](const std::string& text) { return parse_scenario(ordered_json::parse(text)); },
      py::arg("text"), "Parse a scenario from a JSON string.");

  m.def(
      "run",
      [](const Scenario& sc, const std::string& policy, std::optional<int64_t> seed,
         int64_t records) {
        const auto p = policy_from_string(policy);
        if (!p) throw ScenarioError("unknown policy '" + policy + "' (rpa|vla|hybrid)");
        RunOptions opt;
        opt.n_records = records > 0 ? records : static_cast<int64_t>(sc.defaults.records);
        const BatchReport report = run_batch(sc, *p, effective_seed(sc, seed), opt);
        std::vector<RecordStats> stats;
        stats.reserve(report.episodes.size());
        for (const EpisodeTrace& t : report.episodes) stats.push_back(stats_from_trace(t));
        ordered_json j;
        j["policy"] = report.policy;
        j["aggregate"] = build_summary(sc, effective_seed(sc, seed),
                                       {aggregate_records(report.policy, stats)});
        return json_to_py(j);
      },
      py::arg("scenario"), py::arg("policy"), py::arg("seed") = py::none(),
      py::arg("records") = 0,
      "Run one policy over the scenario's record stream; returns the summary as a dict.");

  m.def(
      "run_episode",
      [](const Scenario& sc, const std::string& policy, std::optional<int64_t> seed) {
        const auto p = policy_from_string(policy);
        if (!p) throw ScenarioError("unknown policy '" + policy + "' (rpa|vla|hybrid)");
        return json_to_py(episode_to_json(run_episode(sc, *p, effective_seed(sc, seed))));
      },
      py::arg("scenario"), py::arg("policy"), py::arg("seed") = py::none(),
      "Run a single record and return its full trace (events included) as a dict.");

  m.def(
      "sweep",
      [](const Scenario& sc, const std::vector<double>& p_values, int64_t episodes,
         std::optional<int64_t> seed) {
        const auto rows = sweep_drift(sc, p_values, episodes, effective_seed(sc, seed));
        py::list out;
        for (const SweepRow& r : rows) {
          py::dict d;
          d["p"] = r.p;
          d["episodes"] = r.episodes;
          d["drifted_episodes"] = r.drifted_episodes;
          d["measured_mean_ms"] = r.measured_mean_ms;
          d["predicted_ms"] = r.predicted_ms;
          d["latency_err_pct"] = r.latency_err_pct;
          d["measured_mean_cost_units"] = r.measured_mean_cost_units;
          d["predicted_cost_units"] = r.predicted_cost_units;
          d["cost_err_pct"] = r.cost_err_pct;
          d["supervisor_calls"] = r.supervisor_calls;
          out.append(std::move(d));
        }
        return out;
      },
      py::arg("scenario"), py::arg("p_values"), py::arg("episodes") = 1000,
      py::arg("seed") = py::none(),
      "Monte Carlo check of the amortized cost model on the hybrid policy.");

  m.def(
      "predict",
      [](double p, int64_t reflex_ms, int64_t supervisor_ms, double reflex_cost,
         double supervisor_cost) {
        const CostPrediction pred =
            predict_avg_cost({CostRates{reflex_ms, reflex_cost, supervisor_ms, supervisor_cost}, p});
        py::dict d;
        d["avg_ms"] = pred.avg_ms;
        d["avg_cost_units"] = pred.avg_cost_units;
        return d;
      },
      py::arg("p"), py::arg("reflex_ms") = 50, py::arg("supervisor_ms") = 10000,
      py::arg("reflex_cost") = 0.0, py::arg("supervisor_cost") = 1.0,
      "Amortized per-interaction cost when a p-fraction of interactions needs the supervisor.");

  m.def(
      "affordances",
      [](const Scenario& sc, std::optional<int64_t> seed, bool apply_drift) {
        const auto affs = sense(sc, effective_seed(sc, seed), apply_drift);
        py::list out;
        for (const Affordance& a : affs) out.append(json_to_py(affordance_to_json(a)));
        return out;
      },
      py::arg("scenario"), py::arg("seed") = py::none(), py::arg("apply_drift") = false,
      "Fused affordances for the scenario's screen (episode-0 sensor streams).");

  m.def(
      "hierarchy",
      [](const Scenario& sc, std::optional<int64_t> seed, bool apply_drift) {
        const auto affs = sense(sc, effective_seed(sc, seed), apply_drift);
        return json_to_py(tree_to_json(parse_layout(affs, HierarchyConfig{})));
      },
      py::arg("scenario"), py::arg("seed") = py::none(), py::arg("apply_drift") = false,
      "Visual hierarchy (containment + alignment tree) of the scenario's screen.");

  m.def(
      "scene_graph",
      [](const Scenario& sc, std::optional<int64_t> seed, bool apply_drift) {
        const uint64_t s = effective_seed(sc, seed);
        Environment env(sc.screen, s);
        if (sc.popup) env.set_popup_prototype(*sc.popup);
        if (apply_drift) apply_scheduled_drifts(sc, s, 0, env);
        const Observation obs = env.observe();
        Rng det = substream(s, uint64_t{0}, uint64_t{0}, uint64_t{0}, std::string_view("det"));
        Rng ocr = substream(s, uint64_t{0}, uint64_t{0}, uint64_t{0}, std::string_view("ocr"));
        const auto dets = detect_widgets(obs, sc.noise, det);
        const auto texts = read_text(obs, sc.noise, ocr);
        const auto affs = fuse_frame(dets, texts, sc.fusion_config());
        const UITree tree = parse_layout(affs, HierarchyConfig{});
        return json_to_py(graph_to_json(build_graph(tree, affs, obs.revision, sc.lexicon)));
      },
      py::arg("scenario"), py::arg("seed") = py::none(), py::arg("apply_drift") = false,
      "Queryable semantic scene graph of the scenario's screen, as nodes and edges.");

  m.attr("DEFAULT_TAU") = kDefaultTau;
}
