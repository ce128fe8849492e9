// guidrift command line: run scenarios under the three policies, sweep the
// amortized cost model over drift probabilities, and print model predictions.
//
// Exit codes: 0 success, 1 expectation/tolerance failure, 2 input error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "guidrift/bench.hpp"
#include "guidrift/runtime.hpp"
#include "guidrift/scenario.hpp"

namespace {

using namespace guidrift;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;

struct RunArgs {
  std::string scenario_path;
  std::string policy = "all";
  int64_t seed = -1;  // <0: use the scenario's seed
  int64_t records = 0;
  std::string out_dir = "out";
  double tau = -1.0;  // <0: use the scenario's tau
  std::string cache_in;
  std::string cache_out;
  bool dump_perception = false;
  bool dump_affordances = false;
  bool dump_tree = false;
  bool dump_graph = false;

  bool any_dump() const { return dump_perception || dump_affordances || dump_tree || dump_graph; }
};

struct SweepArgs {
  std::string scenario_path;
  std::vector<double> p_values = {0.0, 0.001, 0.01, 0.1};
  int64_t episodes = 10000;
  int64_t seed = -1;
  std::string out_dir = "out";
  double tolerance_pct = 5.0;
};

struct PredictArgs {
  double p = 0.0;
  CostRates rates;
};

ordered_json detection_to_json(const DetectionBox& d) {
  ordered_json j;
  j["bbox"] = rect_to_json(d.bbox);
  j["category"] = to_string(d.category);
  j["confidence"] = d.confidence;
  return j;
}

ordered_json text_box_to_json(const TextBox& t) {
  ordered_json j;
  j["bbox"] = rect_to_json(t.bbox);
  j["text"] = t.text;
  j["confidence"] = t.confidence;
  return j;
}

// Diagnostic dumps: reproduce exactly what episode 0 senses, step by step
// (scheduled drifts applied, attempt-0 sensor streams), without acting.
int run_dumps(const Scenario& sc, uint64_t seed, const RunArgs& args) {
  Environment env(sc.screen, seed);
  if (sc.popup) env.set_popup_prototype(*sc.popup);
  apply_scheduled_drifts(sc, seed, 0, env);

  const Observation obs = env.observe();
  for (size_t step = 0; step < sc.plan.steps.size(); ++step) {
    Rng det_rng = substream(seed, uint64_t{0}, static_cast<uint64_t>(step), uint64_t{0},
                            std::string_view("det"));
    Rng ocr_rng = substream(seed, uint64_t{0}, static_cast<uint64_t>(step), uint64_t{0},
                            std::string_view("ocr"));
    const std::vector<DetectionBox> dets = detect_widgets(obs, sc.noise, det_rng);
    const std::vector<TextBox> texts = read_text(obs, sc.noise, ocr_rng);
    const std::vector<Affordance> affs = fuse_frame(dets, texts, sc.fusion_config());

    if (args.dump_perception) {
      ordered_json line;
      line["step"] = step;
      ordered_json dj = ordered_json::array();
      for (const DetectionBox& d : dets) dj.push_back(detection_to_json(d));
      ordered_json tj = ordered_json::array();
      for (const TextBox& t : texts) tj.push_back(text_box_to_json(t));
      line["detections"] = std::move(dj);
      line["texts"] = std::move(tj);
      std::cout << line.dump() << "\n";
    }
    if (args.dump_affordances) {
      ordered_json line;
      line["step"] = step;
      ordered_json aj = ordered_json::array();
      for (const Affordance& a : affs) aj.push_back(affordance_to_json(a));
      line["affordances"] = std::move(aj);
      std::cout << line.dump() << "\n";
    }
    if (step == 0 && (args.dump_tree || args.dump_graph)) {
      const UITree tree = parse_layout(affs, HierarchyConfig{});
      if (args.dump_tree) std::cout << tree_to_json(tree).dump(2) << "\n";
      if (args.dump_graph) {
        const SceneGraph graph = build_graph(tree, affs, obs.revision, sc.lexicon);
        std::cout << graph_to_json(graph).dump(2) << "\n";
      }
    }
  }
  return kExitOk;
}

int do_run(const RunArgs& args) {
  Scenario sc = load_scenario(args.scenario_path);
  if (!args.cache_in.empty()) {
    sc.cache = load_cache(args.cache_in);
    sc.cache.tau = sc.defaults.tau;
  }
  if (args.tau >= 0.0) {
    sc.defaults.tau = args.tau;
    sc.cache.tau = args.tau;
  }
  const uint64_t seed = args.seed < 0 ? sc.seed : static_cast<uint64_t>(args.seed);

  if (args.any_dump()) return run_dumps(sc, seed, args);

  std::vector<PolicyKind> policies;
  if (args.policy == "all") {
    policies = {PolicyKind::OpenLoopRPA, PolicyKind::EndToEndVLA, PolicyKind::HybridReflex};
  } else if (const auto p = policy_from_string(args.policy)) {
    policies = {*p};
  } else {
    std::cerr << "unknown policy '" << args.policy << "' (rpa|vla|hybrid|all)\n";
    return kExitInputError;
  }

  AnchorCache hybrid_cache = sc.cache;
  const SaamResult result =
      run_saam(sc, args.out_dir, seed, policies, args.records, &hybrid_cache);

  if (!args.cache_out.empty()) save_cache(hybrid_cache, args.cache_out);

  std::cout << result.summary.dump(2) << "\n";
  for (const std::string& f : result.failures) std::cerr << "expectation failed: " << f << "\n";
  return result.exit_code == 0 ? kExitOk : kExitCheckFailed;
}

int do_sweep(const SweepArgs& args) {
  Scenario sc = load_scenario(args.scenario_path);
  if (!sc.sweep) {
    std::cerr << args.scenario_path << ": scenario has no sweep block\n";
    return kExitInputError;
  }
  const uint64_t seed = args.seed < 0 ? sc.seed : static_cast<uint64_t>(args.seed);

  const std::vector<SweepRow> rows = sweep_drift(sc, args.p_values, args.episodes, seed);
  const std::string csv = sweep_to_csv(rows);

  std::filesystem::create_directories(args.out_dir);
  std::ofstream out(args.out_dir + "/sweep.csv");
  if (!out) {
    std::cerr << args.out_dir << ": cannot write sweep.csv\n";
    return kExitInputError;
  }
  out << csv;
  std::cout << csv;

  bool ok = true;
  for (const SweepRow& row : rows) {
    if (std::abs(row.latency_err_pct) > args.tolerance_pct ||
        std::abs(row.cost_err_pct) > args.tolerance_pct) {
      std::cerr << "tolerance exceeded at p=" << row.p << "\n";
      ok = false;
    }
  }
  return ok ? kExitOk : kExitCheckFailed;
}

int do_predict(const PredictArgs& args) {
  const CostPrediction pred = predict_avg_cost({args.rates, args.p});
  ordered_json j;
  j["p"] = args.p;
  j["avg_ms"] = pred.avg_ms;
  j["avg_cost_units"] = pred.avg_cost_units;
  std::cout << j.dump() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"guidrift: resilient visual-agent runtime and GUI-drift simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Run a scenario under one or all policies");
  run->add_option("--scenario", run_args.scenario_path, "Scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--policy", run_args.policy, "rpa | vla | hybrid | all")
      ->check(CLI::IsMember({"rpa", "vla", "hybrid", "all"}));
  run->add_option("--seed", run_args.seed, "Override the scenario seed");
  run->add_option("--records", run_args.records, "Override the record count")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", run_args.out_dir, "Output directory (traces, metrics, summary)");
  run->add_option("--tau", run_args.tau, "Override the anchor verification threshold")
      ->check(CLI::Range(0.0, 1.0));
  run->add_option("--cache-in", run_args.cache_in, "Start from this anchor cache JSON")
      ->check(CLI::ExistingFile);
  run->add_option("--cache-out", run_args.cache_out, "Write the hybrid run's final anchor cache");
  run->add_flag("--dump-perception", run_args.dump_perception,
                "Print detector/OCR output per plan step as JSON lines and exit");
  run->add_flag("--dump-affordances", run_args.dump_affordances,
                "Print fused affordances per plan step as JSON lines and exit");
  run->add_flag("--dump-tree", run_args.dump_tree,
                "Print the parsed widget hierarchy as indented JSON and exit");
  run->add_flag("--dump-graph", run_args.dump_graph,
                "Print the semantic scene graph as indented JSON and exit");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "Check the amortized cost model against runs");
  sweep->add_option("--scenario", sweep_args.scenario_path, "Scenario JSON file (needs a sweep block)")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--p-list", sweep_args.p_values, "Drift probabilities")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--episodes", sweep_args.episodes, "Episodes per probability")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--seed", sweep_args.seed, "Override the scenario seed");
  sweep->add_option("--out", sweep_args.out_dir, "Output directory (sweep.csv)");
  sweep->add_option("--tolerance-pct", sweep_args.tolerance_pct,
                    "Max |measured - predicted| error, percent")
      ->check(CLI::NonNegativeNumber);

  PredictArgs predict_args;
  CLI::App* predict = app.add_subcommand("predict", "Print the amortized cost prediction for one p");
  predict->add_option("--p", predict_args.p, "Fraction of interactions that hit drift")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  predict->add_option("--reflex-ms", predict_args.rates.reflex_ms, "Reflex step latency");
  predict->add_option("--supervisor-ms", predict_args.rates.supervisor_ms, "Supervisor call latency");
  predict->add_option("--reflex-cost", predict_args.rates.reflex_cost_units, "Reflex step cost units");
  predict->add_option("--supervisor-cost", predict_args.rates.supervisor_cost_units,
                      "Supervisor call cost units");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (run->parsed()) return do_run(run_args);
    if (sweep->parsed()) return do_sweep(sweep_args);
    if (predict->parsed()) return do_predict(predict_args);
  } catch (const ScenarioError& e) {
    std::cerr << e.what() << "\n";
    return kExitInputError;
  } catch (const SimError& e) {
    std::cerr << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
