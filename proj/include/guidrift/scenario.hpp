#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "guidrift/anchoring.hpp"
#include "guidrift/hierarchy.hpp"
#include "guidrift/perception.hpp"
#include "guidrift/scenegraph.hpp"
#include "guidrift/sim_env.hpp"

namespace guidrift {

using ordered_json = nlohmann::ordered_json;

// Malformed scenario input. what() carries a field path like
// "$.plan[0].action" plus the reason, so a bad file is locatable.
struct ScenarioError : SimError {
  using SimError::SimError;
};

struct PlanStep {
  RelativeAddress address;
  std::string action = "click";  // click | hover | type | scroll
  Effect declared_intent = Effect::Noop;
  std::vector<Precondition> preconditions;
  bool expected_change = true;
  std::optional<Point> rpa_point;  // playback coordinate for the open-loop policy
  std::string type_text;           // payload when action == "type"

  bool effectful() const { return action == "click" || action == "type"; }
};

struct Plan {
  std::vector<PlanStep> steps;
};

struct PolicyDefaults {
  double tau = kDefaultTau;
  CostRates rates;
  double downgrade_factor = 0.5;
  double iou_threshold = 0.5;
  double supervisor_error_prob = 0.0;
  int records = 1000;
};

// Drift pattern for probability sweeps: the target toggles between pose A
// (its scenario position/style) and pose B (translated + restyled), so every
// drifted episode forces exactly one repair and the arithmetic stays exact.
struct SweepSpec {
  std::string target_id;
  int dx = 0;
  int dy = 0;
  StyleSignature style_a{};
  StyleSignature style_b{};
};

// Declarative assertions evaluated by the harness after a batch; absent
// fields are not checked.
struct PolicyExpect {
  std::optional<std::string> final_status;
  std::optional<int64_t> safety_violations;
  std::optional<int64_t> supervisor_calls;
  std::optional<int64_t> drift_supervisor_calls;
  std::optional<int64_t> cold_start_supervisor_calls;
  std::optional<int64_t> clicks;
  std::optional<int64_t> hovers;
  std::optional<int64_t> approved_records;
  std::optional<int64_t> total_ms_lt;
  std::optional<int64_t> steady_state_ms_lt;  // bound on records with no supervisor call
  struct WithinPct {
    double base = 0.0;
    double pct = 0.0;  // percent, e.g. 1.0 means within 1%
  };
  std::optional<WithinPct> total_ms_within_pct;
};

struct Scenario {
  std::string name;
  uint64_t seed = 0;
  Screen screen;
  std::optional<Widget> popup;
  std::vector<DriftEvent> drift_events;
  NoiseModel noise;  // absent block means exact sensors
  Plan plan;
  IntentLexicon lexicon;
  std::vector<std::string> actionable;  // fusion lexicon override; empty = config default
  PolicyDefaults defaults;
  AnchorCache cache;  // warm-start entries; may be empty
  std::optional<SweepSpec> sweep;
  std::map<std::string, PolicyExpect> expect;  // keyed rpa | vla | hybrid

  FusionConfig fusion_config() const;
};

Scenario parse_scenario(const ordered_json& j);
Scenario load_scenario(const std::string& path);

// Cache round-trip for warm-start fixtures and --cache-in/--cache-out.
ordered_json cache_to_json(const AnchorCache& cache);
AnchorCache cache_from_json(const ordered_json& j);
void save_cache(const AnchorCache& cache, const std::string& path);
AnchorCache load_cache(const std::string& path);

// Shared JSON shapes (also used by trace emission and the dump flags).
ordered_json rect_to_json(const Rect& r);
ordered_json style_to_json(const StyleSignature& s);
ordered_json widget_to_json(const Widget& w);
ordered_json observation_to_json(const Observation& obs);
ordered_json affordance_to_json(const Affordance& a);
ordered_json tree_to_json(const UITree& tree);
ordered_json graph_to_json(const SceneGraph& graph);

}  // namespace guidrift
