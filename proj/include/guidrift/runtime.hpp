#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "guidrift/scenario.hpp"

namespace guidrift {

enum class PolicyKind { OpenLoopRPA, EndToEndVLA, HybridReflex };
const char* to_string(PolicyKind p);
std::optional<PolicyKind> policy_from_string(const std::string& s);  // rpa | vla | hybrid

enum class EpisodeStatus { Success, SafetyViolation, TaskAbort };
const char* to_string(EpisodeStatus s);

// One trace line. loop attributes the event to the architecture's reflex,
// structural, or supervisor process; timestamps are simulated and
// non-decreasing within an episode.
struct TraceEvent {
  int64_t timestamp_ms = 0;
  std::string loop;
  std::string kind;
  ordered_json payload;
};

struct EpisodeTrace {
  int64_t episode = 0;
  std::string policy;
  EpisodeStatus status = EpisodeStatus::Success;
  bool drifted = false;  // a drift event fired before this record
  bool approved = false;
  bool destroyed = false;
  int64_t clicks = 0;
  int64_t hovers = 0;
  CostLedger ledger;  // this record's charges only
  std::vector<TraceEvent> events;
};

ordered_json episode_to_json(const EpisodeTrace& t);

struct BatchReport {
  std::string policy;
  int64_t records_run = 0;
  int64_t successes = 0;
  int64_t safety_violations = 0;
  int64_t task_aborts = 0;
  int64_t approved_records = 0;
  int64_t clicks = 0;
  int64_t hovers = 0;
  CostLedger ledger;  // exact sum of per-episode ledgers
  EpisodeStatus final_status = EpisodeStatus::Success;
  bool halted_early = false;  // a destructive effect fired; the batch stops the line
  // Max per-record latency among records that never touched the supervisor;
  // 0 when every record escalated.
  int64_t steady_state_max_ms = 0;
  std::vector<EpisodeTrace> episodes;
};

// Post-action observation comparison ("did the button depress?").
struct ProprioceptionResult {
  bool ok = false;
  bool silent_mismatch = false;        // expected a change, saw none
  std::optional<Rect> modal_region;    // an unexpected modal surfaced
  ChangeReport report;
};

ProprioceptionResult verify_effect(const Observation& pre, const Observation& post,
                                   bool expected_change);

enum class HoverVerdict { Certified, Demoted, Stale };
const char* to_string(HoverVerdict v);

struct ClarifiedAffordance {
  Affordance affordance;
  HoverVerdict verdict = HoverVerdict::Certified;
};

// Epistemic check on an uncertain affordance: hover, read the behavioral
// category back, certify (confidence restored) or demote to non-actionable.
// Charges one reflex step. Certain affordances pass through untouched.
ClarifiedAffordance resolve_uncertainty(const Affordance& affordance, Environment& env,
                                        const CostRates& rates, CostLedger& ledger);

// Applied before each record; returns true when it mutated the screen.
// Overrides the scenario's drift_events (used by probability sweeps).
using DriftHook = std::function<bool(int64_t episode, Environment& env)>;

struct RunOptions {
  int64_t n_records = 1;
  std::optional<double> tau;  // overrides scenario tau
  DriftHook drift_hook;       // empty: use scenario drift_events
  AnchorCache* warm_cache = nullptr;  // shared/persistent cache; null: scenario's copy
};

BatchReport run_batch(const Scenario& scenario, PolicyKind policy, uint64_t seed,
                      const RunOptions& options);

// Applies the scenario's scheduled drift events for one episode (at_episode
// matches exactly; bernoulli triggers draw from a per-event substream).
// Returns whether anything fired. run_batch calls this unless a drift hook
// replaces the schedule.
bool apply_scheduled_drifts(const Scenario& scenario, uint64_t seed, int64_t episode,
                            Environment& env);

// Single-record convenience used by tests.
EpisodeTrace run_episode(const Scenario& scenario, PolicyKind policy, uint64_t seed);

}  // namespace guidrift
