#pragma once

#include <string>
#include <vector>

#include "guidrift/runtime.hpp"

namespace guidrift {

// Average per-interaction cost when a p-fraction of interactions must fall
// back to the supervisor: avg = reflex + p * supervisor, in both the latency
// and the cost-unit dimension.
struct AmortizedCostModel {
  CostRates rates;
  double p_drift = 0.0;
};

struct CostPrediction {
  double avg_ms = 0.0;
  double avg_cost_units = 0.0;
};

CostPrediction predict_avg_cost(const AmortizedCostModel& model);  // throws SimError on bad model

struct SweepRow {
  double p = 0.0;
  int64_t episodes = 0;
  int64_t drifted_episodes = 0;
  double measured_mean_ms = 0.0;
  double predicted_ms = 0.0;
  double latency_err_pct = 0.0;
  double measured_mean_cost_units = 0.0;
  double predicted_cost_units = 0.0;
  double cost_err_pct = 0.0;
  int64_t supervisor_calls = 0;
};

// Monte Carlo check of the amortized model on the hybrid policy. Drifted
// episodes are spread systematically (exactly round(p*n) of them, evenly
// spaced) and each drift toggles the sweep target between its two poses, so
// every drifted episode costs exactly one repair. Requires scenario.sweep.
std::vector<SweepRow> sweep_drift(const Scenario& scenario, const std::vector<double>& p_values,
                                  int64_t episodes_per_point, uint64_t seed);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// One policy's roll-up of per-record trace stats.
struct PolicyAggregate {
  std::string policy;
  int64_t records = 0;
  int64_t successes = 0;
  int64_t safety_violations = 0;
  int64_t task_aborts = 0;
  int64_t approved_records = 0;
  int64_t clicks = 0;
  int64_t hovers = 0;
  CostLedger ledger;
  std::string final_status;
  int64_t steady_state_max_ms = 0;

  double mean_ms_per_record() const {
    return records == 0 ? 0.0 : static_cast<double>(ledger.total_sim_ms) / static_cast<double>(records);
  }
  double supervisor_rate() const {
    return records == 0 ? 0.0
                        : static_cast<double>(ledger.supervisor_calls) / static_cast<double>(records);
  }
};

// The aggregable slice of one trace line. Summaries are a pure function of
// these, which is what makes trace re-aggregation reproduce summary.json
// byte for byte.
struct RecordStats {
  int64_t episode = 0;
  std::string policy;
  std::string status;
  bool drifted = false;
  bool approved = false;
  bool destroyed = false;
  int64_t clicks = 0;
  int64_t hovers = 0;
  CostLedger ledger;
};

RecordStats stats_from_trace(const EpisodeTrace& t);
RecordStats stats_from_json(const ordered_json& line);
PolicyAggregate aggregate_records(const std::string& policy, const std::vector<RecordStats>& records);

std::vector<std::string> check_expectations(const PolicyExpect& expect, const PolicyAggregate& agg);

// summary.json body for a set of policy aggregates (insertion order kept).
ordered_json build_summary(const Scenario& scenario, uint64_t seed,
                           const std::vector<PolicyAggregate>& aggregates);

// Reads traces_<policy>.jsonl files back and rebuilds the summary through
// the same aggregation path.
ordered_json aggregate_from_traces(const Scenario& scenario, uint64_t seed,
                                   const std::string& out_dir,
                                   const std::vector<std::string>& policies);

struct SaamResult {
  int exit_code = 0;  // 0 ok, 1 expectation failed
  ordered_json summary;
  std::vector<std::string> failures;
};

// Runs the requested policies on one scenario and writes traces (JSONL),
// metrics.csv (per record), comparison.csv (per policy), and summary.json
// into out_dir. hybrid_cache, if given, is the anchor cache the hybrid run
// starts from and mutates; callers use it to persist repairs across runs.
SaamResult run_saam(const Scenario& scenario, const std::string& out_dir, uint64_t seed,
                    const std::vector<PolicyKind>& policies, int64_t records_override = 0,
                    AnchorCache* hybrid_cache = nullptr);

}  // namespace guidrift
