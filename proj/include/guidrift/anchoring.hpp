#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "guidrift/fusion.hpp"

namespace guidrift {

class Environment;

// Cached grounding for one semantic key ("Submit@Invoice_Form"): where the
// target was last verified and what it looked like.
struct VisualAnchor {
  std::string semantic_key;
  StyleSignature template_signature{};
  Rect expected_bbox;
  int64_t last_verified_revision = 0;
};

// Escalating past this score is forbidden; grounding below it is forbidden.
inline constexpr double kDefaultTau = 0.9;

struct AnchorCache {
  std::map<std::string, VisualAnchor> entries;
  double tau = kDefaultTau;
};

// Latency / cost charged per activity class. The ledger identity
//   total_sim_ms == reflex_steps * reflex_ms + supervisor_calls * supervisor_ms
// (and likewise for cost units) holds exactly because these two meters are
// the only way time or cost ever accrues.
struct CostRates {
  int64_t reflex_ms = 50;
  double reflex_cost_units = 0.0;
  int64_t supervisor_ms = 10000;
  double supervisor_cost_units = 1.0;
};

enum class EscalationReason { ColdStart, Drift, Inhibition, Proprioception, Policy };
const char* to_string(EscalationReason r);

class SimClock;

struct CostLedger {
  int64_t reflex_steps = 0;
  int64_t supervisor_calls = 0;
  int64_t cold_start_calls = 0;
  int64_t drift_calls = 0;
  int64_t inhibition_calls = 0;
  int64_t proprioception_calls = 0;
  int64_t policy_calls = 0;  // policies that escalate by design (no cache)
  int64_t total_sim_ms = 0;
  double total_cost_units = 0.0;

  void charge_reflex(const CostRates& rates, SimClock& clock);
  void charge_supervisor(const CostRates& rates, SimClock& clock, EscalationReason reason);
  bool consistent(const CostRates& rates) const;

  // Exact aggregation; batch totals are defined as the sum of record ledgers.
  void add(const CostLedger& o) {
    reflex_steps += o.reflex_steps;
    supervisor_calls += o.supervisor_calls;
    cold_start_calls += o.cold_start_calls;
    drift_calls += o.drift_calls;
    inhibition_calls += o.inhibition_calls;
    proprioception_calls += o.proprioception_calls;
    policy_calls += o.policy_calls;
    total_sim_ms += o.total_sim_ms;
    total_cost_units += o.total_cost_units;
  }
};

// ---------------------------------------------------------------------------
// Matching / grounding
// ---------------------------------------------------------------------------

// score = 0.5 * locality + 0.5 * style similarity.
// locality = 1 - min(1, center_distance / diagonal(expected_bbox)): a miss
// of one full button-diagonal is a total locality miss, regardless of screen
// size. Style is sampled from the observation at the candidate's region.
struct MatchResult {
  int candidate = -1;  // affordance index, -1 when the frame has none
  double score = 0.0;
};

MatchResult match(const VisualAnchor& anchor, const std::vector<Affordance>& affordances,
                  const Observation& obs);

double anchor_score(const VisualAnchor& anchor, const Rect& candidate_bbox,
                    const std::optional<StyleSignature>& candidate_style);

// Grounding outcome. A drift exception deliberately carries no coordinates:
// stale geometry must never leak to the caller.
struct GroundHit {
  int candidate = -1;
  double score = 0.0;
};
struct DriftException {
  std::string key;
  double score = 0.0;
  bool cold_start = false;
};
using GroundResult = std::variant<GroundHit, DriftException>;

// One reflex pass: charges exactly one reflex step, then either hands back
// the matched candidate (score >= tau; the boundary itself grounds) or
// raises a drift exception. Missing key -> cold-start exception.
GroundResult ground(AnchorCache& cache, const std::string& key,
                    const std::vector<Affordance>& affordances, const Observation& obs,
                    const CostRates& rates, CostLedger& ledger, SimClock& clock);

// ---------------------------------------------------------------------------
// Supervisor
// ---------------------------------------------------------------------------

struct SupervisorResponse {
  bool found = false;
  Rect bbox;
  StyleSignature new_template_signature{};
  std::string resolved_widget;  // oracle-only
  int64_t charged_latency_ms = 0;
  double charged_cost_units = 0.0;
};

// Heavyweight semantic grounding through the privileged ground-truth port.
// Always charges a full supervisor call. error_prob injects "could not
// locate" failures for resilience tests; the draw comes from `rng`.
SupervisorResponse supervise(const Environment& env, const std::string& key, double error_prob,
                             Rng& rng, const CostRates& rates, CostLedger& ledger, SimClock& clock,
                             EscalationReason reason);

struct ContractViolation : SimError {
  using SimError::SimError;
};

// Installs the supervisor's answer under the key. found == false is a
// caller bug (abort instead) -> ContractViolation. After repair, grounding
// the same key on the unchanged screen hits.
void repair(AnchorCache& cache, const std::string& key, const SupervisorResponse& response,
            int64_t revision);

}  // namespace guidrift
