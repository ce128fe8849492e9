#include "guidrift/anchoring.hpp"

#include <algorithm>
#include <cmath>

#include "guidrift/perception.hpp"
#include "guidrift/scenegraph.hpp"
#include "guidrift/sim_env.hpp"

namespace guidrift {

const char* to_string(EscalationReason r) {
  switch (r) {
    case EscalationReason::ColdStart: return "cold_start";
    case EscalationReason::Drift: return "drift";
    case EscalationReason::Inhibition: return "inhibition";
    case EscalationReason::Proprioception: return "proprioception";
    case EscalationReason::Policy: return "policy";
  }
  return "?";
}

void CostLedger::charge_reflex(const CostRates& rates, SimClock& clock) {
  ++reflex_steps;
  total_sim_ms += rates.reflex_ms;
  total_cost_units += rates.reflex_cost_units;
  clock.charge(rates.reflex_ms);
}

void CostLedger::charge_supervisor(const CostRates& rates, SimClock& clock,
                                   EscalationReason reason) {
  ++supervisor_calls;
  switch (reason) {
    case EscalationReason::ColdStart: ++cold_start_calls; break;
    case EscalationReason::Drift: ++drift_calls; break;
    case EscalationReason::Inhibition: ++inhibition_calls; break;
    case EscalationReason::Proprioception: ++proprioception_calls; break;
    case EscalationReason::Policy: ++policy_calls; break;
  }
  total_sim_ms += rates.supervisor_ms;
  total_cost_units += rates.supervisor_cost_units;
  clock.charge(rates.supervisor_ms);
}

bool CostLedger::consistent(const CostRates& rates) const {
  if (supervisor_calls != cold_start_calls + drift_calls + inhibition_calls +
                              proprioception_calls + policy_calls) {
    return false;
  }
  const int64_t ms = reflex_steps * rates.reflex_ms + supervisor_calls * rates.supervisor_ms;
  const double units = static_cast<double>(reflex_steps) * rates.reflex_cost_units +
                       static_cast<double>(supervisor_calls) * rates.supervisor_cost_units;
  return ms == total_sim_ms && units == total_cost_units;
}

double anchor_score(const VisualAnchor& anchor, const Rect& candidate_bbox,
                    const std::optional<StyleSignature>& candidate_style) {
  const double diag = anchor.expected_bbox.diagonal();
  double locality = 0.0;
  if (diag > 0.0) {
    const double d = center_distance(anchor.expected_bbox, candidate_bbox);
    locality = 1.0 - std::min(1.0, d / diag);
  }
  const double style =
      candidate_style ? style_similarity(anchor.template_signature, *candidate_style) : 0.0;
  return 0.5 * locality + 0.5 * style;
}

MatchResult match(const VisualAnchor& anchor, const std::vector<Affordance>& affordances,
                  const Observation& obs) {
  MatchResult best;
  for (int i = 0; i < static_cast<int>(affordances.size()); ++i) {
    const double s = anchor_score(anchor, affordances[i].bbox, sample_style(obs, affordances[i].bbox));
    if (best.candidate < 0 || s > best.score) {
      best.candidate = i;
      best.score = s;
    }
  }
  return best;
}

GroundResult ground(AnchorCache& cache, const std::string& key,
                    const std::vector<Affordance>& affordances, const Observation& obs,
                    const CostRates& rates, CostLedger& ledger, SimClock& clock) {
  auto it = cache.entries.find(key);
  if (it == cache.entries.end()) {
    // Nothing to match against; no perception pass ran, so no reflex charge.
    return DriftException{key, 0.0, true};
  }
  ledger.charge_reflex(rates, clock);
  const MatchResult m = match(it->second, affordances, obs);
  if (m.candidate >= 0 && m.score >= cache.tau) {
    it->second.last_verified_revision = obs.revision;
    return GroundHit{m.candidate, m.score};
  }
  return DriftException{key, m.candidate >= 0 ? m.score : 0.0, false};
}

namespace {

std::string key_label(const std::string& key) {
  const auto at = key.find('@');
  return at == std::string::npos ? key : key.substr(0, at);
}

// Semantic resolution against ground truth. Several widgets may share a
// label (a drifted screen can grow a decoy); the supervisor disambiguates by
// intent: the widget whose wired effect matches what the label means wins.
const Widget* resolve_semantic(const Screen& screen, const std::string& label) {
  const IntentLexicon lexicon;
  const std::optional<Effect> meant = lexicon.annotate(label);
  std::vector<const Widget*> hits;
  for (const Widget& w : screen.widgets) {
    if (w.enabled && w.label == label) hits.push_back(&w);
  }
  if (hits.empty()) return nullptr;
  std::sort(hits.begin(), hits.end(), [](const Widget* a, const Widget* b) {
    if (rect_less(a->bbox, b->bbox)) return true;
    if (rect_less(b->bbox, a->bbox)) return false;
    return a->id < b->id;
  });
  if (meant) {
    for (const Widget* w : hits) {
      if (w->effect == *meant) return w;
    }
  }
  return hits.front();
}

}  // namespace

SupervisorResponse supervise(const Environment& env, const std::string& key, double error_prob,
                             Rng& rng, const CostRates& rates, CostLedger& ledger, SimClock& clock,
                             EscalationReason reason) {
  ledger.charge_supervisor(rates, clock, reason);
  SupervisorResponse resp;
  resp.charged_latency_ms = rates.supervisor_ms;
  resp.charged_cost_units = rates.supervisor_cost_units;
  if (error_prob > 0.0 && rng.bernoulli(error_prob)) {
    return resp;  // injected "could not locate"
  }
  const Widget* w = resolve_semantic(env.screen(), key_label(key));
  if (!w) return resp;
  resp.found = true;
  resp.bbox = w->bbox;
  resp.new_template_signature = w->style;
  resp.resolved_widget = w->id;
  return resp;
}

void repair(AnchorCache& cache, const std::string& key, const SupervisorResponse& response,
            int64_t revision) {
  if (!response.found) {
    throw ContractViolation("repair on a not-found supervisor response: " + key);
  }
  VisualAnchor& a = cache.entries[key];
  a.semantic_key = key;
  a.template_signature = response.new_template_signature;
  a.expected_bbox = response.bbox;
  a.last_verified_revision = revision;
}

}  // namespace guidrift
