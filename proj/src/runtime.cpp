#include "guidrift/runtime.hpp"

#include <algorithm>
#include <utility>

namespace guidrift {

const char* to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::OpenLoopRPA: return "rpa";
    case PolicyKind::EndToEndVLA: return "vla";
    case PolicyKind::HybridReflex: return "hybrid";
  }
  return "?";
}

std::optional<PolicyKind> policy_from_string(const std::string& s) {
  if (s == "rpa") return PolicyKind::OpenLoopRPA;
  if (s == "vla") return PolicyKind::EndToEndVLA;
  if (s == "hybrid") return PolicyKind::HybridReflex;
  return std::nullopt;
}

const char* to_string(EpisodeStatus s) {
  switch (s) {
    case EpisodeStatus::Success: return "success";
    case EpisodeStatus::SafetyViolation: return "safety_violation";
    case EpisodeStatus::TaskAbort: return "task_abort";
  }
  return "?";
}

const char* to_string(HoverVerdict v) {
  switch (v) {
    case HoverVerdict::Certified: return "certified";
    case HoverVerdict::Demoted: return "demoted";
    case HoverVerdict::Stale: return "stale";
  }
  return "?";
}

ProprioceptionResult verify_effect(const Observation& pre, const Observation& post,
                                   bool expected_change) {
  ProprioceptionResult r;
  r.report = diff_observations(pre, post);
  for (const ObservedItem& item : post.items) {
    const bool added = std::none_of(pre.items.begin(), pre.items.end(),
                                    [&](const ObservedItem& p) { return p.id == item.id; });
    if (added && item.category == Category::Modal) {
      r.modal_region = item.bbox;
      break;
    }
  }
  if (expected_change) {
    r.ok = r.report.changed;
    r.silent_mismatch = !r.report.changed;
  } else {
    r.ok = !r.report.changed;
  }
  return r;
}

ClarifiedAffordance resolve_uncertainty(const Affordance& affordance, Environment& env,
                                        const CostRates& rates, CostLedger& ledger) {
  ClarifiedAffordance out{affordance, HoverVerdict::Certified};
  if (!affordance.uncertain) return out;  // pass-through
  ledger.charge_reflex(rates, env.clock());
  const ActionOutcome probe = env.execute(HoverAction{affordance.bbox.center_point()});
  if (!probe.hover_category) {
    out.verdict = HoverVerdict::Stale;
    return out;
  }
  if (*probe.hover_category == Category::StaticText) {
    out.verdict = HoverVerdict::Demoted;
    out.affordance.category = Category::StaticText;
    out.affordance.uncertain = false;
    return out;
  }
  out.verdict = HoverVerdict::Certified;
  out.affordance.uncertain = false;
  out.affordance.confidence = affordance.pre_downgrade_confidence;
  return out;
}

namespace {

struct StepFrame {
  Observation obs;
  std::vector<Affordance> affordances;
  UITree tree;
  SceneGraph graph;
};

constexpr int kMaxAttempts = 6;

// Runs one record end to end, charging exclusively into its own ledger.
class EpisodeRunner {
 public:
  EpisodeRunner(const Scenario& scenario, PolicyKind policy, uint64_t seed, int64_t episode,
                Environment& env, AnchorCache& cache, bool drifted)
      : sc_(scenario), policy_(policy), seed_(seed), episode_(episode), env_(env), cache_(cache) {
    trace_.episode = episode;
    trace_.policy = to_string(policy);
    trace_.drifted = drifted;
  }

  EpisodeTrace run() {
    bool terminal = false;
    for (size_t i = 0; i < sc_.plan.steps.size() && !terminal; ++i) {
      const int step = static_cast<int>(i);
      bool ok = false;
      switch (policy_) {
        case PolicyKind::HybridReflex: ok = hybrid_step(step); break;
        case PolicyKind::EndToEndVLA: ok = vla_step(step); break;
        case PolicyKind::OpenLoopRPA: ok = rpa_step(step); break;
      }
      terminal = !ok;
    }
    if (!terminal) trace_.status = EpisodeStatus::Success;
    trace_.approved = env_.record_approved();
    trace_.destroyed = env_.record_destroyed();
    ordered_json done;
    done["status"] = to_string(trace_.status);
    done["approved"] = trace_.approved;
    done["destroyed"] = trace_.destroyed;
    done["reflex_steps"] = trace_.ledger.reflex_steps;
    done["supervisor_calls"] = trace_.ledger.supervisor_calls;
    done["sim_ms"] = trace_.ledger.total_sim_ms;
    done["cost_units"] = trace_.ledger.total_cost_units;
    emit("reflex", "episode_done", std::move(done));
    return std::move(trace_);
  }

 private:
  SimClock& clock() { return env_.clock(); }

  void emit(const char* loop, const char* kind, ordered_json payload) {
    trace_.events.push_back(TraceEvent{clock().now_ms(), loop, kind, std::move(payload)});
  }

  // Terminal helpers: record why, flip the status, and unwind the step.
  bool abort_step(int step, const std::string& why) {
    trace_.status = EpisodeStatus::TaskAbort;
    ordered_json j;
    j["step"] = step;
    j["ok"] = false;
    j["why"] = why;
    emit("reflex", "step_done", std::move(j));
    return false;
  }

  bool violation(int step) {
    trace_.status = EpisodeStatus::SafetyViolation;
    ordered_json j;
    j["step"] = step;
    j["ok"] = false;
    j["why"] = "destructive_effect_fired";
    emit("reflex", "step_done", std::move(j));
    return false;
  }

  bool finish_step(int step) {
    ordered_json j;
    j["step"] = step;
    j["ok"] = true;
    emit("reflex", "step_done", std::move(j));
    return true;
  }

  StepFrame build_frame(int step, int attempt) {
    Observation obs = env_.observe();
    Rng det_rng = substream(seed_, static_cast<uint64_t>(episode_), static_cast<uint64_t>(step),
                            static_cast<uint64_t>(attempt), "det");
    Rng ocr_rng = substream(seed_, static_cast<uint64_t>(episode_), static_cast<uint64_t>(step),
                            static_cast<uint64_t>(attempt), "ocr");
    std::vector<DetectionBox> dets = detect_widgets(obs, sc_.noise, det_rng);
    std::vector<TextBox> texts = read_text(obs, sc_.noise, ocr_rng);
    std::vector<Affordance> affs = fuse_frame(dets, texts, sc_.fusion_config());
    UITree tree = parse_layout(affs, HierarchyConfig{});
    SceneGraph graph = build_graph(tree, affs, obs.revision, sc_.lexicon);
    ordered_json j;
    j["affordances"] = affs.size();
    j["revision"] = obs.revision;
    emit("structural", "frame_built", std::move(j));
    return StepFrame{std::move(obs), std::move(affs), std::move(tree), std::move(graph)};
  }

  bool check_preconditions(const StepFrame& f, const PlanStep& st) {
    const VerificationReport rep = verify(f.graph, f.tree, f.affordances, st.preconditions);
    ordered_json j;
    j["passed"] = rep.passed;
    ordered_json viols = ordered_json::array();
    for (const Violation& v : rep.violated) {
      ordered_json vj;
      vj["precondition"] = v.precondition;
      vj["explanation"] = v.explanation;
      viols.push_back(std::move(vj));
    }
    j["violations"] = std::move(viols);
    j["queried_nodes"] = rep.queried_nodes.size();
    emit("structural", "preconditions_checked", std::move(j));
    return rep.passed;
  }

  bool supervise_and_repair(int step, const std::string& key, EscalationReason reason) {
    Rng rng = substream(seed_, static_cast<uint64_t>(episode_), static_cast<uint64_t>(step),
                        static_cast<uint64_t>(sup_seq_++), "sup");
    const SupervisorResponse resp =
        supervise(env_, key, sc_.defaults.supervisor_error_prob, rng, sc_.defaults.rates,
                  trace_.ledger, clock(), reason);
    ordered_json j;
    j["key"] = key;
    j["reason"] = to_string(reason);
    j["found"] = resp.found;
    j["ms"] = resp.charged_latency_ms;
    j["cost"] = resp.charged_cost_units;
    emit("supervisor", "supervisor_called", std::move(j));
    if (!resp.found) return false;
    repair(cache_, key, resp, env_.screen().revision);
    ordered_json r;
    r["key"] = key;
    r["bbox"] = rect_to_json(resp.bbox);
    emit("supervisor", "cache_repaired", std::move(r));
    return true;
  }

  ActionCommand command_for(const PlanStep& st, Point at) const {
    if (st.action == "hover") return HoverAction{at};
    if (st.action == "type") return TypeAction{st.type_text, at};
    if (st.action == "scroll") return ScrollAction{120};
    return ClickAction{at};
  }

  ActionOutcome execute_action(const PlanStep& st, Point at, std::optional<double> score,
                               bool charge) {
    if (charge) trace_.ledger.charge_reflex(sc_.defaults.rates, clock());
    const ActionOutcome out = env_.execute(command_for(st, at));
    if (st.action == "click" || st.action == "type") ++trace_.clicks;
    if (st.action == "hover") ++trace_.hovers;
    ordered_json j;
    j["action"] = st.action;
    j["at"] = ordered_json::array({at.x, at.y});
    j["effect"] = to_string(out.effect);
    j["widget"] = out.widget_id ? ordered_json(*out.widget_id) : ordered_json(nullptr);
    j["hazard"] = out.safety_hazard;
    if (score) j["score"] = *score;
    emit("reflex", "action_executed", std::move(j));
    return out;
  }

  void emit_effect_check(const PlanStep& st, const ProprioceptionResult& pr) {
    ordered_json j;
    j["expected_change"] = st.expected_change;
    j["changed"] = pr.report.changed;
    j["ok"] = pr.ok;
    j["changed_ids"] = pr.report.changed_ids;
    emit("reflex", "effect_check", std::move(j));
    if (pr.modal_region) {
      ordered_json m;
      m["region"] = rect_to_json(*pr.modal_region);
      emit("structural", "structural_reparse", std::move(m));
    }
  }

  // The full pattern stack: structural parse + precondition verification,
  // cached grounding, hover-gated uncertainty, destructive-intent
  // inhibition, proprioceptive effect check. Escalates to the supervisor at
  // most once per reason per step; everything else is fail-closed abort.
  bool hybrid_step(int step) {
    const PlanStep& st = sc_.plan.steps[static_cast<size_t>(step)];
    const std::string key = st.address.key();
    ordered_json sj;
    sj["step"] = step;
    sj["key"] = key;
    sj["action"] = st.action;
    emit("reflex", "step_started", std::move(sj));

    bool cold_used = false, drift_used = false, inhib_used = false, proprio_used = false;
    bool stale_used = false;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      const StepFrame f = build_frame(step, attempt);
      if (!check_preconditions(f, st)) return abort_step(step, "precondition_violated");

      GroundResult g =
          ground(cache_, key, f.affordances, f.obs, sc_.defaults.rates, trace_.ledger, clock());
      if (const auto* de = std::get_if<DriftException>(&g)) {
        ordered_json j;
        j["key"] = de->key;
        j["score"] = de->score;
        j["cold_start"] = de->cold_start;
        emit("reflex", "drift_exception", std::move(j));
        bool& used = de->cold_start ? cold_used : drift_used;
        if (used) return abort_step(step, "grounding_failed_after_repair");
        used = true;
        const auto reason =
            de->cold_start ? EscalationReason::ColdStart : EscalationReason::Drift;
        if (!supervise_and_repair(step, key, reason)) {
          return abort_step(step, "supervisor_target_not_found");
        }
        continue;
      }

      const GroundHit hit = std::get<GroundHit>(g);
      Affordance cand = f.affordances[static_cast<size_t>(hit.candidate)];
      {
        ordered_json j;
        j["key"] = key;
        j["score"] = hit.score;
        j["bbox"] = rect_to_json(cand.bbox);
        emit("reflex", "grounded", std::move(j));
      }

      if (cand.uncertain) {
        const ClarifiedAffordance ca =
            resolve_uncertainty(cand, env_, sc_.defaults.rates, trace_.ledger);
        ++trace_.hovers;
        ordered_json j;
        j["target"] = cand.text ? ordered_json(*cand.text) : ordered_json(nullptr);
        j["verdict"] = to_string(ca.verdict);
        emit("reflex", "hover_check", std::move(j));
        if (ca.verdict == HoverVerdict::Stale) {
          if (stale_used) return abort_step(step, "stale_affordance_twice");
          stale_used = true;
          continue;  // fresh frame, re-ground
        }
        if (ca.verdict == HoverVerdict::Demoted) {
          return abort_step(step, "target_demoted_to_inert");
        }
        cand = ca.affordance;
      }

      // No effectful action may hit text meaning something other than the
      // declared intent. Inhibit and hand the step to the supervisor.
      if (st.effectful() && cand.text && sc_.lexicon.destructive.count(*cand.text) > 0) {
        const std::optional<Effect> meant = sc_.lexicon.annotate(cand.text);
        if (!meant || *meant != st.declared_intent) {
          ordered_json j;
          j["key"] = key;
          j["text"] = *cand.text;
          emit("reflex", "inhibited", std::move(j));
          if (inhib_used) return abort_step(step, "inhibited_after_repair");
          inhib_used = true;
          if (!supervise_and_repair(step, key, EscalationReason::Inhibition)) {
            return abort_step(step, "supervisor_target_not_found");
          }
          continue;
        }
      }

      // Execution rides on the grounding's reflex charge.
      ActionOutcome out = execute_action(st, cand.bbox.center_point(), hit.score, /*charge=*/false);
      if (out.safety_hazard) return violation(step);

      Observation post = env_.observe();
      ProprioceptionResult pr = verify_effect(f.obs, post, st.expected_change);
      emit_effect_check(st, pr);
      if (pr.ok) return finish_step(step);
      if (pr.modal_region && !pr.silent_mismatch) {
        // Unexpected popup: the re-parse above is the response; the step's
        // own effect cannot be disentangled, so fail closed.
        return abort_step(step, "unexpected_modal");
      }
      if (!pr.silent_mismatch) return abort_step(step, "unexpected_change");

      // Swallowed action: one retry, then the supervisor, then give up.
      ordered_json rj;
      rj["why"] = "silent_mismatch";
      emit("reflex", "retry", std::move(rj));
      out = execute_action(st, cand.bbox.center_point(), hit.score, /*charge=*/true);
      if (out.safety_hazard) return violation(step);
      Observation post2 = env_.observe();
      pr = verify_effect(post, post2, st.expected_change);
      emit_effect_check(st, pr);
      if (pr.ok) return finish_step(step);
      if (proprio_used) return abort_step(step, "effect_unverified");
      proprio_used = true;
      if (!supervise_and_repair(step, key, EscalationReason::Proprioception)) {
        return abort_step(step, "supervisor_target_not_found");
      }
    }
    return abort_step(step, "attempt_budget_exhausted");
  }

  // Every grounding is a supervisor round-trip; no cache, no scene graph.
  bool vla_step(int step) {
    const PlanStep& st = sc_.plan.steps[static_cast<size_t>(step)];
    const std::string key = st.address.key();
    ordered_json sj;
    sj["step"] = step;
    sj["key"] = key;
    sj["action"] = st.action;
    emit("reflex", "step_started", std::move(sj));

    Observation pre = env_.observe();
    for (int round = 0; round < 2; ++round) {
      Rng rng = substream(seed_, static_cast<uint64_t>(episode_), static_cast<uint64_t>(step),
                          static_cast<uint64_t>(sup_seq_++), "sup");
      const auto reason =
          round == 0 ? EscalationReason::Policy : EscalationReason::Proprioception;
      const SupervisorResponse resp =
          supervise(env_, key, sc_.defaults.supervisor_error_prob, rng, sc_.defaults.rates,
                    trace_.ledger, clock(), reason);
      ordered_json j;
      j["key"] = key;
      j["reason"] = to_string(reason);
      j["found"] = resp.found;
      j["ms"] = resp.charged_latency_ms;
      j["cost"] = resp.charged_cost_units;
      emit("supervisor", "supervisor_called", std::move(j));
      if (!resp.found) return abort_step(step, "supervisor_target_not_found");

      ActionOutcome out = execute_action(st, resp.bbox.center_point(), std::nullopt, /*charge=*/true);
      if (out.safety_hazard) return violation(step);
      Observation post = env_.observe();
      ProprioceptionResult pr = verify_effect(pre, post, st.expected_change);
      emit_effect_check(st, pr);
      if (pr.ok) return finish_step(step);
      if (!pr.silent_mismatch) return abort_step(step, "unexpected_change");

      ordered_json rj;
      rj["why"] = "silent_mismatch";
      emit("reflex", "retry", std::move(rj));
      out = execute_action(st, resp.bbox.center_point(), std::nullopt, /*charge=*/true);
      if (out.safety_hazard) return violation(step);
      Observation post2 = env_.observe();
      pr = verify_effect(post, post2, st.expected_change);
      emit_effect_check(st, pr);
      if (pr.ok) return finish_step(step);
      pre = std::move(post2);
    }
    return abort_step(step, "effect_unverified");
  }

  // Coordinate playback. No observation, no verification; the honest
  // baseline for what breaks under drift.
  bool rpa_step(int step) {
    const PlanStep& st = sc_.plan.steps[static_cast<size_t>(step)];
    ordered_json sj;
    sj["step"] = step;
    sj["action"] = st.action;
    emit("reflex", "step_started", std::move(sj));
    if (!st.rpa_point) return abort_step(step, "no_playback_coordinate");
    const ActionOutcome out = execute_action(st, *st.rpa_point, std::nullopt, /*charge=*/true);
    if (out.safety_hazard) return violation(step);
    return finish_step(step);
  }

  const Scenario& sc_;
  PolicyKind policy_;
  uint64_t seed_;
  int64_t episode_;
  Environment& env_;
  AnchorCache& cache_;
  EpisodeTrace trace_;
  uint64_t sup_seq_ = 0;
};

}  // namespace

bool apply_scheduled_drifts(const Scenario& sc, uint64_t seed, int64_t episode,
                            Environment& env) {
  bool any = false;
  for (size_t k = 0; k < sc.drift_events.size(); ++k) {
    const DriftEvent& ev = sc.drift_events[k];
    const bool fire = std::visit(
        [&](const auto& trig) -> bool {
          using T = std::decay_t<decltype(trig)>;
          if constexpr (std::is_same_v<T, TriggerAtEpisode>) {
            return static_cast<int64_t>(trig.episode) == episode;
          } else {
            Rng rng = substream(seed, std::string_view("drift"), static_cast<uint64_t>(episode),
                                static_cast<uint64_t>(k));
            return rng.bernoulli(trig.p);
          }
        },
        ev.trigger);
    if (fire) {
      env.drift(ev.event);
      any = true;
    }
  }
  return any;
}

ordered_json episode_to_json(const EpisodeTrace& t) {
  ordered_json j;
  j["schema"] = "guidrift-trace-1";
  j["episode"] = t.episode;
  j["policy"] = t.policy;
  j["status"] = to_string(t.status);
  j["drifted"] = t.drifted;
  j["approved"] = t.approved;
  j["destroyed"] = t.destroyed;
  j["clicks"] = t.clicks;
  j["hovers"] = t.hovers;
  j["reflex_steps"] = t.ledger.reflex_steps;
  j["supervisor_calls"] = t.ledger.supervisor_calls;
  j["cold_start_calls"] = t.ledger.cold_start_calls;
  j["drift_calls"] = t.ledger.drift_calls;
  j["inhibition_calls"] = t.ledger.inhibition_calls;
  j["proprioception_calls"] = t.ledger.proprioception_calls;
  j["policy_calls"] = t.ledger.policy_calls;
  j["sim_ms"] = t.ledger.total_sim_ms;
  j["cost_units"] = t.ledger.total_cost_units;
  ordered_json events = ordered_json::array();
  for (const TraceEvent& e : t.events) {
    ordered_json ej;
    ej["t"] = e.timestamp_ms;
    ej["loop"] = e.loop;
    ej["kind"] = e.kind;
    ej["data"] = e.payload;
    events.push_back(std::move(ej));
  }
  j["events"] = std::move(events);
  return j;
}

BatchReport run_batch(const Scenario& scenario, PolicyKind policy, uint64_t seed,
                      const RunOptions& options) {
  BatchReport report;
  report.policy = to_string(policy);

  AnchorCache local = scenario.cache;
  AnchorCache& cache = options.warm_cache ? *options.warm_cache : local;
  if (options.tau) cache.tau = *options.tau;

  Environment env(scenario.screen, seed);
  if (scenario.popup) env.set_popup_prototype(*scenario.popup);

  for (int64_t ep = 0; ep < options.n_records; ++ep) {
    const bool drifted = options.drift_hook ? options.drift_hook(ep, env)
                                            : apply_scheduled_drifts(scenario, seed, ep, env);
    env.reset_record_flags();
    EpisodeRunner runner(scenario, policy, seed, ep, env, cache, drifted);
    EpisodeTrace t = runner.run();

    ++report.records_run;
    switch (t.status) {
      case EpisodeStatus::Success: ++report.successes; break;
      case EpisodeStatus::SafetyViolation: ++report.safety_violations; break;
      case EpisodeStatus::TaskAbort: ++report.task_aborts; break;
    }
    if (t.approved) ++report.approved_records;
    report.clicks += t.clicks;
    report.hovers += t.hovers;
    report.ledger.add(t.ledger);
    if (t.ledger.supervisor_calls == 0) {
      report.steady_state_max_ms = std::max(report.steady_state_max_ms, t.ledger.total_sim_ms);
    }
    report.final_status = t.status;
    const bool stop = t.status == EpisodeStatus::SafetyViolation;
    report.episodes.push_back(std::move(t));
    if (stop) {
      report.halted_early = ep + 1 < options.n_records;
      break;
    }
  }
  return report;
}

EpisodeTrace run_episode(const Scenario& scenario, PolicyKind policy, uint64_t seed) {
  RunOptions opt;
  opt.n_records = 1;
  BatchReport r = run_batch(scenario, policy, seed, opt);
  return std::move(r.episodes.front());
}

}  // namespace guidrift
