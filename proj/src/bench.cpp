#include "guidrift/bench.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace guidrift {

namespace {

// Canonical shortest decimal form, identical to the JSON emitter's, so CSV
// and JSON never disagree about the same number.
std::string num_str(double v) { return ordered_json(v).dump(); }

double err_pct(double measured, double predicted) {
  if (predicted == 0.0) return measured == 0.0 ? 0.0 : 100.0;
  return std::abs(measured - predicted) / predicted * 100.0;
}

}  // namespace

CostPrediction predict_avg_cost(const AmortizedCostModel& model) {
  if (model.p_drift < 0.0 || model.p_drift > 1.0) throw SimError("p_drift must be in [0, 1]");
  if (model.rates.reflex_ms < 0 || model.rates.supervisor_ms < 0 ||
      model.rates.reflex_cost_units < 0.0 || model.rates.supervisor_cost_units < 0.0) {
    throw SimError("cost rates must be non-negative");
  }
  CostPrediction p;
  p.avg_ms = static_cast<double>(model.rates.reflex_ms) +
             model.p_drift * static_cast<double>(model.rates.supervisor_ms);
  p.avg_cost_units =
      model.rates.reflex_cost_units + model.p_drift * model.rates.supervisor_cost_units;
  return p;
}

std::vector<SweepRow> sweep_drift(const Scenario& scenario, const std::vector<double>& p_values,
                                  int64_t episodes_per_point, uint64_t seed) {
  if (!scenario.sweep) throw SimError("scenario has no sweep block");
  if (episodes_per_point < 1) throw SimError("episodes_per_point must be >= 1");
  const SweepSpec& sw = *scenario.sweep;
  const int64_t n = episodes_per_point;

  std::vector<SweepRow> rows;
  for (double p : p_values) {
    if (p < 0.0 || p > 1.0) throw SimError("swept p must be in [0, 1]");
    const int64_t k = std::llround(p * static_cast<double>(n));

    AnchorCache cache = scenario.cache;  // fresh warm start per point
    bool pose_b = false;
    const DriftHook hook = [&](int64_t ep, Environment& env) {
      // Systematic schedule: exactly k drifted episodes, evenly spaced.
      const bool fire = ((ep + 1) * k) / n > (ep * k) / n;
      if (!fire) return false;
      CompositeDrift d;
      TranslateDrift t;
      t.target_ids = {sw.target_id};
      RestyleDrift r;
      r.target_id = sw.target_id;
      if (!pose_b) {
        t.dx = sw.dx;
        t.dy = sw.dy;
        r.style = sw.style_b;
      } else {
        t.dx = -sw.dx;
        t.dy = -sw.dy;
        r.style = sw.style_a;
      }
      d.parts.push_back(t);
      d.parts.push_back(r);
      env.drift(DriftEventKind{std::move(d)});
      pose_b = !pose_b;
      return true;
    };

    RunOptions opt;
    opt.n_records = n;
    opt.drift_hook = hook;
    opt.warm_cache = &cache;
    const BatchReport r = run_batch(scenario, PolicyKind::HybridReflex, seed, opt);

    AmortizedCostModel model;
    model.rates = scenario.defaults.rates;
    model.p_drift = p;
    const CostPrediction pred = predict_avg_cost(model);

    SweepRow row;
    row.p = p;
    row.episodes = n;
    row.drifted_episodes = k;
    row.measured_mean_ms = static_cast<double>(r.ledger.total_sim_ms) / static_cast<double>(n);
    row.predicted_ms = pred.avg_ms;
    row.latency_err_pct = err_pct(row.measured_mean_ms, row.predicted_ms);
    row.measured_mean_cost_units = r.ledger.total_cost_units / static_cast<double>(n);
    row.predicted_cost_units = pred.avg_cost_units;
    row.cost_err_pct = err_pct(row.measured_mean_cost_units, row.predicted_cost_units);
    row.supervisor_calls = r.ledger.supervisor_calls;
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "p,episodes,drifted_episodes,measured_mean_ms,predicted_ms,latency_err_pct,"
         "measured_mean_cost_units,predicted_cost_units,cost_err_pct,supervisor_calls\n";
  for (const SweepRow& r : rows) {
    out << num_str(r.p) << ',' << r.episodes << ',' << r.drifted_episodes << ','
        << num_str(r.measured_mean_ms) << ',' << num_str(r.predicted_ms) << ','
        << num_str(r.latency_err_pct) << ',' << num_str(r.measured_mean_cost_units) << ','
        << num_str(r.predicted_cost_units) << ',' << num_str(r.cost_err_pct) << ','
        << r.supervisor_calls << '\n';
  }
  return out.str();
}

RecordStats stats_from_trace(const EpisodeTrace& t) {
  RecordStats s;
  s.episode = t.episode;
  s.policy = t.policy;
  s.status = to_string(t.status);
  s.drifted = t.drifted;
  s.approved = t.approved;
  s.destroyed = t.destroyed;
  s.clicks = t.clicks;
  s.hovers = t.hovers;
  s.ledger = t.ledger;
  return s;
}

RecordStats stats_from_json(const ordered_json& line) {
  RecordStats s;
  s.episode = line.at("episode").get<int64_t>();
  s.policy = line.at("policy").get<std::string>();
  s.status = line.at("status").get<std::string>();
  s.drifted = line.at("drifted").get<bool>();
  s.approved = line.at("approved").get<bool>();
  s.destroyed = line.at("destroyed").get<bool>();
  s.clicks = line.at("clicks").get<int64_t>();
  s.hovers = line.at("hovers").get<int64_t>();
  s.ledger.reflex_steps = line.at("reflex_steps").get<int64_t>();
  s.ledger.supervisor_calls = line.at("supervisor_calls").get<int64_t>();
  s.ledger.cold_start_calls = line.at("cold_start_calls").get<int64_t>();
  s.ledger.drift_calls = line.at("drift_calls").get<int64_t>();
  s.ledger.inhibition_calls = line.at("inhibition_calls").get<int64_t>();
  s.ledger.proprioception_calls = line.at("proprioception_calls").get<int64_t>();
  s.ledger.policy_calls = line.at("policy_calls").get<int64_t>();
  s.ledger.total_sim_ms = line.at("sim_ms").get<int64_t>();
  s.ledger.total_cost_units = line.at("cost_units").get<double>();
  return s;
}

PolicyAggregate aggregate_records(const std::string& policy,
                                  const std::vector<RecordStats>& records) {
  PolicyAggregate a;
  a.policy = policy;
  for (const RecordStats& r : records) {
    ++a.records;
    if (r.status == "success") ++a.successes;
    else if (r.status == "safety_violation") ++a.safety_violations;
    else ++a.task_aborts;
    if (r.approved) ++a.approved_records;
    a.clicks += r.clicks;
    a.hovers += r.hovers;
    a.ledger.add(r.ledger);
    if (r.ledger.supervisor_calls == 0) {
      a.steady_state_max_ms = std::max(a.steady_state_max_ms, r.ledger.total_sim_ms);
    }
    a.final_status = r.status;
  }
  return a;
}

std::vector<std::string> check_expectations(const PolicyExpect& expect,
                                            const PolicyAggregate& agg) {
  std::vector<std::string> failures;
  const auto want_eq = [&](const char* name, int64_t got, const std::optional<int64_t>& want) {
    if (want && got != *want) {
      failures.push_back(std::string(name) + ": expected " + std::to_string(*want) + ", got " +
                         std::to_string(got));
    }
  };
  if (expect.final_status && agg.final_status != *expect.final_status) {
    failures.push_back("final_status: expected " + *expect.final_status + ", got " +
                       agg.final_status);
  }
  want_eq("safety_violations", agg.safety_violations, expect.safety_violations);
  want_eq("supervisor_calls", agg.ledger.supervisor_calls, expect.supervisor_calls);
  want_eq("drift_supervisor_calls", agg.ledger.drift_calls, expect.drift_supervisor_calls);
  want_eq("cold_start_supervisor_calls", agg.ledger.cold_start_calls,
          expect.cold_start_supervisor_calls);
  want_eq("clicks", agg.clicks, expect.clicks);
  want_eq("hovers", agg.hovers, expect.hovers);
  want_eq("approved_records", agg.approved_records, expect.approved_records);
  if (expect.total_ms_lt && !(agg.ledger.total_sim_ms < *expect.total_ms_lt)) {
    failures.push_back("total_ms_lt: " + std::to_string(agg.ledger.total_sim_ms) +
                       " is not below " + std::to_string(*expect.total_ms_lt));
  }
  if (expect.steady_state_ms_lt &&
      !(agg.steady_state_max_ms < *expect.steady_state_ms_lt)) {
    failures.push_back("steady_state_ms_lt: " + std::to_string(agg.steady_state_max_ms) +
                       " is not below " + std::to_string(*expect.steady_state_ms_lt));
  }
  if (expect.total_ms_within_pct) {
    const double base = expect.total_ms_within_pct->base;
    const double pct = expect.total_ms_within_pct->pct;
    const double got = static_cast<double>(agg.ledger.total_sim_ms);
    if (base <= 0.0 || std::abs(got - base) / base * 100.0 > pct) {
      failures.push_back("total_ms_within_pct: " + num_str(got) + " deviates from " +
                         num_str(base) + " by more than " + num_str(pct) + "%");
    }
  }
  return failures;
}

ordered_json build_summary(const Scenario& scenario, uint64_t seed,
                           const std::vector<PolicyAggregate>& aggregates) {
  ordered_json j;
  j["schema"] = "guidrift-summary-1";
  j["scenario"] = scenario.name;
  j["seed"] = seed;
  bool all_passed = true;
  ordered_json pols;
  for (const PolicyAggregate& a : aggregates) {
    ordered_json pj;
    pj["records"] = a.records;
    pj["successes"] = a.successes;
    pj["safety_violations"] = a.safety_violations;
    pj["task_aborts"] = a.task_aborts;
    pj["approved_records"] = a.approved_records;
    pj["clicks"] = a.clicks;
    pj["hovers"] = a.hovers;
    pj["final_status"] = a.final_status;
    pj["reflex_steps"] = a.ledger.reflex_steps;
    pj["supervisor_calls"] = a.ledger.supervisor_calls;
    pj["cold_start_calls"] = a.ledger.cold_start_calls;
    pj["drift_calls"] = a.ledger.drift_calls;
    pj["inhibition_calls"] = a.ledger.inhibition_calls;
    pj["proprioception_calls"] = a.ledger.proprioception_calls;
    pj["policy_calls"] = a.ledger.policy_calls;
    pj["total_sim_ms"] = a.ledger.total_sim_ms;
    pj["total_cost_units"] = a.ledger.total_cost_units;
    pj["mean_ms_per_record"] = a.mean_ms_per_record();
    pj["supervisor_rate"] = a.supervisor_rate();
    pj["steady_state_max_ms"] = a.steady_state_max_ms;
    std::vector<std::string> failures;
    const auto it = scenario.expect.find(a.policy);
    if (it != scenario.expect.end()) failures = check_expectations(it->second, a);
    pj["expect_failures"] = failures;
    if (!failures.empty()) all_passed = false;
    pols[a.policy] = std::move(pj);
  }
  j["policies"] = std::move(pols);
  j["all_passed"] = all_passed;
  return j;
}

namespace {

std::string traces_filename(const std::string& policy) { return "traces_" + policy + ".jsonl"; }

std::vector<RecordStats> read_trace_stats(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SimError(path + ": cannot open trace file");
  std::vector<RecordStats> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(stats_from_json(ordered_json::parse(line)));
  }
  return out;
}

}  // namespace

ordered_json aggregate_from_traces(const Scenario& scenario, uint64_t seed,
                                   const std::string& out_dir,
                                   const std::vector<std::string>& policies) {
  std::vector<PolicyAggregate> aggs;
  for (const std::string& p : policies) {
    const std::string path = out_dir + "/" + traces_filename(p);
    aggs.push_back(aggregate_records(p, read_trace_stats(path)));
  }
  return build_summary(scenario, seed, aggs);
}

SaamResult run_saam(const Scenario& scenario, const std::string& out_dir, uint64_t seed,
                    const std::vector<PolicyKind>& policies, int64_t records_override,
                    AnchorCache* hybrid_cache) {
  std::filesystem::create_directories(out_dir);
  const int64_t n =
      records_override > 0 ? records_override : static_cast<int64_t>(scenario.defaults.records);

  std::ostringstream metrics;
  metrics << "episode,policy,status,drifted,approved,destroyed,clicks,hovers,"
             "reflex_steps,supervisor_calls,sim_ms,cost_units\n";
  std::ostringstream comparison;
  comparison << "policy,records,successes,safety_violations,task_aborts,approved_records,"
                "clicks,hovers,supervisor_calls,total_sim_ms,mean_ms_per_record,"
                "total_cost_units,steady_state_max_ms\n";

  std::vector<PolicyAggregate> aggs;
  SaamResult result;
  for (PolicyKind policy : policies) {
    RunOptions opt;
    opt.n_records = n;
    if (policy == PolicyKind::HybridReflex) opt.warm_cache = hybrid_cache;
    const BatchReport report = run_batch(scenario, policy, seed, opt);

    std::ofstream traces(out_dir + "/" + traces_filename(report.policy));
    if (!traces) throw SimError(out_dir + ": cannot write traces");
    std::vector<RecordStats> stats;
    for (const EpisodeTrace& t : report.episodes) {
      traces << episode_to_json(t).dump() << "\n";
      stats.push_back(stats_from_trace(t));
      metrics << t.episode << ',' << t.policy << ',' << to_string(t.status) << ','
              << (t.drifted ? 1 : 0) << ',' << (t.approved ? 1 : 0) << ','
              << (t.destroyed ? 1 : 0) << ',' << t.clicks << ',' << t.hovers << ','
              << t.ledger.reflex_steps << ',' << t.ledger.supervisor_calls << ','
              << t.ledger.total_sim_ms << ',' << num_str(t.ledger.total_cost_units) << '\n';
    }
    PolicyAggregate agg = aggregate_records(report.policy, stats);
    comparison << agg.policy << ',' << agg.records << ',' << agg.successes << ','
               << agg.safety_violations << ',' << agg.task_aborts << ',' << agg.approved_records
               << ',' << agg.clicks << ',' << agg.hovers << ',' << agg.ledger.supervisor_calls
               << ',' << agg.ledger.total_sim_ms << ',' << num_str(agg.mean_ms_per_record())
               << ',' << num_str(agg.ledger.total_cost_units) << ',' << agg.steady_state_max_ms
               << '\n';
    aggs.push_back(std::move(agg));
  }

  {
    std::ofstream m(out_dir + "/metrics.csv");
    m << metrics.str();
    std::ofstream c(out_dir + "/comparison.csv");
    c << comparison.str();
  }

  result.summary = build_summary(scenario, seed, aggs);
  {
    std::ofstream s(out_dir + "/summary.json");
    s << result.summary.dump(2) << "\n";
  }
  for (const auto& [policy, body] : result.summary["policies"].items()) {
    for (const auto& f : body["expect_failures"]) {
      result.failures.push_back(policy + ": " + f.get<std::string>());
    }
  }
  result.exit_code = result.failures.empty() ? 0 : 1;
  return result;
}

}  // namespace guidrift
