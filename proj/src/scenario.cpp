#include "guidrift/scenario.hpp"

#include <fstream>
#include <sstream>

namespace guidrift {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ScenarioError(path + ": " + msg);
}

std::string child(const std::string& path, const std::string& key) { return path + "." + key; }
std::string elem(const std::string& path, size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const ordered_json& require(const ordered_json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing required field '") + key + "'");
  return *it;
}

double as_number(const ordered_json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int64_t as_int(const ordered_json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int64_t>();
}

std::string as_string(const ordered_json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

bool as_bool(const ordered_json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

Rect parse_rect(const ordered_json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4) fail(path, "expected [x, y, w, h]");
  Rect r;
  r.x = static_cast<int>(as_int(j[0], elem(path, 0)));
  r.y = static_cast<int>(as_int(j[1], elem(path, 1)));
  r.w = static_cast<int>(as_int(j[2], elem(path, 2)));
  r.h = static_cast<int>(as_int(j[3], elem(path, 3)));
  return r;
}

StyleSignature parse_style(const ordered_json& j, const std::string& path) {
  if (!j.is_array() || j.size() != kStyleChannels) {
    fail(path, "expected an array of " + std::to_string(kStyleChannels) + " channels");
  }
  StyleSignature s{};
  for (size_t i = 0; i < kStyleChannels; ++i) s[i] = as_number(j[i], elem(path, i));
  return s;
}

Widget parse_widget(const ordered_json& j, const std::string& path) {
  Widget w;
  w.id = as_string(require(j, "id", path), child(path, "id"));
  w.bbox = parse_rect(require(j, "bbox", path), child(path, "bbox"));
  if (j.contains("label")) w.label = as_string(j["label"], child(path, "label"));
  if (j.contains("style")) w.style = parse_style(j["style"], child(path, "style"));
  const std::string cat = as_string(require(j, "category", path), child(path, "category"));
  const auto c = category_from_string(cat);
  if (!c) fail(child(path, "category"), "unknown category '" + cat + "'");
  w.category = *c;
  if (j.contains("effect")) {
    const std::string eff = as_string(j["effect"], child(path, "effect"));
    const auto e = effect_from_string(eff);
    if (!e) fail(child(path, "effect"), "unknown effect '" + eff + "'");
    w.effect = *e;
  }
  if (j.contains("enabled")) w.enabled = as_bool(j["enabled"], child(path, "enabled"));
  if (j.contains("z_order")) {
    w.z_order = static_cast<int>(as_int(j["z_order"], child(path, "z_order")));
  }
  return w;
}

Screen parse_screen(const ordered_json& j, const std::string& path) {
  Screen s;
  const ordered_json& size = require(j, "size", path);
  if (!size.is_array() || size.size() != 2) fail(child(path, "size"), "expected [width, height]");
  s.width = static_cast<int>(as_int(size[0], child(path, "size[0]")));
  s.height = static_cast<int>(as_int(size[1], child(path, "size[1]")));
  const ordered_json& widgets = require(j, "widgets", path);
  if (!widgets.is_array()) fail(child(path, "widgets"), "expected an array");
  for (size_t i = 0; i < widgets.size(); ++i) {
    s.widgets.push_back(parse_widget(widgets[i], elem(child(path, "widgets"), i)));
  }
  try {
    s.validate();
  } catch (const SimError& e) {
    fail(child(path, "widgets"), e.what());
  }
  return s;
}

DriftEventKind parse_drift_kind(const ordered_json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1) {
    fail(path, "expected exactly one of translate/restyle/insert_trap/open_popup/composite");
  }
  const std::string kind = j.begin().key();
  const ordered_json& body = j.begin().value();
  const std::string p = child(path, kind);
  if (kind == "translate") {
    TranslateDrift d;
    d.dx = static_cast<int>(as_int(require(body, "dx", p), child(p, "dx")));
    d.dy = static_cast<int>(as_int(require(body, "dy", p), child(p, "dy")));
    if (body.contains("targets")) {
      const ordered_json& t = body["targets"];
      if (!t.is_array()) fail(child(p, "targets"), "expected an array of widget ids");
      for (size_t i = 0; i < t.size(); ++i) {
        d.target_ids.push_back(as_string(t[i], elem(child(p, "targets"), i)));
      }
    }
    return d;
  }
  if (kind == "restyle") {
    RestyleDrift d;
    d.target_id = as_string(require(body, "id", p), child(p, "id"));
    d.style = parse_style(require(body, "style", p), child(p, "style"));
    return d;
  }
  if (kind == "insert_trap") {
    InsertTrapDrift d;
    d.widget = parse_widget(require(body, "widget", p), child(p, "widget"));
    return d;
  }
  if (kind == "open_popup") {
    OpenPopupDrift d;
    d.widget = parse_widget(require(body, "widget", p), child(p, "widget"));
    return d;
  }
  if (kind == "composite") {
    CompositeDrift d;
    if (!body.is_array()) fail(p, "expected an array of drift parts");
    for (size_t i = 0; i < body.size(); ++i) {
      d.parts.push_back(parse_drift_kind(body[i], elem(p, i)));
    }
    return d;
  }
  fail(path, "unknown drift kind '" + kind + "'");
}

DriftTrigger parse_trigger(const ordered_json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1) fail(path, "expected one of at_episode/bernoulli");
  const std::string kind = j.begin().key();
  if (kind == "at_episode") {
    TriggerAtEpisode t;
    t.episode = as_int(j.begin().value(), child(path, "at_episode"));
    if (t.episode < 0) fail(child(path, "at_episode"), "episode must be >= 0");
    return t;
  }
  if (kind == "bernoulli") {
    TriggerBernoulli t;
    t.p = as_number(j.begin().value(), child(path, "bernoulli"));
    if (t.p < 0.0 || t.p > 1.0) fail(child(path, "bernoulli"), "p must be in [0, 1]");
    return t;
  }
  fail(path, "unknown trigger kind '" + kind + "'");
}

NoiseModel parse_noise(const ordered_json& j, const std::string& path) {
  NoiseModel n = NoiseModel::zero();
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string p = child(path, key);
    if (key == "jitter_sigma") n.jitter_sigma = as_number(value, p);
    else if (key == "miss_prob") n.miss_prob = as_number(value, p);
    else if (key == "false_positive_rate") n.false_positive_rate = as_number(value, p);
    else if (key == "misread_prob") n.misread_prob = as_number(value, p);
    else if (key == "confidence_floor") n.confidence_floor = as_number(value, p);
    else if (key == "confidence_ceiling") n.confidence_ceiling = as_number(value, p);
    else fail(p, "unknown noise field");
  }
  return n;
}

RelativeAddress parse_address(const ordered_json& j, const std::string& path) {
  RelativeAddress a;
  a.target_label = as_string(require(j, "label", path), child(path, "label"));
  if (j.contains("path")) {
    const ordered_json& p = j["path"];
    if (!p.is_array()) fail(child(path, "path"), "expected an array of container labels");
    for (size_t i = 0; i < p.size(); ++i) {
      a.container_path.push_back(as_string(p[i], elem(child(path, "path"), i)));
    }
  }
  return a;
}

Effect parse_effect(const ordered_json& j, const std::string& path) {
  const std::string s = as_string(j, path);
  const auto e = effect_from_string(s);
  if (!e) fail(path, "unknown effect '" + s + "'");
  return *e;
}

Precondition parse_precondition(const ordered_json& j, const std::string& path) {
  const std::string kind = as_string(require(j, "kind", path), child(path, "kind"));
  if (kind == "target_effect_is") {
    TargetEffectIs p;
    p.address = parse_address(require(j, "target", path), child(path, "target"));
    p.effect = parse_effect(require(j, "effect", path), child(path, "effect"));
    return p;
  }
  if (kind == "target_effect_is_not") {
    TargetEffectIsNot p;
    p.address = parse_address(require(j, "target", path), child(path, "target"));
    p.effect = parse_effect(require(j, "effect", path), child(path, "effect"));
    return p;
  }
  if (kind == "field_non_empty") {
    FieldNonEmpty p;
    p.address = parse_address(require(j, "target", path), child(path, "target"));
    return p;
  }
  if (kind == "exists_target") {
    ExistsTarget p;
    p.address = parse_address(require(j, "target", path), child(path, "target"));
    return p;
  }
  if (kind == "not_exists_label") {
    NotExistsLabel p;
    p.label = as_string(require(j, "label", path), child(path, "label"));
    return p;
  }
  fail(child(path, "kind"), "unknown precondition kind '" + kind + "'");
}

PlanStep parse_step(const ordered_json& j, const std::string& path) {
  PlanStep s;
  s.address = parse_address(require(j, "target", path), child(path, "target"));
  if (j.contains("action")) {
    s.action = as_string(j["action"], child(path, "action"));
    if (s.action != "click" && s.action != "hover" && s.action != "type" && s.action != "scroll") {
      fail(child(path, "action"), "unknown action '" + s.action + "'");
    }
  }
  if (j.contains("intent")) s.declared_intent = parse_effect(j["intent"], child(path, "intent"));
  if (j.contains("preconditions")) {
    const ordered_json& pre = j["preconditions"];
    if (!pre.is_array()) fail(child(path, "preconditions"), "expected an array");
    for (size_t i = 0; i < pre.size(); ++i) {
      s.preconditions.push_back(parse_precondition(pre[i], elem(child(path, "preconditions"), i)));
    }
  }
  if (j.contains("expected_change")) {
    s.expected_change = as_bool(j["expected_change"], child(path, "expected_change"));
  }
  if (j.contains("rpa_point")) {
    const ordered_json& p = j["rpa_point"];
    if (!p.is_array() || p.size() != 2) fail(child(path, "rpa_point"), "expected [x, y]");
    s.rpa_point = Point{static_cast<int>(as_int(p[0], child(path, "rpa_point[0]"))),
                        static_cast<int>(as_int(p[1], child(path, "rpa_point[1]")))};
  }
  if (j.contains("type_text")) s.type_text = as_string(j["type_text"], child(path, "type_text"));
  if (s.action == "type" && s.type_text.empty()) {
    fail(path, "a 'type' step requires non-empty type_text");
  }
  return s;
}

PolicyDefaults parse_defaults(const ordered_json& j, const std::string& path) {
  PolicyDefaults d;
  for (const auto& [key, value] : j.items()) {
    const std::string p = child(path, key);
    if (key == "tau") d.tau = as_number(value, p);
    else if (key == "reflex_ms") d.rates.reflex_ms = as_int(value, p);
    else if (key == "supervisor_ms") d.rates.supervisor_ms = as_int(value, p);
    else if (key == "reflex_cost") d.rates.reflex_cost_units = as_number(value, p);
    else if (key == "supervisor_cost") d.rates.supervisor_cost_units = as_number(value, p);
    else if (key == "downgrade_factor") d.downgrade_factor = as_number(value, p);
    else if (key == "iou_threshold") d.iou_threshold = as_number(value, p);
    else if (key == "supervisor_error_prob") d.supervisor_error_prob = as_number(value, p);
    else if (key == "records") d.records = static_cast<int>(as_int(value, p));
    else fail(p, "unknown policy default");
  }
  if (d.tau < 0.0 || d.tau > 1.0) fail(child(path, "tau"), "tau must be in [0, 1]");
  if (d.records < 1) fail(child(path, "records"), "records must be >= 1");
  return d;
}

VisualAnchor parse_anchor(const ordered_json& j, const std::string& path) {
  VisualAnchor a;
  a.semantic_key = as_string(require(j, "key", path), child(path, "key"));
  a.template_signature = parse_style(require(j, "template", path), child(path, "template"));
  a.expected_bbox = parse_rect(require(j, "bbox", path), child(path, "bbox"));
  if (j.contains("revision")) a.last_verified_revision = as_int(j["revision"], child(path, "revision"));
  return a;
}

PolicyExpect parse_expect_one(const ordered_json& j, const std::string& path) {
  PolicyExpect e;
  for (const auto& [key, value] : j.items()) {
    const std::string p = child(path, key);
    if (key == "final_status") e.final_status = as_string(value, p);
    else if (key == "safety_violations") e.safety_violations = as_int(value, p);
    else if (key == "supervisor_calls") e.supervisor_calls = as_int(value, p);
    else if (key == "drift_supervisor_calls") e.drift_supervisor_calls = as_int(value, p);
    else if (key == "cold_start_supervisor_calls") e.cold_start_supervisor_calls = as_int(value, p);
    else if (key == "clicks") e.clicks = as_int(value, p);
    else if (key == "hovers") e.hovers = as_int(value, p);
    else if (key == "approved_records") e.approved_records = as_int(value, p);
    else if (key == "total_ms_lt") e.total_ms_lt = as_int(value, p);
    else if (key == "steady_state_ms_lt") e.steady_state_ms_lt = as_int(value, p);
    else if (key == "total_ms_within_pct") {
      PolicyExpect::WithinPct w;
      w.base = as_number(require(value, "base", p), child(p, "base"));
      w.pct = as_number(require(value, "pct", p), child(p, "pct"));
      e.total_ms_within_pct = w;
    } else {
      fail(p, "unknown expectation field");
    }
  }
  return e;
}

SweepSpec parse_sweep(const ordered_json& j, const std::string& path) {
  SweepSpec s;
  s.target_id = as_string(require(j, "target_id", path), child(path, "target_id"));
  const ordered_json& t = require(j, "translate", path);
  if (!t.is_array() || t.size() != 2) fail(child(path, "translate"), "expected [dx, dy]");
  s.dx = static_cast<int>(as_int(t[0], child(path, "translate[0]")));
  s.dy = static_cast<int>(as_int(t[1], child(path, "translate[1]")));
  s.style_a = parse_style(require(j, "style_a", path), child(path, "style_a"));
  s.style_b = parse_style(require(j, "style_b", path), child(path, "style_b"));
  return s;
}

}  // namespace

FusionConfig Scenario::fusion_config() const {
  FusionConfig cfg;
  cfg.iou_threshold = defaults.iou_threshold;
  cfg.conflict_downgrade = defaults.downgrade_factor;
  if (!actionable.empty()) {
    cfg.actionable_lexicon.clear();
    cfg.actionable_lexicon.insert(actionable.begin(), actionable.end());
  }
  return cfg;
}

Scenario parse_scenario(const ordered_json& j) {
  const std::string root = "$";
  Scenario s;
  s.name = as_string(require(j, "name", root), "$.name");
  if (j.contains("seed")) {
    const int64_t seed = as_int(j["seed"], "$.seed");
    if (seed < 0) fail("$.seed", "seed must be >= 0");
    s.seed = static_cast<uint64_t>(seed);
  }
  s.screen = parse_screen(require(j, "screen", root), "$.screen");
  if (j.contains("popup")) s.popup = parse_widget(j["popup"], "$.popup");
  if (j.contains("drift_events")) {
    const ordered_json& events = j["drift_events"];
    if (!events.is_array()) fail("$.drift_events", "expected an array");
    for (size_t i = 0; i < events.size(); ++i) {
      const std::string p = elem("$.drift_events", i);
      DriftEvent ev;
      ev.trigger = parse_trigger(require(events[i], "trigger", p), child(p, "trigger"));
      ev.event = parse_drift_kind(require(events[i], "event", p), child(p, "event"));
      s.drift_events.push_back(std::move(ev));
    }
  }
  if (j.contains("noise")) s.noise = parse_noise(j["noise"], "$.noise");
  const ordered_json& plan = require(j, "plan", root);
  if (!plan.is_array() || plan.empty()) fail("$.plan", "expected a non-empty array of steps");
  for (size_t i = 0; i < plan.size(); ++i) {
    s.plan.steps.push_back(parse_step(plan[i], elem("$.plan", i)));
  }
  if (j.contains("lexicon")) {
    const ordered_json& lex = j["lexicon"];
    if (lex.contains("actionable")) {
      const ordered_json& a = lex["actionable"];
      if (!a.is_array()) fail("$.lexicon.actionable", "expected an array");
      for (size_t i = 0; i < a.size(); ++i) {
        s.actionable.push_back(as_string(a[i], elem("$.lexicon.actionable", i)));
      }
    }
    if (lex.contains("destructive")) {
      const ordered_json& d = lex["destructive"];
      if (!d.is_array()) fail("$.lexicon.destructive", "expected an array");
      s.lexicon.destructive.clear();
      for (size_t i = 0; i < d.size(); ++i) {
        s.lexicon.destructive.insert(as_string(d[i], elem("$.lexicon.destructive", i)));
      }
    }
    if (lex.contains("intent_effects")) {
      const ordered_json& m = lex["intent_effects"];
      if (!m.is_object()) fail("$.lexicon.intent_effects", "expected an object");
      s.lexicon.effects.clear();
      for (const auto& [text, eff] : m.items()) {
        s.lexicon.effects[text] = parse_effect(eff, child("$.lexicon.intent_effects", text));
      }
    }
  }
  if (j.contains("policy_defaults")) {
    s.defaults = parse_defaults(j["policy_defaults"], "$.policy_defaults");
  }
  if (j.contains("anchor_cache")) {
    s.cache = cache_from_json(j["anchor_cache"]);
  }
  s.cache.tau = s.defaults.tau;
  if (j.contains("sweep")) {
    s.sweep = parse_sweep(j["sweep"], "$.sweep");
    if (!s.screen.find(s.sweep->target_id)) {
      fail("$.sweep.target_id", "no widget with id '" + s.sweep->target_id + "'");
    }
  }
  if (j.contains("expect")) {
    const ordered_json& ex = j["expect"];
    if (!ex.is_object()) fail("$.expect", "expected an object keyed by policy");
    for (const auto& [policy, body] : ex.items()) {
      if (policy != "rpa" && policy != "vla" && policy != "hybrid") {
        fail(child("$.expect", policy), "unknown policy key");
      }
      s.expect[policy] = parse_expect_one(body, child("$.expect", policy));
    }
  }
  for (size_t i = 0; i < s.plan.steps.size(); ++i) {
    const PlanStep& st = s.plan.steps[i];
    if (st.action == "click" && !st.rpa_point) {
      fail(elem("$.plan", i), "click steps need rpa_point for open-loop playback");
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open file");
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError(path + ": " + e.what());
  }
  try {
    return parse_scenario(j);
  } catch (const ScenarioError& e) {
    throw ScenarioError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

ordered_json rect_to_json(const Rect& r) { return ordered_json::array({r.x, r.y, r.w, r.h}); }

ordered_json style_to_json(const StyleSignature& s) {
  ordered_json a = ordered_json::array();
  for (double v : s) a.push_back(v);
  return a;
}

ordered_json widget_to_json(const Widget& w) {
  ordered_json j;
  j["id"] = w.id;
  j["bbox"] = rect_to_json(w.bbox);
  j["label"] = w.label;
  j["style"] = style_to_json(w.style);
  j["category"] = to_string(w.category);
  j["effect"] = to_string(w.effect);
  j["enabled"] = w.enabled;
  j["z_order"] = w.z_order;
  return j;
}

ordered_json observation_to_json(const Observation& obs) {
  ordered_json j;
  j["revision"] = obs.revision;
  j["size"] = ordered_json::array({obs.width, obs.height});
  ordered_json items = ordered_json::array();
  for (const ObservedItem& it : obs.items) {
    ordered_json o;
    o["id"] = it.id;
    o["bbox"] = rect_to_json(it.bbox);
    o["label"] = it.label;
    o["category"] = to_string(it.category);
    o["enabled"] = it.enabled;
    o["z_order"] = it.z_order;
    items.push_back(std::move(o));
  }
  j["items"] = std::move(items);
  return j;
}

ordered_json affordance_to_json(const Affordance& a) {
  ordered_json j;
  j["id"] = a.id;
  j["bbox"] = rect_to_json(a.bbox);
  j["category"] = to_string(a.category);
  j["text"] = a.text ? ordered_json(*a.text) : ordered_json(nullptr);
  j["confidence"] = a.confidence;
  j["uncertain"] = a.uncertain;
  j["provenance"] = to_string(a.provenance);
  return j;
}

namespace {
ordered_json node_to_json(const UITree& tree, int id) {
  const UINode& n = tree.at(id);
  ordered_json j;
  j["kind"] = to_string(n.kind);
  if (n.kind != NodeKind::Leaf && !n.group_label.empty()) {
    j["label"] = n.group_label;
    j["synthetic_label"] = n.synthetic_label;
  }
  j["bbox"] = rect_to_json(n.bbox);
  if (n.affordance) j["affordance"] = *n.affordance;
  if (!n.children.empty()) {
    ordered_json kids = ordered_json::array();
    for (int c : n.children) kids.push_back(node_to_json(tree, c));
    j["children"] = std::move(kids);
  }
  return j;
}
}  // namespace

ordered_json tree_to_json(const UITree& tree) { return node_to_json(tree, 0); }

ordered_json graph_to_json(const SceneGraph& graph) {
  ordered_json j;
  j["revision"] = graph.built_at_revision();
  ordered_json nodes = ordered_json::array();
  for (const SceneNode& n : graph.nodes()) {
    ordered_json o;
    o["id"] = n.id;
    o["kind"] = to_string(n.kind);
    o["bbox"] = rect_to_json(n.bbox);
    if (!n.label.empty()) o["label"] = n.label;
    if (n.text) o["text"] = *n.text;
    if (n.category) o["category"] = to_string(*n.category);
    if (n.annotated_effect) o["effect"] = to_string(*n.annotated_effect);
    if (n.affordance) o["affordance"] = *n.affordance;
    nodes.push_back(std::move(o));
  }
  j["nodes"] = std::move(nodes);
  ordered_json edges = ordered_json::array();
  for (const SceneEdge& e : graph.edges()) {
    edges.push_back(ordered_json{{"from", e.from}, {"to", e.to}, {"type", to_string(e.type)}});
  }
  j["edges"] = std::move(edges);
  return j;
}

ordered_json cache_to_json(const AnchorCache& cache) {
  ordered_json j;
  j["tau"] = cache.tau;
  ordered_json entries = ordered_json::array();
  for (const auto& [key, a] : cache.entries) {
    ordered_json e;
    e["key"] = key;
    e["template"] = style_to_json(a.template_signature);
    e["bbox"] = rect_to_json(a.expected_bbox);
    e["revision"] = a.last_verified_revision;
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j;
}

AnchorCache cache_from_json(const ordered_json& j) {
  const std::string root = "$.anchor_cache";
  AnchorCache cache;
  if (j.contains("tau")) cache.tau = as_number(j["tau"], child(root, "tau"));
  if (j.contains("entries")) {
    const ordered_json& entries = j["entries"];
    if (!entries.is_array()) fail(child(root, "entries"), "expected an array");
    for (size_t i = 0; i < entries.size(); ++i) {
      VisualAnchor a = parse_anchor(entries[i], elem(child(root, "entries"), i));
      cache.entries[a.semantic_key] = std::move(a);
    }
  }
  return cache;
}

void save_cache(const AnchorCache& cache, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ScenarioError(path + ": cannot open for writing");
  out << cache_to_json(cache).dump(2) << "\n";
}

AnchorCache load_cache(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open file");
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError(path + ": " + e.what());
  }
  return cache_from_json(j);
}

}  // namespace guidrift
