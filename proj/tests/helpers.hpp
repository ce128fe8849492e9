#pragma once

// Shared fixtures: canonical screens and scenario loading for the test
// suites. Scenario files are found through GUIDRIFT_SCENARIO_DIR (env var
// wins, compile definition is the fallback).

#include <cstdlib>
#include <string>
#include <vector>

#include "guidrift/scenario.hpp"

namespace testutil {

using namespace guidrift;

inline std::string scenario_dir() {
  if (const char* env = std::getenv("GUIDRIFT_SCENARIO_DIR")) return env;
#ifdef GUIDRIFT_SCENARIO_DIR
  return GUIDRIFT_SCENARIO_DIR;
#else
  return "scenarios";
#endif
}

inline std::string scenario_path(const std::string& name) {
  return scenario_dir() + "/" + name;
}

inline Scenario load_fixture(const std::string& name) {
  return load_scenario(scenario_path(name));
}

// Styles used across suites.
inline StyleSignature blue_style() { return {0.10, 0.30, 0.85, 0.20, 0.65, 0.40, 0.55, 0.30}; }
inline StyleSignature green_style() { return {0.10, 0.80, 0.25, 0.20, 0.65, 0.40, 0.55, 0.30}; }
inline StyleSignature red_style() { return {0.85, 0.12, 0.15, 0.70, 0.25, 0.60, 0.35, 0.55}; }
inline StyleSignature gray_style() { return {0.70, 0.70, 0.72, 0.20, 0.65, 0.40, 0.55, 0.30}; }
inline StyleSignature text_style() { return {0.15, 0.15, 0.18, 0.0, 0.0, 0.0, 0.2, 0.2}; }
inline StyleSignature panel_style() { return {0.92, 0.92, 0.94, 0.10, 0.10, 0.10, 0.50, 0.50}; }
inline StyleSignature field_style() { return {0.98, 0.98, 0.98, 0.3, 0.3, 0.3, 0.6, 0.6}; }

inline Widget make_widget(std::string id, Rect bbox, Category cat, std::string label = "",
                          Effect effect = Effect::Noop, StyleSignature style = {},
                          int z = 1, bool enabled = true) {
  Widget w;
  w.id = std::move(id);
  w.bbox = bbox;
  w.category = cat;
  w.label = std::move(label);
  w.effect = effect;
  w.style = style;
  w.z_order = z;
  w.enabled = enabled;
  return w;
}

// The invoice screen most suites exercise: a panel-backed form holding a
// labeled amount field and a submit/cancel button pair.
inline Screen invoice_screen() {
  Screen s;
  s.width = 1280;
  s.height = 960;
  s.widgets = {
      make_widget("invoice_form_panel", {80, 80, 640, 520}, Category::TextField, "",
                  Effect::Noop, panel_style(), 0),
      make_widget("form_title", {100, 100, 160, 24}, Category::StaticText, "Invoice_Form",
                  Effect::Noop, text_style()),
      make_widget("invoice_no", {100, 130, 140, 20}, Category::StaticText, "Invoice #10231",
                  Effect::Noop, text_style()),
      make_widget("amount_label", {100, 160, 90, 24}, Category::StaticText, "Amount:",
                  Effect::Noop, text_style()),
      make_widget("amount_field", {200, 160, 180, 28}, Category::TextField, "1250.00",
                  Effect::Noop, field_style()),
      make_widget("submit_btn", {200, 480, 48, 28}, Category::Button, "Submit", Effect::Submit,
                  blue_style()),
      make_widget("cancel_btn", {300, 480, 48, 28}, Category::Button, "Cancel", Effect::Cancel,
                  gray_style()),
      make_widget("version_note", {100, 560, 110, 20}, Category::StaticText, "Version 2.0",
                  Effect::Noop, {0.55, 0.55, 0.58, 0.0, 0.0, 0.0, 0.2, 0.2}),
  };
  return s;
}

// Zero-noise sense-and-structure pass over one screen.
struct Parsed {
  Observation obs;
  std::vector<Affordance> affordances;
  UITree tree;
};

inline Parsed sense(const Screen& screen, uint64_t seed = 1) {
  Environment env(screen, seed);
  Observation obs = env.observe();
  Rng det = substream(seed, uint64_t{0}, std::string_view("det"));
  Rng ocr = substream(seed, uint64_t{0}, std::string_view("ocr"));
  auto dets = detect_widgets(obs, NoiseModel::zero(), det);
  auto texts = read_text(obs, NoiseModel::zero(), ocr);
  auto affs = fuse_frame(dets, texts, FusionConfig{});
  UITree tree = parse_layout(affs, HierarchyConfig{});
  return {std::move(obs), std::move(affs), std::move(tree)};
}

// Label-and-kind skeleton: one line per node, indentation = depth. The
// structural fingerprint used by isomorphism checks.
inline void skeleton_rec(const UITree& tree, const std::vector<Affordance>& affs, int id,
                         int depth, std::string& out) {
  const UINode& n = tree.at(id);
  out.append(static_cast<size_t>(depth) * 2, ' ');
  out += to_string(n.kind);
  if (n.kind != NodeKind::Leaf) {
    out += ' ';
    out += n.synthetic_label ? "<synthetic>" : n.group_label;
  } else if (n.affordance) {
    const Affordance& a = affs[static_cast<size_t>(*n.affordance)];
    out += ' ';
    out += to_string(a.category);
    if (a.text) {
      out += ' ';
      out += *a.text;
    }
  }
  out += '\n';
  for (const int c : n.children) skeleton_rec(tree, affs, c, depth + 1, out);
}

inline std::string skeleton(const UITree& tree, const std::vector<Affordance>& affs) {
  std::string out;
  skeleton_rec(tree, affs, 0, 0, out);
  return out;
}

}  // namespace testutil
