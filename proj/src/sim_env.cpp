#include "guidrift/sim_env.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace guidrift {

const char* to_string(Category c) {
  switch (c) {
    case Category::Button: return "button";
    case Category::TextField: return "text_field";
    case Category::StaticText: return "static_text";
    case Category::Icon: return "icon";
    case Category::Modal: return "modal";
  }
  return "?";
}

const char* to_string(Effect e) {
  switch (e) {
    case Effect::Submit: return "submit";
    case Effect::Delete: return "delete";
    case Effect::Cancel: return "cancel";
    case Effect::OpenModal: return "open_modal";
    case Effect::Noop: return "noop";
  }
  return "?";
}

std::optional<Category> category_from_string(const std::string& s) {
  if (s == "button") return Category::Button;
  if (s == "text_field") return Category::TextField;
  if (s == "static_text") return Category::StaticText;
  if (s == "icon") return Category::Icon;
  if (s == "modal") return Category::Modal;
  return std::nullopt;
}

std::optional<Effect> effect_from_string(const std::string& s) {
  if (s == "submit") return Effect::Submit;
  if (s == "delete") return Effect::Delete;
  if (s == "cancel") return Effect::Cancel;
  if (s == "open_modal") return Effect::OpenModal;
  if (s == "noop") return Effect::Noop;
  return std::nullopt;
}

const Widget* Screen::find(const std::string& id) const {
  for (const Widget& w : widgets)
    if (w.id == id) return &w;
  return nullptr;
}

Widget* Screen::find(const std::string& id) {
  for (Widget& w : widgets)
    if (w.id == id) return &w;
  return nullptr;
}

void Screen::validate() const {
  if (width <= 0 || height <= 0) throw SimError("screen size must be positive");
  std::set<std::string> ids;
  for (const Widget& w : widgets) {
    if (w.id.empty()) throw SimError("widget id must be non-empty");
    if (!ids.insert(w.id).second) throw SimError("duplicate widget id: " + w.id);
    if (w.bbox.w <= 0 || w.bbox.h <= 0)
      throw SimError("widget " + w.id + ": bbox must have positive extent");
    if (w.bbox.x < 0 || w.bbox.y < 0 || w.bbox.right() > width || w.bbox.bottom() > height)
      throw SimError("widget " + w.id + ": bbox outside screen bounds");
    if (w.effect != Effect::Noop && w.category != Category::Button && w.category != Category::Icon)
      throw SimError("widget " + w.id + ": only buttons and icons may carry an effect");
    for (const double v : w.style)
      if (v < 0.0 || v > 1.0) throw SimError("widget " + w.id + ": style channel outside [0,1]");
  }
}

// ---------------------------------------------------------------------------
// Drift
// ---------------------------------------------------------------------------

namespace {

void apply_drift_part(Screen& s, const DriftEventKind& event) {
  if (const auto* t = std::get_if<TranslateDrift>(&event)) {
    std::vector<Widget*> targets;
    if (t->target_ids.empty()) {
      for (Widget& w : s.widgets) targets.push_back(&w);
    } else {
      for (const std::string& id : t->target_ids) {
        Widget* w = s.find(id);
        if (!w) throw DriftTargetMissing("translate target not on screen: " + id);
        targets.push_back(w);
      }
    }
    for (Widget* w : targets) {
      const Rect moved = w->bbox.translated(t->dx, t->dy);
      if (moved.x < 0 || moved.y < 0 || moved.right() > s.width || moved.bottom() > s.height)
        throw InvalidDrift("translate pushes " + w->id + " outside screen bounds");
      w->bbox = moved;
    }
  } else if (const auto* r = std::get_if<RestyleDrift>(&event)) {
    Widget* w = s.find(r->target_id);
    if (!w) throw DriftTargetMissing("restyle target not on screen: " + r->target_id);
    w->style = r->style;
  } else if (const auto* ins = std::get_if<InsertTrapDrift>(&event)) {
    if (s.find(ins->widget.id))
      throw InvalidDrift("inserted widget id collides: " + ins->widget.id);
    s.widgets.push_back(ins->widget);
  } else if (const auto* pop = std::get_if<OpenPopupDrift>(&event)) {
    if (pop->widget.category != Category::Modal)
      throw InvalidDrift("popup widget must have modal category: " + pop->widget.id);
    if (s.find(pop->widget.id))
      throw InvalidDrift("popup widget id collides: " + pop->widget.id);
    s.widgets.push_back(pop->widget);
  } else if (const auto* c = std::get_if<CompositeDrift>(&event)) {
    for (const DriftEventKind& part : c->parts) apply_drift_part(s, part);
  }
}

}  // namespace

Screen apply_drift(const Screen& screen, const DriftEventKind& event) {
  Screen next = screen;
  apply_drift_part(next, event);
  next.validate();
  ++next.revision;
  return next;
}

// ---------------------------------------------------------------------------
// Observation / diff
// ---------------------------------------------------------------------------

ChangeReport diff_observations(const Observation& before, const Observation& after) {
  if (before.episode_tag != after.episode_tag)
    throw ObservationMismatch("observations come from different episodes");

  ChangeReport rep;
  std::map<std::string, const ObservedItem*> a, b;
  for (const ObservedItem& it : before.items) a[it.id] = &it;
  for (const ObservedItem& it : after.items) b[it.id] = &it;

  for (const auto& [id, ia] : a) {
    auto found = b.find(id);
    if (found == b.end()) {
      rep.changed_ids.push_back(id);
      rep.regions.push_back(ia->bbox);
      continue;
    }
    const ObservedItem* ib = found->second;
    const bool moved = !(ia->bbox == ib->bbox);
    const bool restyled = style_l1(ia->style, ib->style) > 0.0;
    const bool relabeled = ia->label != ib->label;
    const bool toggled = ia->enabled != ib->enabled;
    if (moved || restyled || relabeled || toggled) {
      rep.changed_ids.push_back(id);
      rep.regions.push_back(moved ? union_rect(ia->bbox, ib->bbox) : ib->bbox);
    }
  }
  for (const auto& [id, ib] : b) {
    if (!a.count(id)) {
      rep.changed_ids.push_back(id);
      rep.regions.push_back(ib->bbox);
    }
  }
  // A revision step with no widget-level delta (e.g. a successful Submit)
  // still reads as a change: the UI acknowledged the action.
  rep.changed = !rep.changed_ids.empty() || before.revision != after.revision;
  return rep;
}

// ---------------------------------------------------------------------------
// Environment
// ---------------------------------------------------------------------------

Environment::Environment(Screen screen, uint64_t episode_tag)
    : screen_(std::move(screen)), episode_tag_(episode_tag) {
  screen_.validate();
}

Observation Environment::observe() const {
  Observation obs;
  obs.episode_tag = episode_tag_;
  obs.revision = screen_.revision;
  obs.width = screen_.width;
  obs.height = screen_.height;
  obs.items.reserve(screen_.widgets.size());
  for (const Widget& w : screen_.widgets)
    obs.items.push_back({w.id, w.bbox, w.label, w.style, w.category, w.enabled, w.z_order});
  return obs;
}

const Widget* Environment::hit_test(Point p) const {
  const Widget* best = nullptr;
  for (const Widget& w : screen_.widgets) {
    if (!w.enabled || !w.bbox.contains(p)) continue;
    if (!best || w.z_order > best->z_order ||
        (w.z_order == best->z_order && w.id > best->id))
      best = &w;
  }
  return best;
}

ActionOutcome Environment::execute(const ActionCommand& cmd) {
  ActionOutcome out;

  if (const auto* click = std::get_if<ClickAction>(&cmd)) {
    const Widget* w = hit_test(click->at);
    if (w) {
      out.widget_id = w->id;
      out.effect = w->effect;
      switch (w->effect) {
        case Effect::Submit:
          approved_ = true;
          out.mutated = true;
          break;
        case Effect::Delete:
          destroyed_ = true;
          out.safety_hazard = true;
          out.mutated = true;
          break;
        case Effect::Cancel: {
          // Dismisses any open modal surfaces.
          std::erase_if(screen_.widgets,
                        [](const Widget& x) { return x.category == Category::Modal; });
          out.mutated = true;
          break;
        }
        case Effect::OpenModal: {
          if (popup_ && !screen_.find(popup_->id)) screen_.widgets.push_back(*popup_);
          out.mutated = true;
          break;
        }
        case Effect::Noop:
          break;
      }
    }
  } else if (const auto* hover = std::get_if<HoverAction>(&cmd)) {
    const Widget* w = hit_test(hover->at);
    if (w) {
      out.widget_id = w->id;
      // Behavioral category: elements that cannot react (no effect, or
      // disabled) present as inert decoration, the way a cursor that never
      // changes shape would reveal them.
      const bool reactive = w->enabled && w->effect != Effect::Noop;
      out.hover_category = reactive ? w->category : Category::StaticText;
    }
  } else if (std::get_if<ScrollAction>(&cmd)) {
    // Viewport is not modeled; scrolling is an epistemic no-op.
  } else if (const auto* type = std::get_if<TypeAction>(&cmd)) {
    const Widget* w = hit_test(type->at);
    if (w) {
      out.widget_id = w->id;
      if (w->category == Category::TextField) {
        screen_.find(w->id)->label = type->text;
        out.mutated = true;
      }
    }
  }

  if (out.mutated) bump_revision();
  out.revision_after = screen_.revision;
  return out;
}

}  // namespace guidrift
