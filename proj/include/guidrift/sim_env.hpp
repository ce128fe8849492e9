#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "guidrift/geom.hpp"

namespace guidrift {

// 8-channel appearance descriptor in [0,1] (think: dominant colors, border,
// corner radius...). The simulator treats it as an opaque vector; only L1
// distance between signatures is ever interpreted.
using StyleSignature = std::array<double, 8>;
inline constexpr size_t kStyleChannels = std::tuple_size<StyleSignature>::value;

inline double style_l1(const StyleSignature& a, const StyleSignature& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

// Normalized similarity: 1.0 identical, 0.0 maximally distant.
inline double style_similarity(const StyleSignature& a, const StyleSignature& b) {
  return 1.0 - style_l1(a, b) / static_cast<double>(a.size());
}

enum class Category { Button, TextField, StaticText, Icon, Modal };
enum class Effect { Submit, Delete, Cancel, OpenModal, Noop };

const char* to_string(Category c);
const char* to_string(Effect e);
std::optional<Category> category_from_string(const std::string& s);
std::optional<Effect> effect_from_string(const std::string& s);

struct Widget {
  std::string id;
  Rect bbox;
  std::string label;  // rendered text; empty means unlabeled
  StyleSignature style{};
  Category category = Category::Button;
  Effect effect = Effect::Noop;
  bool enabled = true;
  int z_order = 0;
};

// Invariants: positive bbox inside screen bounds, unique ids, and only
// buttons/icons may carry a non-Noop effect. validate() throws on violation.
struct Screen {
  int width = 0;
  int height = 0;
  std::vector<Widget> widgets;
  int64_t revision = 0;

  const Widget* find(const std::string& id) const;
  Widget* find(const std::string& id);
  void validate() const;
};

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// apply_drift naming an id that does not exist on the screen.
struct DriftTargetMissing : SimError {
  using SimError::SimError;
};
// Structurally invalid drift: out-of-bounds result, id collision, bad widget.
struct InvalidDrift : SimError {
  using SimError::SimError;
};
// diff_observations across episode boundaries.
struct ObservationMismatch : SimError {
  using SimError::SimError;
};

// ---------------------------------------------------------------------------
// Drift events
// ---------------------------------------------------------------------------

struct TranslateDrift {
  int dx = 0;
  int dy = 0;
  std::vector<std::string> target_ids;  // empty = every widget
};
struct RestyleDrift {
  std::string target_id;
  StyleSignature style{};
};
struct InsertTrapDrift {
  Widget widget;
};
struct OpenPopupDrift {
  Widget widget;  // must be Category::Modal
};
struct CompositeDrift;

using DriftEventKind =
    std::variant<TranslateDrift, RestyleDrift, InsertTrapDrift, OpenPopupDrift, CompositeDrift>;

struct CompositeDrift {
  std::vector<DriftEventKind> parts;
};

// When a scheduled event fires in a batch.
struct TriggerAtEpisode {
  int episode = 0;
};
struct TriggerBernoulli {
  double p = 0.0;
};
using DriftTrigger = std::variant<TriggerAtEpisode, TriggerBernoulli>;

struct DriftEvent {
  DriftTrigger trigger;
  DriftEventKind event;
};

// Pure: returns the mutated copy, revision +1 (a composite counts as one
// mutation). Throws DriftTargetMissing / InvalidDrift; on throw the input is
// untouched and no partial composite is observable.
Screen apply_drift(const Screen& screen, const DriftEventKind& event);

// ---------------------------------------------------------------------------
// Actions
// ---------------------------------------------------------------------------

struct ClickAction {
  Point at;
};
struct HoverAction {
  Point at;
};
struct ScrollAction {
  int dy = 0;
};
struct TypeAction {
  std::string text;
  Point at;
};
using ActionCommand = std::variant<ClickAction, HoverAction, ScrollAction, TypeAction>;

struct ActionOutcome {
  Effect effect = Effect::Noop;
  std::optional<std::string> widget_id;      // what the point resolved to
  std::optional<Category> hover_category;    // Hover only; behavioral category
  bool safety_hazard = false;                // a destructive effect fired
  bool mutated = false;
  int64_t revision_after = 0;
};

// Monotone simulated clock, milliseconds. Advances only via charge().
class SimClock {
 public:
  int64_t now_ms() const { return now_; }
  void charge(int64_t ms) {
    if (ms < 0) throw SimError("clock charge must be non-negative");
    now_ += ms;
  }

 private:
  int64_t now_ = 0;
};

// ---------------------------------------------------------------------------
// Observations
// ---------------------------------------------------------------------------

// Renderable facts for one widget, as a screenshot would show them. Internal
// ids ride along for region bookkeeping (diffing, style sampling); policies
// must consume observations only through the perception module.
struct ObservedItem {
  std::string id;
  Rect bbox;
  std::string label;
  StyleSignature style{};
  Category category = Category::Button;
  bool enabled = true;
  int z_order = 0;
};

struct Observation {
  uint64_t episode_tag = 0;  // diff guard: both sides must share it
  int64_t revision = 0;
  int width = 0;
  int height = 0;
  std::vector<ObservedItem> items;
};

struct ChangeReport {
  bool changed = false;
  std::vector<Rect> regions;             // union of before/after boxes per change
  std::vector<std::string> changed_ids;  // sorted
};

// Pure. Throws ObservationMismatch when the episode tags differ.
ChangeReport diff_observations(const Observation& before, const Observation& after);

// ---------------------------------------------------------------------------
// Environment
// ---------------------------------------------------------------------------

// Owns the live screen, the simulated clock and per-record task flags.
// Policies interact exclusively through observe()/execute(); apply_drift is
// the test-harness / batch-driver port.
class Environment {
 public:
  Environment(Screen screen, uint64_t episode_tag);

  const Screen& screen() const { return screen_; }
  SimClock& clock() { return clock_; }
  const SimClock& clock() const { return clock_; }

  bool record_approved() const { return approved_; }
  bool record_destroyed() const { return destroyed_; }
  // A new record starts on the same (possibly drifted) screen.
  void reset_record_flags() {
    approved_ = false;
    destroyed_ = false;
  }

  void set_popup_prototype(Widget w) { popup_ = std::move(w); }

  Observation observe() const;
  ActionOutcome execute(const ActionCommand& cmd);
  void drift(const DriftEventKind& event) { screen_ = apply_drift(screen_, event); }

  // Topmost enabled widget under the point: max z_order, ties to the larger
  // id. Returns nullptr over empty space.
  const Widget* hit_test(Point p) const;

 private:
  void bump_revision() { ++screen_.revision; }

  Screen screen_;
  SimClock clock_;
  std::optional<Widget> popup_;
  uint64_t episode_tag_;
  bool approved_ = false;
  bool destroyed_ = false;
};

}  // namespace guidrift
