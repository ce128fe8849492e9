#pragma once

#include <optional>
#include <string>
#include <vector>

#include "guidrift/rng.hpp"
#include "guidrift/sim_env.hpp"

namespace guidrift {

// One localized widget hypothesis. source_widget links back to ground truth
// for oracles and supervisor bookkeeping only; policies must not read it.
struct DetectionBox {
  Rect bbox;
  Category category = Category::Button;
  double confidence = 1.0;
  std::optional<std::string> source_widget;
};

struct TextBox {
  Rect bbox;
  std::string text;
  double confidence = 1.0;
  std::optional<std::string> source_widget;
};

struct NoiseModel {
  double jitter_sigma = 0.0;        // px stddev on box corners
  double miss_prob = 0.0;           // per-element drop probability
  double false_positive_rate = 0.0; // expected spurious boxes per frame
  double misread_prob = 0.0;        // per-text corruption probability
  double confidence_floor = 1.0;
  double confidence_ceiling = 1.0;

  // All-zero noise: outputs reproduce the screen exactly.
  static NoiseModel zero() { return {}; }
  // Repo default operating point for noisy experiments.
  static NoiseModel defaults() { return {2.0, 0.02, 0.1, 0.02, 0.7, 1.0}; }
};

// Spurious detections never report confidence above this.
inline constexpr double kFalsePositiveConfidenceCap = 0.7;

// Widget detector. One box per non-static widget surviving the miss draw;
// static text is invisible to it (it finds widgets, not words). Category
// guesses mirror ground truth: classification confusion is not part of the
// noise model. Output in canonical order (bbox, then source id).
std::vector<DetectionBox> detect_widgets(const Observation& obs, const NoiseModel& noise, Rng rng);

// OCR. One text box per widget with a non-empty label, any category. A
// misread corrupts exactly one character (drop or substitute), deterministic
// in the stream. Same jitter/miss/false-positive treatment as the detector.
std::vector<TextBox> read_text(const Observation& obs, const NoiseModel& noise, Rng rng);

// Where the rendered label of a widget sits: static text fills its own box,
// other widgets render text inset from the border.
Rect label_rect(const ObservedItem& item);

// Appearance sampled from an observation region: the "crop the screenshot
// and look at it" port used by template matching. Picks the max-overlap item
// (ties to higher z), empty when the region shows bare background.
std::optional<StyleSignature> sample_style(const Observation& obs, const Rect& region);

}  // namespace guidrift
