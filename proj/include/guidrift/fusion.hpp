#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "guidrift/perception.hpp"

namespace guidrift {

enum class Provenance { VisionOnly, TextOnly, Fused };
const char* to_string(Provenance p);

// One fused interactable (or readable) entity. `uncertain` marks cross-modal
// disagreement; the runtime must clarify such entities (hover) before aiming
// any effectful action at them.
struct Affordance {
  std::string id;  // canonical, assigned after sorting ("a0", "a1", ...)
  Rect bbox;
  Category category = Category::Button;
  std::optional<std::string> text;
  double confidence = 1.0;
  bool uncertain = false;
  Provenance provenance = Provenance::Fused;

  // Confidence before any conflict downgrade; hover certification restores it.
  double pre_downgrade_confidence = 1.0;
  // Oracle-only ground-truth link (from whichever modality had one).
  std::optional<std::string> source_widget;
};

struct FusionConfig {
  double iou_threshold = 0.5;
  double conflict_downgrade = 0.5;
  // Containment pairing guard: a text box inside a detection counts as
  // aligned only when it fills at least this fraction of the detection.
  // Keeps page-sized container detections from swallowing headings.
  double containment_min_area_ratio = 0.05;
  // Words that legitimately appear on actionable widgets.
  std::set<std::string> actionable_lexicon = {"Submit", "Save", "OK", "Cancel", "Delete"};
};

struct AlignedPair {
  int detection = -1;  // index into the detections argument
  int text = -1;       // index into the texts argument
};

struct Alignment {
  std::vector<AlignedPair> pairs;
  std::vector<int> lone_detections;
  std::vector<int> lone_texts;
};

// Greedy one-to-one matching in descending IoU order. Pairs qualify by
// IoU >= threshold, or by the text box lying fully inside the detection
// (subject to the area-ratio guard). Deterministic under input permutation.
Alignment align(const std::vector<DetectionBox>& detections, const std::vector<TextBox>& texts,
                const FusionConfig& config);

// Resolves one aligned pair (or singleton, index -1) into an Affordance.
// Geometry and category come from vision, text from OCR; confidence is the
// min of agreeing sources. Conflicts (actionable category with non-lexicon
// text, or a missing expected modality) downgrade confidence and mark the
// affordance uncertain.
Affordance arbitrate(const std::vector<DetectionBox>& detections, const std::vector<TextBox>& texts,
                     const AlignedPair& pair, const FusionConfig& config);

// align + arbitrate over a whole frame; canonically sorted, permutation
// invariant, every input contributes to exactly one affordance.
std::vector<Affordance> fuse_frame(const std::vector<DetectionBox>& detections,
                                   const std::vector<TextBox>& texts, const FusionConfig& config);

}  // namespace guidrift
