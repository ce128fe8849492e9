#include "guidrift/fusion.hpp"

#include <algorithm>
#include <tuple>

namespace guidrift {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::VisionOnly: return "vision_only";
    case Provenance::TextOnly: return "text_only";
    case Provenance::Fused: return "fused";
  }
  return "?";
}

namespace {

bool is_actionable(Category c) { return c == Category::Button || c == Category::Icon; }

struct Candidate {
  double overlap;
  int det;
  int text;
};

// Content-based tiebreak so the greedy pass is stable under input shuffles.
bool candidate_before(const Candidate& a, const Candidate& b, const std::vector<DetectionBox>& ds,
                      const std::vector<TextBox>& ts) {
  if (a.overlap != b.overlap) return a.overlap > b.overlap;
  const Rect& da = ds[a.det].bbox;
  const Rect& db = ds[b.det].bbox;
  if (!(da == db)) return rect_less(da, db);
  const Rect& ta = ts[a.text].bbox;
  const Rect& tb = ts[b.text].bbox;
  if (!(ta == tb)) return rect_less(ta, tb);
  return ts[a.text].text < ts[b.text].text;
}

}  // namespace

Alignment align(const std::vector<DetectionBox>& detections, const std::vector<TextBox>& texts,
                const FusionConfig& config) {
  std::vector<Candidate> candidates;
  for (int d = 0; d < static_cast<int>(detections.size()); ++d) {
    for (int t = 0; t < static_cast<int>(texts.size()); ++t) {
      const Rect& db = detections[d].bbox;
      const Rect& tb = texts[t].bbox;
      const double ov = iou(db, tb);
      bool ok = ov >= config.iou_threshold;
      if (!ok && db.contains_rect(tb)) {
        const double ratio = static_cast<double>(tb.area()) / static_cast<double>(db.area());
        ok = ratio >= config.containment_min_area_ratio;
      }
      if (ok) candidates.push_back({ov, d, t});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    return candidate_before(a, b, detections, texts);
  });

  Alignment out;
  std::vector<bool> det_used(detections.size(), false);
  std::vector<bool> text_used(texts.size(), false);
  for (const Candidate& c : candidates) {
    if (det_used[c.det] || text_used[c.text]) continue;
    det_used[c.det] = true;
    text_used[c.text] = true;
    out.pairs.push_back({c.det, c.text});
  }
  for (int d = 0; d < static_cast<int>(detections.size()); ++d)
    if (!det_used[d]) out.lone_detections.push_back(d);
  for (int t = 0; t < static_cast<int>(texts.size()); ++t)
    if (!text_used[t]) out.lone_texts.push_back(t);
  return out;
}

Affordance arbitrate(const std::vector<DetectionBox>& detections, const std::vector<TextBox>& texts,
                     const AlignedPair& pair, const FusionConfig& config) {
  Affordance a;

  if (pair.detection >= 0 && pair.text >= 0) {
    const DetectionBox& d = detections[pair.detection];
    const TextBox& t = texts[pair.text];
    a.provenance = Provenance::Fused;
    a.bbox = d.bbox;
    a.category = d.category;
    a.text = t.text;
    a.confidence = std::min(d.confidence, t.confidence);
    a.source_widget = d.source_widget ? d.source_widget : t.source_widget;
    if (is_actionable(d.category) && !config.actionable_lexicon.count(t.text)) {
      // Vision says "clickable", text says otherwise ("Version 2.0" on a
      // button-shaped box). Keep the entity, flag it, halve the trust.
      a.pre_downgrade_confidence = a.confidence;
      a.confidence *= config.conflict_downgrade;
      a.uncertain = true;
    }
  } else if (pair.detection >= 0) {
    const DetectionBox& d = detections[pair.detection];
    a.provenance = Provenance::VisionOnly;
    a.bbox = d.bbox;
    a.category = d.category;
    a.confidence = d.confidence;
    a.source_widget = d.source_widget;
    if (d.category == Category::Button) {
      // Buttons carry labels; a detector-only button is missing its text.
      a.pre_downgrade_confidence = a.confidence;
      a.confidence *= config.conflict_downgrade;
      a.uncertain = true;
    }
  } else {
    const TextBox& t = texts[pair.text];
    a.provenance = Provenance::TextOnly;
    a.bbox = t.bbox;
    a.category = Category::StaticText;
    a.text = t.text;
    a.confidence = t.confidence;
    a.source_widget = t.source_widget;
    if (config.actionable_lexicon.count(t.text)) {
      // An actionable word with no widget under it is a dangling affordance.
      a.pre_downgrade_confidence = a.confidence;
      a.confidence *= config.conflict_downgrade;
      a.uncertain = true;
    }
  }

  if (!a.uncertain) a.pre_downgrade_confidence = a.confidence;
  return a;
}

std::vector<Affordance> fuse_frame(const std::vector<DetectionBox>& detections,
                                   const std::vector<TextBox>& texts, const FusionConfig& config) {
  const Alignment al = align(detections, texts, config);

  std::vector<Affordance> out;
  out.reserve(al.pairs.size() + al.lone_detections.size() + al.lone_texts.size());
  for (const AlignedPair& p : al.pairs) out.push_back(arbitrate(detections, texts, p, config));
  for (const int d : al.lone_detections) out.push_back(arbitrate(detections, texts, {d, -1}, config));
  for (const int t : al.lone_texts) out.push_back(arbitrate(detections, texts, {-1, t}, config));

  std::sort(out.begin(), out.end(), [](const Affordance& a, const Affordance& b) {
    if (!(a.bbox == b.bbox)) return rect_less(a.bbox, b.bbox);
    if (a.provenance != b.provenance) return static_cast<int>(a.provenance) < static_cast<int>(b.provenance);
    return a.text.value_or("") < b.text.value_or("");
  });
  for (size_t i = 0; i < out.size(); ++i) out[i].id = "a" + std::to_string(i);
  return out;
}

}  // namespace guidrift
