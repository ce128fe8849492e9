#include "guidrift/perception.hpp"

#include <algorithm>
#include <cmath>

namespace guidrift {

namespace {

// Jitter both corners, then clamp back into the frame with extent >= 1.
Rect jitter_rect(const Rect& r, double sigma, int width, int height, Rng& rng) {
  if (sigma <= 0.0) return r;
  const int dx1 = static_cast<int>(std::lround(rng.normal(sigma)));
  const int dy1 = static_cast<int>(std::lround(rng.normal(sigma)));
  const int dx2 = static_cast<int>(std::lround(rng.normal(sigma)));
  const int dy2 = static_cast<int>(std::lround(rng.normal(sigma)));
  int x1 = std::clamp(r.x + dx1, 0, width - 1);
  int y1 = std::clamp(r.y + dy1, 0, height - 1);
  int x2 = std::clamp(r.right() + dx2, x1 + 1, width);
  int y2 = std::clamp(r.bottom() + dy2, y1 + 1, height);
  return {x1, y1, x2 - x1, y2 - y1};
}

double draw_confidence(const NoiseModel& n, Rng& rng, bool spurious) {
  double ceiling = n.confidence_ceiling;
  if (spurious) ceiling = std::min(ceiling, kFalsePositiveConfidenceCap);
  const double floor = std::min(n.confidence_floor, ceiling);
  if (floor >= ceiling) return ceiling;
  return rng.uniform(floor, ceiling);
}

Rect random_rect(int width, int height, Rng& rng) {
  const int w = rng.uniform_range(8, std::min(120, width));
  const int h = rng.uniform_range(8, std::min(80, height));
  const int x = rng.uniform_range(0, width - w);
  const int y = rng.uniform_range(0, height - h);
  return {x, y, w, h};
}

template <typename Box>
void canonical_sort(std::vector<Box>& boxes) {
  std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) {
    if (!(a.bbox == b.bbox)) return rect_less(a.bbox, b.bbox);
    return a.source_widget.value_or("") < b.source_widget.value_or("");
  });
}

}  // namespace

Rect label_rect(const ObservedItem& item) {
  if (item.category == Category::StaticText) return item.bbox;
  // 20% inset per side, at least one pixel of text left.
  const Rect& r = item.bbox;
  const int ix = std::max(1, r.w / 5);
  const int iy = std::max(1, r.h / 5);
  const int w = std::max(1, r.w - 2 * ix);
  const int h = std::max(1, r.h - 2 * iy);
  return {r.x + ix, r.y + iy, w, h};
}

std::vector<DetectionBox> detect_widgets(const Observation& obs, const NoiseModel& noise, Rng rng) {
  std::vector<DetectionBox> out;
  for (const ObservedItem& it : obs.items) {
    if (it.category == Category::StaticText) continue;
    if (rng.bernoulli(noise.miss_prob)) continue;
    DetectionBox box;
    box.bbox = jitter_rect(it.bbox, noise.jitter_sigma, obs.width, obs.height, rng);
    box.category = it.category;
    box.confidence = draw_confidence(noise, rng, false);
    box.source_widget = it.id;
    out.push_back(std::move(box));
  }

  const int spurious = rng.poisson(noise.false_positive_rate);
  constexpr Category kGuesses[] = {Category::Button, Category::TextField, Category::Icon,
                                   Category::Modal};
  for (int i = 0; i < spurious; ++i) {
    DetectionBox box;
    box.bbox = random_rect(obs.width, obs.height, rng);
    box.category = kGuesses[rng.uniform_int(4)];
    box.confidence = draw_confidence(noise, rng, true);
    out.push_back(std::move(box));
  }

  canonical_sort(out);
  return out;
}

namespace {

std::string corrupt_text(const std::string& text, Rng& rng) {
  if (text.empty()) return text;
  const size_t idx = rng.uniform_int(text.size());
  std::string t = text;
  if (rng.bernoulli(0.5)) {
    t.erase(idx, 1);
  } else {
    // Substitute with the next ASCII printable; stays deterministic and
    // visibly wrong ("Submit" -> "Subnit" style).
    char c = t[idx];
    t[idx] = (c >= ' ' && c < '~') ? c + 1 : '#';
  }
  return t;
}

std::string random_text(Rng& rng) {
  const int len = rng.uniform_range(3, 8);
  std::string s;
  for (int i = 0; i < len; ++i) s.push_back('a' + static_cast<char>(rng.uniform_int(26)));
  return s;
}

}  // namespace

std::vector<TextBox> read_text(const Observation& obs, const NoiseModel& noise, Rng rng) {
  std::vector<TextBox> out;
  for (const ObservedItem& it : obs.items) {
    if (it.label.empty()) continue;
    if (rng.bernoulli(noise.miss_prob)) continue;
    TextBox box;
    box.bbox = jitter_rect(label_rect(it), noise.jitter_sigma, obs.width, obs.height, rng);
    box.text = rng.bernoulli(noise.misread_prob) ? corrupt_text(it.label, rng) : it.label;
    box.confidence = draw_confidence(noise, rng, false);
    box.source_widget = it.id;
    out.push_back(std::move(box));
  }

  const int spurious = rng.poisson(noise.false_positive_rate);
  for (int i = 0; i < spurious; ++i) {
    TextBox box;
    box.bbox = random_rect(obs.width, obs.height, rng);
    box.text = random_text(rng);
    box.confidence = draw_confidence(noise, rng, true);
    out.push_back(std::move(box));
  }

  canonical_sort(out);
  return out;
}

std::optional<StyleSignature> sample_style(const Observation& obs, const Rect& region) {
  const ObservedItem* best = nullptr;
  double best_overlap = 0.0;
  for (const ObservedItem& it : obs.items) {
    const double ov = iou(it.bbox, region);
    if (ov <= 0.0) continue;
    if (!best || ov > best_overlap ||
        (ov == best_overlap && it.z_order > best->z_order)) {
      best = &it;
      best_overlap = ov;
    }
  }
  if (!best) return std::nullopt;
  return best->style;
}

}  // namespace guidrift
