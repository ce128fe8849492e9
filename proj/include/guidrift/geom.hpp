#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace guidrift {

struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct PointF {
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned rectangle in screen pixels. w/h must stay positive for any
// rect that describes a widget; helpers below do not enforce that themselves.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  long long area() const { return static_cast<long long>(w) * h; }
  PointF center() const { return {x + w / 2.0, y + h / 2.0}; }
  // Integer center: the canonical click point of a box.
  Point center_point() const { return {x + w / 2, y + h / 2}; }
  double diagonal() const { return std::sqrt(static_cast<double>(w) * w + static_cast<double>(h) * h); }

  bool contains(Point p) const {
    return p.x >= x && p.x < right() && p.y >= y && p.y < bottom();
  }

  // b lies inside this rect expanded by eps on every side.
  bool contains_rect(const Rect& b, int eps = 0) const {
    return b.x >= x - eps && b.y >= y - eps && b.right() <= right() + eps &&
           b.bottom() <= bottom() + eps;
  }

  Rect translated(int dx, int dy) const { return {x + dx, y + dy, w, h}; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline long long intersection_area(const Rect& a, const Rect& b) {
  const int ix = std::max(a.x, b.x);
  const int iy = std::max(a.y, b.y);
  const int ix2 = std::min(a.right(), b.right());
  const int iy2 = std::min(a.bottom(), b.bottom());
  if (ix2 <= ix || iy2 <= iy) return 0;
  return static_cast<long long>(ix2 - ix) * (iy2 - iy);
}

inline double iou(const Rect& a, const Rect& b) {
  const long long inter = intersection_area(a, b);
  if (inter == 0) return 0.0;
  const long long uni = a.area() + b.area() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

inline double center_distance(const Rect& a, const Rect& b) {
  const PointF ca = a.center();
  const PointF cb = b.center();
  return std::hypot(ca.x - cb.x, ca.y - cb.y);
}

// Overlap of [a1,a2) and [b1,b2) relative to the shorter interval.
// Used for row banding: 1.0 means the shorter interval is fully covered.
inline double interval_overlap_ratio(int a1, int a2, int b1, int b2) {
  const int lo = std::max(a1, b1);
  const int hi = std::min(a2, b2);
  if (hi <= lo) return 0.0;
  const int shorter = std::min(a2 - a1, b2 - b1);
  if (shorter <= 0) return 0.0;
  return static_cast<double>(hi - lo) / shorter;
}

inline double interval_iou(int a1, int a2, int b1, int b2) {
  const int lo = std::max(a1, b1);
  const int hi = std::min(a2, b2);
  if (hi <= lo) return 0.0;
  const int uni = std::max(a2, b2) - std::min(a1, b1);
  return static_cast<double>(hi - lo) / uni;
}

// Canonical ordering used everywhere output order must be reproducible:
// top-to-bottom, left-to-right, then size as tiebreak.
inline bool rect_less(const Rect& a, const Rect& b) {
  if (a.y != b.y) return a.y < b.y;
  if (a.x != b.x) return a.x < b.x;
  if (a.h != b.h) return a.h < b.h;
  return a.w < b.w;
}

inline Rect union_rect(const Rect& a, const Rect& b) {
  const int x1 = std::min(a.x, b.x);
  const int y1 = std::min(a.y, b.y);
  const int x2 = std::max(a.right(), b.right());
  const int y2 = std::max(a.bottom(), b.bottom());
  return {x1, y1, x2 - x1, y2 - y1};
}

}  // namespace guidrift
