#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace helio {

/// Point in a heliostat's local plane, meters.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
  constexpr Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
  constexpr Point2 operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Point2&) const = default;
};

constexpr double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
constexpr double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }

/// Absolute distance below which two points, or a point and a line, are
/// considered coincident. Coincidences are then resolved symbolically.
inline constexpr double kCoincidenceTol = 1e-9;

/// Open ring of at least three finite vertices with no two consecutive
/// vertices closer than kCoincidenceTol (wraparound included).
class Polygon2 {
 public:
  /// Throws std::invalid_argument on fewer than three vertices, non-finite
  /// coordinates, or coincident consecutive vertices.
  explicit Polygon2(std::vector<Point2> ring);

  std::span<const Point2> ring() const { return ring_; }
  std::size_t size() const { return ring_.size(); }
  const Point2& operator[](std::size_t i) const { return ring_[i]; }
  const Point2& vertex(std::size_t i) const { return ring_[i % ring_.size()]; }

  auto begin() const { return ring_.begin(); }
  auto end() const { return ring_.end(); }

 private:
  std::vector<Point2> ring_;
};

/// Shoelace formula; positive for counterclockwise rings.
/// Throws std::invalid_argument("degenerate polygon") for fewer than three points.
double signed_area(std::span<const Point2> ring);
inline double signed_area(const Polygon2& p) { return signed_area(p.ring()); }

Polygon2 reversed(const Polygon2& p);

/// Returns p if counterclockwise, otherwise its reverse.
Polygon2 counterclockwise(const Polygon2& p);

/// True when no two non-adjacent edges touch and no adjacent edges overlap.
bool is_simple(const Polygon2& p);

/// Symbolic-perturbation rank. A point of rank k is treated as displaced by
/// k * (eps, eps^2) for an infinitesimal eps > 0, so ranks order the perturbed
/// points lexicographically: x first, then rank, then y.
struct SosRank {
  double x = 0.0;
  std::size_t index = 0;
  double y = 0.0;

  auto operator<=>(const SosRank&) const = default;
};

SosRank perturb_key(const Point2& pt, std::size_t index);

/// Sign (-1, 0, +1) of orient(p, q, r) when r is displaced by
/// shift * (eps, eps^2) relative to the segment p-q. Distances within
/// kCoincidenceTol count as exact contact and are resolved by the
/// perturbation; the result is 0 only for shift == 0 or p == q.
int orient_sos(const Point2& p, const Point2& q, const Point2& r, int shift);

/// Even-odd membership of pt, displaced by shift * (eps, eps^2), using a
/// ray toward +x. Points on the boundary get the answer of the displaced point.
bool contains_sos(const Polygon2& p, const Point2& pt, int shift);

/// Even-odd rule with the query point ranked above the polygon.
inline bool contains(const Polygon2& p, const Point2& pt) { return contains_sos(p, pt, +1); }

}  // namespace helio
