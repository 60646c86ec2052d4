#pragma once

#include <optional>
#include <vector>

#include "helio/polygon2d.hpp"

namespace helio {

/// Set of oriented simple polygons: counterclockwise components are solid,
/// clockwise components are holes. The point set is the signed sum of the
/// component indicators, so the area is the sum of signed areas.
struct Region {
  std::vector<Polygon2> components;

  Region() = default;
  explicit Region(Polygon2 p) { components.push_back(std::move(p)); }
  explicit Region(std::vector<Polygon2> parts) : components(std::move(parts)) {}

  bool empty() const { return components.empty(); }
};

/// Components whose absolute area falls below this are dropped, in m^2.
inline constexpr double kSliverArea = 1e-12;

double region_area(const Region& r);

struct SegmentHit {
  Point2 point;
  double t_a = 0.0;  ///< parameter along a1 -> a2
  double t_b = 0.0;  ///< parameter along b1 -> b2
};

/// Crossing of segment a with segment b, with a symbolically displaced above
/// b (see perturb_key). Touching and collinear contacts are resolved by the
/// displacement, so the answer is always a proper crossing or nothing.
/// Parameters are clamped to [0, 1]; a value of exactly 0 or 1 marks a
/// crossing infinitesimally inside the segment next to that endpoint.
std::optional<SegmentHit> segment_intersection(const Point2& a1, const Point2& a2, const Point2& b1,
                                               const Point2& b2);

/// Points of `subject` not in `clip`. Each component is clipped on its own;
/// hole components keep their orientation role in the output.
Region difference(const Region& subject, const Polygon2& clip);
Region difference(const Polygon2& a, const Polygon2& b);

Region intersection(const Polygon2& a, const Polygon2& b);

Region union_of(const Polygon2& a, const Polygon2& b);

namespace detail {

/// Number of clip retries with an explicit shift since process start.
/// Nonzero only after a symbolic resolution failed; exposed for tests.
long fallback_count();

}  // namespace detail

}  // namespace helio
