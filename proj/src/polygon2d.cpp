#include "helio/polygon2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace helio {

Polygon2::Polygon2(std::vector<Point2> ring) : ring_(std::move(ring)) {
  if (ring_.size() < 3) throw std::invalid_argument("degenerate polygon");
  for (std::size_t i = 0; i < ring_.size(); ++i) {
    const Point2& a = ring_[i];
    if (!std::isfinite(a.x) || !std::isfinite(a.y)) {
      throw std::invalid_argument("non-finite polygon vertex");
    }
    const Point2& b = ring_[(i + 1) % ring_.size()];
    if (std::hypot(b.x - a.x, b.y - a.y) <= kCoincidenceTol) {
      throw std::invalid_argument("coincident consecutive polygon vertices");
    }
  }
}

double signed_area(std::span<const Point2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) throw std::invalid_argument("degenerate polygon");
  // Canonical traversal: start at the lowest vertex (x, then y) and walk
  // toward its lower neighbor. A reversed ring then yields the same sum with
  // the opposite sign, exactly.
  auto less = [](const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); };
  std::size_t m = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (less(ring[i], ring[m])) m = i;
  }
  const bool forward = !less(ring[(m + n - 1) % n], ring[(m + 1) % n]);
  const Point2 o = ring[m];
  double twice = 0.0;
  std::size_t a = m;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t b = forward ? (a + 1) % n : (a + n - 1) % n;
    twice += cross(ring[a] - o, ring[b] - o);
    a = b;
  }
  return forward ? 0.5 * twice : -0.5 * twice;
}

Polygon2 reversed(const Polygon2& p) {
  std::vector<Point2> ring(p.begin(), p.end());
  std::reverse(ring.begin(), ring.end());
  return Polygon2(std::move(ring));
}

Polygon2 counterclockwise(const Polygon2& p) { return signed_area(p) < 0.0 ? reversed(p) : p; }

namespace {

bool segments_touch(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  auto orient = [](const Point2& p, const Point2& q, const Point2& r) {
    const double v = cross(q - p, r - p);
    const double len = std::hypot(q.x - p.x, q.y - p.y);
    if (std::abs(v) <= kCoincidenceTol * len) return 0;
    return v > 0 ? 1 : -1;
  };
  auto on_segment = [](const Point2& p, const Point2& q, const Point2& r) {
    return std::min(p.x, q.x) - kCoincidenceTol <= r.x && r.x <= std::max(p.x, q.x) + kCoincidenceTol &&
           std::min(p.y, q.y) - kCoincidenceTol <= r.y && r.y <= std::max(p.y, q.y) + kCoincidenceTol;
  };
  const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
  return (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
         (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b));
}

}  // namespace

bool is_simple(const Polygon2& p) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = p.vertex(i);
    const Point2& b = p.vertex(i + 1);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point2& c = p.vertex(j);
      const Point2& d = p.vertex(j + 1);
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        // Adjacent edges share one vertex; they may only overlap by folding back.
        const Point2& shared = j == i + 1 ? b : a;
        const Point2& u = j == i + 1 ? a : b;
        const Point2& w = j == i + 1 ? d : c;
        const Point2 e1 = u - shared, e2 = w - shared;
        const double len = std::hypot(e1.x, e1.y) * std::hypot(e2.x, e2.y);
        if (std::abs(cross(e1, e2)) <= kCoincidenceTol * len && dot(e1, e2) > 0.0) return false;
        continue;
      }
      if (segments_touch(a, b, c, d)) return false;
    }
  }
  return true;
}

SosRank perturb_key(const Point2& pt, std::size_t index) { return SosRank{pt.x, index, pt.y}; }

int orient_sos(const Point2& p, const Point2& q, const Point2& r, int shift) {
  const Point2 e = q - p;
  const double v = cross(e, r - p);
  const double len = std::hypot(e.x, e.y);
  if (std::abs(v) > kCoincidenceTol * len) return v > 0 ? 1 : -1;
  // orient(p, q, r + s*(eps, eps^2)) = s * (-e.y * eps + e.x * eps^2) at contact.
  if (shift == 0) return 0;
  const double lead = e.y != 0.0 ? -e.y : e.x;
  if (lead == 0.0) return 0;
  return (lead > 0) == (shift > 0) ? 1 : -1;
}

bool contains_sos(const Polygon2& p, const Point2& pt, int shift) {
  // A vertex level with the displaced point is above it iff the displacement is downward.
  auto above = [&](const Point2& v) {
    if (std::abs(v.y - pt.y) <= kCoincidenceTol) return shift < 0;
    return v.y > pt.y;
  };
  bool inside = false;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& u = p[i];
    const Point2& v = p[i + 1 == n ? 0 : i + 1];
    const bool ua = above(u);
    const bool va = above(v);
    if (ua == va) continue;
    const int side = orient_sos(u, v, pt, shift);
    // Upward edge: crossing lies to the right of the point iff the point is left of the edge.
    if (va ? side > 0 : side < 0) inside = !inside;
  }
  return inside;
}

}  // namespace helio
