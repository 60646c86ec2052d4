#include "helio/clip.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace helio {

double region_area(const Region& r) {
  double total = 0.0;
  for (const Polygon2& p : r.components) total += signed_area(p);
  return total;
}

namespace {

std::atomic<long> g_fallbacks{0};

// Subject vertices carry rank 1, clip vertices rank 0: the subject is
// displaced by +(eps, eps^2) relative to the clip.
constexpr int kSubjectShift = +1;
constexpr int kClipShift = -1;

bool touches_line(const Point2& p, const Point2& q, const Point2& r) {
  const Point2 e = q - p;
  return std::abs(cross(e, r - p)) <= kCoincidenceTol * std::hypot(e.x, e.y);
}

double project_param(const Point2& p, const Point2& q, const Point2& r) {
  const Point2 e = q - p;
  return std::clamp(dot(r - p, e) / dot(e, e), 0.0, 1.0);
}

// Position of a crossing along an edge: numeric parameter plus the
// first- and second-order coefficients of its symbolic displacement.
struct EdgeKey {
  double t = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  bool operator<(const EdgeKey& o) const { return std::tie(t, c1, c2) < std::tie(o.t, o.c1, o.c2); }
};

struct Crossing {
  Point2 point;
  EdgeKey on_a;
  EdgeKey on_b;
  bool a_enters_b = false;  // valid when b is counterclockwise
  bool b_enters_a = false;  // valid when a is counterclockwise
};

std::optional<Crossing> cross_edges(const Point2& a1, const Point2& a2, const Point2& b1, const Point2& b2) {
  const int sb1 = orient_sos(a1, a2, b1, kClipShift);
  const int sb2 = orient_sos(a1, a2, b2, kClipShift);
  if (sb1 == sb2) return std::nullopt;
  const int sa1 = orient_sos(b1, b2, a1, kSubjectShift);
  const int sa2 = orient_sos(b1, b2, a2, kSubjectShift);
  if (sa1 == sa2) return std::nullopt;

  const Point2 ea = a2 - a1;
  const Point2 eb = b2 - b1;
  const bool za1 = touches_line(b1, b2, a1), za2 = touches_line(b1, b2, a2);
  const bool zb1 = touches_line(a1, a2, b1), zb2 = touches_line(a1, a2, b2);

  Crossing c;
  if ((za1 || za2) && (zb1 || zb2)) {
    c.point = za1 ? a1 : a2;
    c.on_a.t = za1 ? 0.0 : 1.0;
    c.on_b.t = zb1 ? 0.0 : 1.0;
  } else if (za1 || za2) {
    c.point = za1 ? a1 : a2;
    c.on_a.t = za1 ? 0.0 : 1.0;
    c.on_b.t = project_param(b1, b2, c.point);
  } else if (zb1 || zb2) {
    c.point = zb1 ? b1 : b2;
    c.on_b.t = zb1 ? 0.0 : 1.0;
    c.on_a.t = project_param(a1, a2, c.point);
  } else {
    const double d = cross(ea, eb);
    const Point2 w = b1 - a1;
    c.on_a.t = std::clamp(cross(w, eb) / d, 0.0, 1.0);
    c.on_b.t = std::clamp(cross(w, ea) / d, 0.0, 1.0);
    c.point = a1 + ea * c.on_a.t;
  }

  // The clip line moves by -(eps, eps^2) against a; a moves by +(eps, eps^2)
  // against b. A crossing slides along an edge e by cross(shift, d) / cross(e, d).
  const double d_ab = cross(ea, eb);
  c.on_a.c1 = -eb.y / d_ab;
  c.on_a.c2 = eb.x / d_ab;
  c.on_b.c1 = ea.y / -d_ab;
  c.on_b.c2 = -ea.x / -d_ab;

  c.a_enters_b = sa2 > 0;
  c.b_enters_a = sb2 > 0;
  return c;
}

struct Node {
  Point2 pt;
  int next = -1;
  int prev = -1;
  int twin = -1;
  EdgeKey key;
  bool intersection = false;
  bool entry = false;
  bool visited = false;
};

// Circular doubly linked ring in a contiguous buffer. Original vertices
// occupy the first `vertex_count` slots; crossings are appended and spliced in.
class VertexRing {
 public:
  explicit VertexRing(const Polygon2& p) {
    const int n = static_cast<int>(p.size());
    nodes_.reserve(static_cast<std::size_t>(n) * 2);
    for (int i = 0; i < n; ++i) {
      Node node;
      node.pt = p[static_cast<std::size_t>(i)];
      node.next = (i + 1) % n;
      node.prev = (i + n - 1) % n;
      nodes_.push_back(node);
    }
    vertex_count_ = n;
  }

  int vertex_count() const { return vertex_count_; }
  Node& operator[](int i) { return nodes_[static_cast<std::size_t>(i)]; }
  const Node& operator[](int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(nodes_.size()); }

  // Inserts a crossing on the edge that starts at vertex `edge`, ordered by key.
  int insert(int edge, const Point2& pt, const EdgeKey& key, bool entry) {
    int before = edge;
    while (true) {
      const int nx = nodes_[static_cast<std::size_t>(before)].next;
      const Node& cand = nodes_[static_cast<std::size_t>(nx)];
      if (!cand.intersection || key < cand.key) break;
      before = nx;
    }
    Node node;
    node.pt = pt;
    node.key = key;
    node.intersection = true;
    node.entry = entry;
    node.prev = before;
    node.next = nodes_[static_cast<std::size_t>(before)].next;
    const int id = size();
    nodes_.push_back(node);
    nodes_[static_cast<std::size_t>(node.next)].prev = id;
    nodes_[static_cast<std::size_t>(before)].next = id;
    return id;
  }

  // Entry and exit flags must alternate along the ring.
  bool alternates() const {
    int first = -1;
    bool last = false;
    int count = 0;
    int i = 0;
    do {
      const Node& n = (*this)[i];
      if (n.intersection) {
        if (count > 0 && n.entry == last) return false;
        if (count == 0) first = i;
        last = n.entry;
        ++count;
      }
      i = n.next;
    } while (i != 0);
    if (count % 2 != 0) return false;
    return count == 0 || (*this)[first].entry != last;
  }

 private:
  std::vector<Node> nodes_;
  int vertex_count_ = 0;
};

enum class Op { Difference, Intersection, Union };

// Direction rule: walk forward from a crossing iff the ring part that
// follows belongs to the result boundary.
bool forward_in_subject(Op op, bool entry) { return op == Op::Intersection ? entry : !entry; }
bool forward_in_clip(Op op, bool entry) { return op == Op::Union ? !entry : entry; }

std::vector<Point2> clean_ring(std::vector<Point2> pts) {
  bool changed = true;
  while (changed && pts.size() >= 3) {
    changed = false;
    std::vector<Point2> out;
    out.reserve(pts.size());
    for (const Point2& p : pts) {
      if (!out.empty() && std::hypot(p.x - out.back().x, p.y - out.back().y) <= kCoincidenceTol) {
        changed = true;
        continue;
      }
      out.push_back(p);
    }
    while (out.size() > 1 &&
           std::hypot(out.front().x - out.back().x, out.front().y - out.back().y) <= kCoincidenceTol) {
      out.pop_back();
      changed = true;
    }
    const std::size_t n = out.size();
    if (n < 3) return {};
    std::vector<Point2> kept;
    kept.reserve(n);
    std::vector<bool> drop(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& prev = out[(i + n - 1) % n];
      const Point2& cur = out[i];
      const Point2& next = out[(i + 1) % n];
      if (drop[(i + n - 1) % n] || (i == n - 1 && drop[0])) continue;
      const Point2 e = next - prev;
      const double len = std::hypot(e.x, e.y);
      const bool spike = len <= kCoincidenceTol;
      if (spike || std::abs(cross(e, cur - prev)) <= kCoincidenceTol * len) {
        drop[i] = true;
        changed = true;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!drop[i]) kept.push_back(out[i]);
    }
    pts = std::move(kept);
  }
  if (pts.size() < 3) return {};
  return pts;
}

void emit(std::vector<Polygon2>& out, std::vector<Point2> ring) {
  ring = clean_ring(std::move(ring));
  if (ring.size() < 3) return;
  if (std::abs(signed_area(ring)) < kSliverArea) return;
  out.emplace_back(std::move(ring));
}

struct ClipFailure {};

// Greiner-Hormann on counterclockwise simple polygons.
std::vector<Polygon2> clip_ccw(const Polygon2& a, const Polygon2& b, Op op) {
  VertexRing ra(a);
  VertexRing rb(b);

  const int na = ra.vertex_count();
  const int nb = rb.vertex_count();
  bool any = false;
  for (int i = 0; i < na; ++i) {
    const Point2 a1 = ra[i].pt;
    const Point2 a2 = ra[(i + 1) % na].pt;
    for (int j = 0; j < nb; ++j) {
      const Point2 b1 = rb[j].pt;
      const Point2 b2 = rb[(j + 1) % nb].pt;
      const auto hit = cross_edges(a1, a2, b1, b2);
      if (!hit) continue;
      any = true;
      const int ia = ra.insert(i, hit->point, hit->on_a, hit->a_enters_b);
      const int ib = rb.insert(j, hit->point, hit->on_b, hit->b_enters_a);
      ra[ia].twin = ib;
      rb[ib].twin = ia;
    }
  }

  std::vector<Polygon2> out;
  if (!any) {
    const bool a_in_b = contains_sos(b, a[0], kSubjectShift);
    const bool b_in_a = !a_in_b && contains_sos(a, b[0], kClipShift);
    switch (op) {
      case Op::Difference:
        if (a_in_b) break;
        out.push_back(a);
        if (b_in_a) out.push_back(reversed(b));
        break;
      case Op::Intersection:
        if (a_in_b) out.push_back(a);
        else if (b_in_a) out.push_back(b);
        break;
      case Op::Union:
        if (a_in_b) out.push_back(b);
        else if (b_in_a) out.push_back(a);
        else {
          out.push_back(a);
          out.push_back(b);
        }
        break;
    }
    return out;
  }

  if (!ra.alternates() || !rb.alternates()) throw ClipFailure{};

  const int budget = 4 * (ra.size() + rb.size()) + 8;
  for (int start = 0; start < ra.size(); ++start) {
    if (!ra[start].intersection || ra[start].visited) continue;
    if (!forward_in_subject(op, ra[start].entry)) continue;

    std::vector<Point2> ring;
    bool on_subject = true;
    int cur = start;
    int steps = 0;
    while (true) {
      VertexRing& here = on_subject ? ra : rb;
      VertexRing& there = on_subject ? rb : ra;
      here[cur].visited = true;
      there[here[cur].twin].visited = true;
      const bool fwd = on_subject ? forward_in_subject(op, here[cur].entry) : forward_in_clip(op, here[cur].entry);
      ring.push_back(here[cur].pt);
      do {
        cur = fwd ? here[cur].next : here[cur].prev;
        if (++steps > budget) throw ClipFailure{};
        if (!here[cur].intersection) ring.push_back(here[cur].pt);
      } while (!here[cur].intersection);
      const bool closed = on_subject ? cur == start : here[cur].twin == start;
      if (closed) break;
      if (here[cur].visited) throw ClipFailure{};
      cur = here[cur].twin;
      on_subject = !on_subject;
    }
    emit(out, std::move(ring));
  }

  for (int i = 0; i < ra.size(); ++i) {
    if (ra[i].intersection && !ra[i].visited) throw ClipFailure{};
  }
  return out;
}

Polygon2 translated(const Polygon2& p, const Point2& d) {
  std::vector<Point2> ring(p.begin(), p.end());
  for (Point2& q : ring) q = q + d;
  return Polygon2(std::move(ring));
}

std::vector<Polygon2> clip_robust(const Polygon2& a, const Polygon2& b, Op op) {
  try {
    return clip_ccw(a, b, op);
  } catch (const ClipFailure&) {
  }
  // Tolerance-based contact decisions are not transitive; when they
  // disagree, retry with the clip moved off the contact by an explicit shift.
  static constexpr std::array<Point2, 3> kShifts = {Point2{2.3e-8, 3.1e-8}, Point2{-3.7e-8, 1.3e-8},
                                                    Point2{1.1e-7, -0.7e-7}};
  for (const Point2& d : kShifts) {
    g_fallbacks.fetch_add(1, std::memory_order_relaxed);
    try {
      return clip_ccw(a, translated(b, d), op);
    } catch (const ClipFailure&) {
    }
  }
  throw std::runtime_error("polygon clipping failed to resolve a degenerate configuration");
}

struct Box {
  double x0, y0, x1, y1;
};

Box bounds(const Polygon2& p) {
  Box b{p[0].x, p[0].y, p[0].x, p[0].y};
  for (const Point2& q : p) {
    b.x0 = std::min(b.x0, q.x);
    b.y0 = std::min(b.y0, q.y);
    b.x1 = std::max(b.x1, q.x);
    b.y1 = std::max(b.y1, q.y);
  }
  return b;
}

bool boxes_apart(const Box& a, const Box& b) {
  return a.x1 < b.x0 - kCoincidenceTol || b.x1 < a.x0 - kCoincidenceTol || a.y1 < b.y0 - kCoincidenceTol ||
         b.y1 < a.y0 - kCoincidenceTol;
}

}  // namespace

std::optional<SegmentHit> segment_intersection(const Point2& a1, const Point2& a2, const Point2& b1,
                                               const Point2& b2) {
  const auto c = cross_edges(a1, a2, b1, b2);
  if (!c) return std::nullopt;
  return SegmentHit{c->point, c->on_a.t, c->on_b.t};
}

Region difference(const Region& subject, const Polygon2& clip) {
  const Polygon2 b = counterclockwise(clip);
  const Box bb = bounds(b);
  Region out;
  for (const Polygon2& comp : subject.components) {
    if (boxes_apart(bounds(comp), bb)) {
      out.components.push_back(comp);
      continue;
    }
    const bool hole = signed_area(comp) < 0.0;
    const Polygon2 a = hole ? reversed(comp) : comp;
    for (Polygon2& piece : clip_robust(a, b, Op::Difference)) {
      out.components.push_back(hole ? reversed(piece) : std::move(piece));
    }
  }
  return out;
}

Region difference(const Polygon2& a, const Polygon2& b) { return difference(Region(a), b); }

Region intersection(const Polygon2& a, const Polygon2& b) {
  const Polygon2 ca = counterclockwise(a);
  const Polygon2 cb = counterclockwise(b);
  if (boxes_apart(bounds(ca), bounds(cb))) return {};
  return Region(clip_robust(ca, cb, Op::Intersection));
}

Region union_of(const Polygon2& a, const Polygon2& b) {
  const Polygon2 ca = counterclockwise(a);
  const Polygon2 cb = counterclockwise(b);
  if (boxes_apart(bounds(ca), bounds(cb))) return Region(std::vector<Polygon2>{ca, cb});
  return Region(clip_robust(ca, cb, Op::Union));
}

namespace detail {

long fallback_count() { return g_fallbacks.load(std::memory_order_relaxed); }

}  // namespace detail

}  // namespace helio
