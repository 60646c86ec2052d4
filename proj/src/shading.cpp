#include "helio/shading.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace helio {

std::array<Point2, 4> local_corners(double width, double height) {
  const double hx = width / 2, hy = height / 2;
  return {Point2{-hx, hy}, Point2{-hx, -hy}, Point2{hx, -hy}, Point2{hx, hy}};
}

OrientedHeliostat::OrientedHeliostat(Heliostat spec, const SunState& sun) : spec_(std::move(spec)) {
  if (!(spec_.width > 0) || !(spec_.height > 0)) throw std::invalid_argument("non-positive heliostat dimensions");
  const Vec3 to_target = spec_.aim - spec_.center;
  if (!(norm(to_target) > 0)) throw std::invalid_argument("heliostat at receiver");
  const Vec3 u_t = normalized(to_target);
  normal_ = normalized(u_t - sun.u_s);
  frame_ = frame_from_normal(normal_, spec_.spin, spec_.center);
  const auto local = local_corners(spec_.width, spec_.height);
  for (std::size_t a = 0; a < 4; ++a) corners_[a] = from_frame(frame_, Vec3{local[a].x, local[a].y, 0.0});
}

Polygon2 OrientedHeliostat::outline() const {
  const auto c = local_corners(spec_.width, spec_.height);
  return Polygon2(std::vector<Point2>(c.begin(), c.end()));
}

OrientedHeliostat orient(const Heliostat& h, const SunState& sun) { return OrientedHeliostat(h, sun); }

namespace {

constexpr int kMaxProjected = 6;

struct Projection {
  std::array<Point2, kMaxProjected> pts;
  int count = 0;

  std::span<const Point2> view() const { return {pts.data(), static_cast<std::size_t>(count)}; }
};

// Subject plane data reused for every neighbor.
struct SubjectPlane {
  Vec3 n;
  Vec3 c;
  Vec3 ex;
  Vec3 ey;
  double half_w;
  double half_h;

  explicit SubjectPlane(const OrientedHeliostat& s)
      : n(s.normal()),
        c(s.center()),
        ex(s.frame().rotation().row(0)),
        ey(s.frame().rotation().row(1)),
        half_w(s.width() / 2),
        half_h(s.height() / 2) {}

  double height_of(const Vec3& p) const { return dot(n, p - c); }
  Point2 local(const Vec3& p) const {
    const Vec3 d = p - c;
    return {dot(ex, d), dot(ey, d)};
  }
};

// Sutherland-Hodgman step against one plane: keeps vertices with level(p) >= 0.
template <class Level>
int clip_against(const Vec3* in, int n, Vec3* out, Level level) {
  int m = 0;
  for (int i = 0; i < n; ++i) {
    const Vec3& p = in[i];
    const Vec3& q = in[(i + 1) % n];
    const double lp = level(p), lq = level(q);
    if (lp >= 0) out[m++] = p;
    if ((lp >= 0) != (lq >= 0)) out[m++] = p + (q - p) * (lp / (lp - lq));
  }
  return m;
}

// Removes near-duplicate consecutive points; returns false if fewer than three remain.
bool tidy(Projection& pr) {
  int m = 0;
  for (int i = 0; i < pr.count; ++i) {
    const Point2& p = pr.pts[static_cast<std::size_t>(i)];
    if (m > 0 && std::hypot(p.x - pr.pts[static_cast<std::size_t>(m - 1)].x,
                            p.y - pr.pts[static_cast<std::size_t>(m - 1)].y) <= kCoincidenceTol) {
      continue;
    }
    pr.pts[static_cast<std::size_t>(m++)] = p;
  }
  while (m > 1 && std::hypot(pr.pts[0].x - pr.pts[static_cast<std::size_t>(m - 1)].x,
                             pr.pts[0].y - pr.pts[static_cast<std::size_t>(m - 1)].y) <= kCoincidenceTol) {
    --m;
  }
  pr.count = m;
  return m >= 3 && std::abs(signed_area(pr.view())) >= kSliverArea;
}

std::optional<Projection> shadow_points(const SubjectPlane& sp, const OrientedHeliostat& other, const Vec3& u_s) {
  const double nu = dot(sp.n, u_s);
  // Grazing (nu == 0) or back-lit subject: no shadow.
  if (!(nu < 0)) return std::nullopt;
  const auto& corners = other.corners();
  std::array<Vec3, kMaxProjected> buf;
  int n = 4;
  const bool all_front = std::all_of(corners.begin(), corners.end(), [&](const Vec3& p) { return sp.height_of(p) > 0; });
  if (all_front) {
    std::copy(corners.begin(), corners.end(), buf.begin());
  } else {
    n = clip_against(corners.data(), 4, buf.data(), [&](const Vec3& p) { return sp.height_of(p); });
    if (n < 3) return std::nullopt;
  }
  Projection pr;
  for (int a = 0; a < n; ++a) {
    const Vec3& p = buf[static_cast<std::size_t>(a)];
    const double lambda = -sp.height_of(p) / nu;
    pr.pts[static_cast<std::size_t>(a)] = sp.local(p + u_s * lambda);
  }
  pr.count = n;
  if (!tidy(pr)) return std::nullopt;
  return pr;
}

std::optional<Projection> block_points(const SubjectPlane& sp, const OrientedHeliostat& other, const Vec3& target) {
  const double target_h = sp.height_of(target);
  if (!(target_h > 0)) return std::nullopt;
  // Parts of the occluder at or above the aim point's level cannot block and
  // would project to infinity; keep the slab between the plane and 99.9% of it.
  const double ceiling = 0.999 * target_h;
  const auto& corners = other.corners();
  std::array<Vec3, kMaxProjected> buf;
  int n = 4;
  const bool inside = std::all_of(corners.begin(), corners.end(), [&](const Vec3& p) {
    const double h = sp.height_of(p);
    return h > 0 && h < ceiling;
  });
  if (inside) {
    std::copy(corners.begin(), corners.end(), buf.begin());
  } else {
    std::array<Vec3, kMaxProjected> tmp;
    const int m = clip_against(corners.data(), 4, tmp.data(), [&](const Vec3& p) { return sp.height_of(p); });
    if (m < 3) return std::nullopt;
    n = clip_against(tmp.data(), m, buf.data(), [&](const Vec3& p) { return ceiling - sp.height_of(p); });
    if (n < 3) return std::nullopt;
  }
  Projection pr;
  for (int a = 0; a < n; ++a) {
    const Vec3& p = buf[static_cast<std::size_t>(a)];
    const Vec3 ray = target - p;
    const double lambda = -sp.height_of(p) / dot(sp.n, ray);
    pr.pts[static_cast<std::size_t>(a)] = sp.local(p + ray * lambda);
  }
  pr.count = n;
  if (!tidy(pr)) return std::nullopt;
  return pr;
}

ProjectedQuad make_quad(const OrientedHeliostat& other, QuadKind kind, const Projection& pr) {
  auto v = pr.view();
  return ProjectedQuad{other.id(), kind, Polygon2(std::vector<Point2>(v.begin(), v.end()))};
}

}  // namespace

std::optional<ProjectedQuad> project_shadow(const OrientedHeliostat& subject, const OrientedHeliostat& other,
                                            const SunState& sun) {
  const auto pr = shadow_points(SubjectPlane(subject), other, sun.u_s);
  if (!pr) return std::nullopt;
  return make_quad(other, QuadKind::Shadow, *pr);
}

std::optional<ProjectedQuad> project_block(const OrientedHeliostat& subject, const OrientedHeliostat& other) {
  const auto pr = block_points(SubjectPlane(subject), other, subject.aim());
  if (!pr) return std::nullopt;
  return make_quad(other, QuadKind::Block, *pr);
}

bool cull(double width, double height, std::span<const Point2> pts) {
  const double hx = width / 2, hy = height / 2;
  const auto all = [&](auto pred) { return std::all_of(pts.begin(), pts.end(), pred); };
  if (all([&](const Point2& p) { return p.x > hx; })) return false;
  if (all([&](const Point2& p) { return p.x < -hx; })) return false;
  if (all([&](const Point2& p) { return p.y > hy; })) return false;
  if (all([&](const Point2& p) { return p.y < -hy; })) return false;
  return true;
}

bool cull(const OrientedHeliostat& subject, const ProjectedQuad& quad) {
  return cull(subject.width(), subject.height(), quad.ring.ring());
}

EfficiencyResult efficiency(const OrientedHeliostat& subject, std::span<const OrientedHeliostat> field,
                            const SunState& sun, const EfficiencyOptions& options) {
  const SubjectPlane sp(subject);
  const Polygon2 outline = subject.outline();

  EfficiencyResult result;
  result.subject_id = subject.id();
  result.total_area = subject.area();
  result.residual = Region(outline);

  double area_now = signed_area(outline);
  for (const OrientedHeliostat& other : field) {
    if (other.id() == subject.id()) continue;

    const auto block = block_points(sp, other, subject.aim());
    const auto shadow = shadow_points(sp, other, sun.u_s);
    const bool keep_block = block && (!options.cull || cull(subject.width(), subject.height(), block->view()));
    const bool keep_shadow = shadow && (!options.cull || cull(subject.width(), subject.height(), shadow->view()));
    if (!keep_block && !keep_shadow) continue;

    const double before = area_now;
    Region alone(outline);
    if (keep_block) {
      result.quads.push_back(make_quad(other, QuadKind::Block, *block));
      const Polygon2& q = result.quads.back().ring;
      if (!result.residual.empty()) result.residual = difference(result.residual, q);
      if (options.contributions) alone = difference(alone, q);
    }
    if (keep_shadow) {
      result.quads.push_back(make_quad(other, QuadKind::Shadow, *shadow));
      const Polygon2& q = result.quads.back().ring;
      if (!result.residual.empty()) result.residual = difference(result.residual, q);
      if (options.contributions) alone = difference(alone, q);
    }
    area_now = region_area(result.residual);
    if (options.contributions) {
      result.contributions.push_back(
          SourceLoss{other.id(), signed_area(outline) - region_area(alone), before - area_now});
    }
  }

  result.reflecting_area = region_area(result.residual);
  result.efficiency = result.reflecting_area / result.total_area;
  return result;
}

}  // namespace helio
