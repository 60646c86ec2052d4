#include "helio/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace helio {

std::vector<ProjectedQuad> projected_quads(const OrientedHeliostat& subject, std::span<const OrientedHeliostat> field,
                                           const SunState& sun) {
  std::vector<ProjectedQuad> out;
  for (const OrientedHeliostat& other : field) {
    if (other.id() == subject.id()) continue;
    if (auto b = project_block(subject, other)) out.push_back(std::move(*b));
    if (auto s = project_shadow(subject, other, sun)) out.push_back(std::move(*s));
  }
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

// Counts unobstructed samples; `occluded(x, y)` takes local subject coordinates.
template <class Occluded>
OracleEstimate run_sampling(const OrientedHeliostat& subject, const OracleConfig& cfg, Occluded occluded) {
  if (cfg.samples() < kMinOracleSamples) throw std::invalid_argument("oracle needs at least 10^4 samples");
  const std::size_t n = cfg.samples_per_axis;
  const double w = subject.width(), h = subject.height();

  auto count_rows = [&](std::size_t row_begin, std::size_t row_end) {
    std::size_t free = 0;
    for (std::size_t j = row_begin; j < row_end; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        double du = 0.5, dv = 0.5;
        if (cfg.mode == SamplingMode::Stratified) {
          // Per-stratum stream: the draw for a cell never depends on the worker split.
          const std::uint64_t s = splitmix64(cfg.seed ^ splitmix64(j * n + i));
          du = unit(s);
          dv = unit(splitmix64(s));
        }
        const double x = -w / 2 + (static_cast<double>(i) + du) / static_cast<double>(n) * w;
        const double y = -h / 2 + (static_cast<double>(j) + dv) / static_cast<double>(n) * h;
        if (!occluded(x, y)) ++free;
      }
    }
    return free;
  };

  std::size_t free = 0;
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    free = count_rows(0, n);
  } else {
    std::vector<std::size_t> partial(workers, 0);
    {
      std::vector<std::jthread> pool;
      for (unsigned k = 0; k < workers; ++k) {
        pool.emplace_back([&, k] { partial[k] = count_rows(n * k / workers, n * (k + 1) / workers); });
      }
    }
    for (std::size_t c : partial) free += c;
  }

  OracleEstimate est;
  est.samples = cfg.samples();
  est.estimate = static_cast<double>(free) / static_cast<double>(est.samples);
  if (cfg.mode == SamplingMode::Stratified) {
    est.standard_error = std::sqrt(est.estimate * (1 - est.estimate) / static_cast<double>(est.samples));
  }
  return est;
}

struct QuadBox {
  const Polygon2* ring;
  double x0, y0, x1, y1;
};

OracleEstimate sample_quads(const OrientedHeliostat& subject, std::span<const ProjectedQuad> quads,
                            const OracleConfig& cfg) {
  std::vector<QuadBox> boxes;
  for (const ProjectedQuad& q : quads) {
    QuadBox b{&q.ring, q.ring[0].x, q.ring[0].y, q.ring[0].x, q.ring[0].y};
    for (const Point2& p : q.ring) {
      b.x0 = std::min(b.x0, p.x);
      b.y0 = std::min(b.y0, p.y);
      b.x1 = std::max(b.x1, p.x);
      b.y1 = std::max(b.y1, p.y);
    }
    boxes.push_back(b);
  }
  return run_sampling(subject, cfg, [&](double x, double y) {
    for (const QuadBox& b : boxes) {
      if (x < b.x0 || x > b.x1 || y < b.y0 || y > b.y1) continue;
      if (contains(*b.ring, Point2{x, y})) return true;
    }
    return false;
  });
}

struct Target {
  Vec3 n, c, ex, ey;
  double hw, hh;

  bool hit(const Vec3& origin, const Vec3& dir, double t_max) const {
    const double denom = dot(n, dir);
    if (denom == 0.0) return false;
    const double t = dot(n, c - origin) / denom;
    if (!(t > 0.0 && t < t_max)) return false;
    const Vec3 d = origin + dir * t - c;
    return std::abs(dot(ex, d)) <= hw && std::abs(dot(ey, d)) <= hh;
  }
};

}  // namespace

OracleEstimate sample_efficiency(const OrientedHeliostat& subject, std::span<const ProjectedQuad> quads,
                                 const OracleConfig& cfg) {
  return sample_quads(subject, quads, cfg);
}

OracleEstimate sample_efficiency(const OrientedHeliostat& subject, std::span<const OrientedHeliostat> field,
                                 const SunState& sun, const OracleConfig& cfg) {
  if (cfg.test == OcclusionTest::ProjectedQuads) {
    const auto quads = projected_quads(subject, field, sun);
    return sample_quads(subject, quads, cfg);
  }

  std::vector<Target> targets;
  for (const OrientedHeliostat& o : field) {
    if (o.id() == subject.id()) continue;
    const Mat3& r = o.frame().rotation();
    targets.push_back(Target{o.normal(), o.center(), r.row(0), r.row(1), o.width() / 2, o.height() / 2});
  }
  const Vec3 to_sun = -sun.u_s;
  const HeliostatFrame& frame = subject.frame();
  return run_sampling(subject, cfg, [&](double x, double y) {
    const Vec3 p = from_frame(frame, Vec3{x, y, 0.0});
    const Vec3 to_aim = subject.aim() - p;
    for (const Target& t : targets) {
      if (t.hit(p, to_sun, std::numeric_limits<double>::infinity()) || t.hit(p, to_aim, 1.0)) return true;
    }
    return false;
  });
}

OracleComparison oracle_check(const OrientedHeliostat& subject, std::span<const OrientedHeliostat> field,
                              const SunState& sun, const OracleConfig& cfg, bool corrupt_first_quad) {
  OracleComparison cmp;
  if (!corrupt_first_quad) {
    cmp.clipping = efficiency(subject, field, sun).efficiency;
  } else {
    const auto quads = projected_quads(subject, field, sun);
    Region r(subject.outline());
    for (std::size_t k = 0; k < quads.size(); ++k) {
      if (k == 0) {
        std::vector<Point2> moved(quads[k].ring.begin(), quads[k].ring.end());
        for (Point2& p : moved) p.x += subject.width() / 2;
        r = difference(r, Polygon2(std::move(moved)));
      } else {
        r = difference(r, quads[k].ring);
      }
    }
    cmp.clipping = region_area(r) / subject.area();
  }
  cmp.oracle = sample_efficiency(subject, field, sun, cfg);
  cmp.discrepancy = std::abs(cmp.clipping - cmp.oracle.estimate);
  cmp.allowance = oracle_allowance(cmp.oracle.standard_error);
  cmp.pass = cmp.discrepancy <= cmp.allowance;
  return cmp;
}

}  // namespace helio
