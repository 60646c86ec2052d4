#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "helio/shading.hpp"

using namespace helio;

namespace {

const Vec3 kTower41{0, 0, 100};

std::vector<OrientedHeliostat> orient_all(const std::vector<Heliostat>& hs, const SunState& sun) {
  std::vector<OrientedHeliostat> out;
  for (const Heliostat& h : hs) out.emplace_back(h, sun);
  return out;
}

std::vector<Heliostat> simple_case() {
  return {Heliostat{"c", {108, 0, 5}, 10, 10, kTower41, 0}, Heliostat{"h1", {100, 8, 5}, 10, 10, kTower41, 0},
          Heliostat{"h2", {100, -8, 5}, 10, 10, kTower41, 0}};
}

SunState jan21(double hour, double lat_deg) { return sun_at(21, hour, deg_to_rad(lat_deg)); }

Point2 centroid(const Polygon2& p) {
  Point2 c;
  for (const Point2& q : p) c = c + q;
  return c * (1.0 / static_cast<double>(p.size()));
}

std::vector<Heliostat> random_field(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> pos(-40, 40), size(4, 12), z(3, 8);
  const Vec3 tower{0, 0, 80};
  std::vector<Heliostat> hs;
  while (static_cast<int>(hs.size()) < n) {
    Heliostat h{"H" + std::to_string(hs.size()), {120 + pos(rng), pos(rng), z(rng)}, size(rng), size(rng), tower, 0};
    bool clear = true;
    for (const Heliostat& o : hs) clear = clear && norm(o.center - h.center) > 17.0;
    if (clear) hs.push_back(h);
  }
  return hs;
}

}  // namespace

TEST_CASE("local corners are counterclockwise") {
  const auto c = local_corners(10, 4);
  CHECK(c[0] == Point2{-5, 2});
  CHECK(c[1] == Point2{-5, -2});
  CHECK(c[2] == Point2{5, -2});
  CHECK(c[3] == Point2{5, 2});
  CHECK(signed_area(std::span<const Point2>(c)) == 40.0);
}

TEST_CASE("orientation bisects sun and receiver directions") {
  const SunState zenith = sun_vector(std::numbers::pi / 2, 0);
  const OrientedHeliostat up({"a", {0, 0, 0}, 2, 2, {0, 0, 50}, 0}, zenith);
  CHECK(norm(up.normal() - Vec3{0, 0, 1}) < 1e-15);

  const SunState sun = jan21(12, 40.08);
  const auto field = orient_all(simple_case(), sun);
  for (const OrientedHeliostat& h : field) {
    const Vec3 n = h.normal();
    const Vec3 reflected = sun.u_s - 2 * dot(sun.u_s, n) * n;
    CHECK(norm(reflected - normalized(h.aim() - h.center())) < 1e-10);
    CHECK(std::abs(norm(n) - 1) < 1e-12);
    for (const Vec3& corner : h.corners()) {
      CHECK(std::abs(to_frame(h.frame(), corner).z) < 1e-10);
      CHECK(std::abs(dot(corner - h.center(), n)) < 1e-10);
    }
  }
}

TEST_CASE("invalid heliostats") {
  const SunState sun = jan21(12, 40.08);
  CHECK_THROWS_WITH_AS(orient({"x", {0, 0, 100}, 1, 1, {0, 0, 100}, 0}, sun), "heliostat at receiver",
                       std::invalid_argument);
  CHECK_THROWS_AS(orient({"x", {10, 0, 5}, 0, 1, {0, 0, 100}, 0}, sun), std::invalid_argument);
}

TEST_CASE("blocker straight between subject and receiver") {
  const SunState zenith = sun_vector(std::numbers::pi / 2, 0);
  const OrientedHeliostat subject({"s", {0, 0, 0}, 10, 10, {0, 0, 100}, 0}, zenith);
  const OrientedHeliostat above({"a", {0, 0, 10}, 10, 10, {0, 0, 100}, 0}, zenith);
  const auto block = project_block(subject, above);
  REQUIRE(block);
  CHECK(block->kind == QuadKind::Block);
  CHECK(block->source_id == "a");
  const Point2 c = centroid(block->ring);
  CHECK(std::abs(c.x) < 1e-12);
  CHECK(std::abs(c.y) < 1e-12);
  CHECK(signed_area(block->ring) == doctest::Approx(std::pow(10 * 100 / 90.0, 2)).epsilon(1e-12));
  // Seen the other way round, the subject is below its neighbor and cannot block it.
  CHECK_FALSE(project_block(above, subject));

  const auto shadow = project_shadow(subject, above, zenith);
  REQUIRE(shadow);
  CHECK(signed_area(shadow->ring) == doctest::Approx(100.0).epsilon(1e-12));
  CHECK_FALSE(project_shadow(above, subject, zenith));

  const std::vector<OrientedHeliostat> field{subject, above};
  CHECK(efficiency(subject, field, zenith).efficiency == 0.0);
  CHECK(efficiency(above, field, zenith).efficiency == 1.0);
}

TEST_CASE("culling keeps every quad that reaches the subject rectangle") {
  CHECK(cull(2, 2, std::vector<Point2>{{0, 0}, {3, 0}, {3, 3}}));
  CHECK_FALSE(cull(2, 2, std::vector<Point2>{{1.5, -5}, {3, -5}, {3, 5}, {1.5, 5}}));
  CHECK_FALSE(cull(2, 2, std::vector<Point2>{{-5, -3}, {5, -3}, {5, -1.01}, {-5, -1.01}}));
  // Straddles two sides without touching the rectangle: the test is conservative.
  CHECK(cull(2, 2, std::vector<Point2>{{0.5, 3}, {3, 0.5}, {3, 3}}));
}

TEST_CASE("two-heliostat example") {
  const auto noon = jan21(12, 40.08);
  const auto field = orient_all(simple_case(), noon);
  EfficiencyOptions opts;
  opts.contributions = true;
  const EfficiencyResult r = efficiency(field[0], field, noon, opts);
  CHECK(std::abs(r.efficiency - 0.76) <= 0.02);
  REQUIRE(r.contributions.size() == 2);
  CHECK(std::abs(r.contributions[0].individual - r.contributions[1].individual) < 1e-6);
  CHECK(r.contributions[0].individual > 1.0);
  CHECK(r.total_area == 100.0);
  CHECK(r.reflecting_area == doctest::Approx(100 * r.efficiency).epsilon(1e-15));

  const auto late = jan21(15.25, 40.08);
  const auto field_late = orient_all(simple_case(), late);
  const EfficiencyResult s = efficiency(field_late[0], field_late, late);
  CHECK(std::abs(s.efficiency - 0.31) <= 0.03);

  // The neighbors are never shaded by the subject behind them.
  CHECK(efficiency(field[1], field, noon).efficiency > r.efficiency);
}

TEST_CASE("efficiency bounds and empty field") {
  const SunState sun = jan21(10, 40.08);
  const OrientedHeliostat lone({"c", {108, 0, 5}, 10, 10, kTower41, 0}, sun);
  CHECK(efficiency(lone, std::span<const OrientedHeliostat>{}, sun).efficiency == 1.0);
  const std::vector<OrientedHeliostat> self{lone};
  CHECK(efficiency(lone, self, sun).efficiency == 1.0);
}

TEST_CASE("culling never changes the result") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> hour(8, 16);
  EfficiencyOptions all;
  all.cull = false;
  for (int k = 0; k < 30; ++k) {
    const SunState sun = jan21(hour(rng), 38.23);
    const auto field = orient_all(random_field(rng, 12), sun);
    for (const OrientedHeliostat& s : field) {
      const double culled = efficiency(s, field, sun).efficiency;
      const double full = efficiency(s, field, sun, all).efficiency;
      CHECK(std::abs(culled - full) <= 1e-12);
      CHECK(culled >= 0.0);
      CHECK(culled <= 1.0);
    }
  }
}

TEST_CASE("removing a neighbor never lowers efficiency") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> hour(8, 16);
  for (int k = 0; k < 20; ++k) {
    const SunState sun = jan21(hour(rng), 38.23);
    auto hs = random_field(rng, 10);
    const auto field = orient_all(hs, sun);
    std::vector<double> before;
    for (const auto& s : field) before.push_back(efficiency(s, field, sun).efficiency);
    const std::size_t drop = k % hs.size();
    std::vector<OrientedHeliostat> fewer;
    for (std::size_t i = 0; i < field.size(); ++i)
      if (i != drop) fewer.push_back(field[i]);
    for (std::size_t i = 0, j = 0; i < field.size(); ++i) {
      if (i == drop) continue;
      CHECK(efficiency(fewer[j], fewer, sun).efficiency >= before[i] - 1e-9);
      ++j;
    }
  }
}

TEST_CASE("quads are expressed in the subject frame") {
  const SunState sun = jan21(15.25, 40.08);
  const auto field = orient_all(simple_case(), sun);
  const auto shadow = project_shadow(field[0], field[1], sun);
  REQUIRE(shadow);
  // Each quad vertex, lifted back to the plant frame, lies on the light ray
  // through the matching corner of the neighbor.
  REQUIRE(shadow->ring.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const Vec3 p = from_frame(field[0].frame(), {shadow->ring[i].x, shadow->ring[i].y, 0});
    const Vec3 d = p - field[1].corners()[i];
    CHECK(norm(cross(d, sun.u_s)) < 1e-9 * std::max(1.0, norm(d)));
    CHECK(dot(d, sun.u_s) > 0);
  }
}
