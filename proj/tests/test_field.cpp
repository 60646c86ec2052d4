#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <string>

#include "doctest.h"
#include "helio/field.hpp"

using namespace helio;

namespace {

const std::string kData = HELIO_DATA_DIR;

FieldLayout parse(const std::string& text) {
  std::istringstream in(text);
  return parse_layout(in, "test.layout");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const LayoutError& e) {
    return e.what();
  }
  return "";
}

std::string report_text(const FieldLayout& layout, const SunState& sun, unsigned workers) {
  std::ostringstream out;
  write_report(out, evaluate_field(layout, sun, EvaluateOptions{workers, {}}), ReportHeader{"01-21 12:00", false});
  return out.str();
}

const char* kHeader = "plant lat=40\nreceiver id=t x=0 y=0 z=100\n";

}  // namespace

TEST_CASE("bundled layouts") {
  const FieldLayout simple = load_layout(kData + "/simple_case.layout");
  CHECK(simple.latitude_deg == 40.08);
  CHECK(simple.heliostats.size() == 3);
  REQUIRE(simple.receivers.size() == 1);
  CHECK(simple.receivers[0].position == Vec3{0, 0, 100});

  const FieldLayout real = load_layout(kData + "/real_scenario.layout");
  CHECK(real.heliostats.size() == 25);
  CHECK(real.receivers[0].position == Vec3{0, 0, 150});
  CHECK(real.heliostats[0].center == Vec3{630.93, -144.41, 5});
  CHECK(real.heliostats[10].center == Vec3{619.41, -98.828, 5});
  CHECK(real.heliostats[24].id == "24");

  const auto resolved = real.resolve();
  CHECK(resolved[3].aim == Vec3{0, 0, 150});
  CHECK(resolved[3].width == 12.88);
}

TEST_CASE("layout records") {
  const FieldLayout l = parse(std::string(kHeader) +
                              "# comment\n\nheliostat id=a x=10 y=1 z=5 w=2 h=3 receiver=t phi=0.5  # trailing\n");
  REQUIRE(l.heliostats.size() == 1);
  CHECK(l.heliostats[0].spin == 0.5);
  CHECK(l.heliostats[0].height == 3);
  CHECK(parse(kHeader).heliostats.empty());
}

TEST_CASE("layout diagnostics name the record") {
  CHECK(error_of("plant lat=40\nreceiver id=t x=0 y=0\n") == "test.layout:2: missing 'z'");
  CHECK(error_of(std::string(kHeader) + "heliostat id=a x=1 y=0 z=5 w=2 h=2 receiver=t\n"
                                        "heliostat id=a x=9 y=0 z=5 w=2 h=2 receiver=t\n") ==
        "test.layout: duplicate heliostat id 'a'");
  CHECK(error_of(std::string(kHeader) + "heliostat id=a x=1 y=0 z=5 w=2 h=2 receiver=nope\n") ==
        "test.layout: heliostat 'a' references unknown receiver 'nope'");
  CHECK(error_of(std::string(kHeader) + "heliostat id=a x=1 y=0 z=5 w=0 h=2 receiver=t\n") ==
        "test.layout: heliostat 'a' has non-positive dimensions");
  CHECK(error_of(std::string(kHeader) + "heliostat id=a x=1 y=0 z=500 w=1 h=2 receiver=t\n") ==
        "test.layout: receiver 't' is not above heliostat 'a'");
  CHECK(error_of(std::string(kHeader) + "mirror id=a\n") == "test.layout:3: unknown record 'mirror'");
  CHECK(error_of(std::string(kHeader) + "heliostat id=a x=1q y=0 z=5 w=1 h=2 receiver=t\n") ==
        "test.layout:3: invalid number '1q'");
  CHECK(error_of(std::string(kHeader) + "heliostat id=a x=1 y=0 z=5 w=1 h=2 receiver=t color=red\n") ==
        "test.layout:3: unknown key 'color'");
  CHECK(error_of("receiver id=t x=0 y=0 z=1\n") == "test.layout: missing plant record");
  CHECK_THROWS_AS(load_layout(kData + "/no_such.layout"), LayoutError);
}

TEST_CASE("write and parse round trip") {
  const FieldLayout a = synthetic_field(40);
  std::ostringstream out;
  write_layout(out, a);
  const FieldLayout b = parse(out.str());
  REQUIRE(b.heliostats.size() == a.heliostats.size());
  for (std::size_t i = 0; i < a.heliostats.size(); ++i) {
    CHECK(b.heliostats[i].id == a.heliostats[i].id);
    CHECK(b.heliostats[i].center == a.heliostats[i].center);
  }
  std::ostringstream again;
  write_layout(again, b);
  CHECK(again.str() == out.str());
}

TEST_CASE("synthetic field is deterministic and spaced") {
  std::ostringstream a, b;
  write_layout(a, synthetic_field(1000));
  write_layout(b, synthetic_field(1000));
  CHECK(a.str() == b.str());

  const FieldLayout f = synthetic_field(1000);
  CHECK(f.heliostats.size() == 1000);
  const double diag = std::hypot(12.88, 9.489);
  double closest = 1e9;
  for (std::size_t i = 0; i < f.heliostats.size(); ++i)
    for (std::size_t j = i + 1; j < f.heliostats.size(); ++j)
      closest = std::min(closest, norm(f.heliostats[i].center - f.heliostats[j].center));
  CHECK(closest > diag);
  for (const auto& h : f.heliostats) CHECK(h.center.x > 0);  // north field

  const double average = evaluate_field(f, sun_at(21, 12.0, deg_to_rad(f.latitude_deg))).average;
  CHECK(average > 0.9);
  CHECK(average < 1.0);

  RadialStagger tight;
  tight.azimuthal_spacing = 5;
  CHECK_THROWS_AS(synthetic_field(10, tight), std::invalid_argument);
  CHECK_THROWS_AS(synthetic_field(0), std::invalid_argument);
}

TEST_CASE("field evaluation") {
  const FieldLayout simple = load_layout(kData + "/simple_case.layout");
  const SunState noon = sun_at(21, 12.0, deg_to_rad(simple.latitude_deg));
  const FieldReport r = evaluate_field(simple, noon);
  REQUIRE(r.results.size() == 3);
  CHECK(r.results[0].subject_id == "c");
  CHECK(std::abs(r.results[0].efficiency - 0.76) <= 0.02);
  const double mean = (r.results[0].efficiency + r.results[1].efficiency + r.results[2].efficiency) / 3;
  CHECK(r.average == doctest::Approx(mean).epsilon(1e-15));
  CHECK(r.seconds >= 0);

  const FieldLayout one = synthetic_field(1);
  CHECK(evaluate_field(one, noon).average == 1.0);
  FieldLayout empty = one;
  empty.heliostats.clear();
  CHECK(evaluate_field(empty, noon).results.empty());
}

TEST_CASE("reports do not depend on the worker count") {
  const FieldLayout f = synthetic_field(150);
  const SunState sun = sun_at(21, 9.5, deg_to_rad(f.latitude_deg));
  const std::string one = report_text(f, sun, 1);
  CHECK(report_text(f, sun, 1) == one);
  CHECK(report_text(f, sun, 3) == one);
  CHECK(report_text(f, sun, 8) == one);
}

TEST_CASE("report format") {
  const FieldLayout simple = load_layout(kData + "/simple_case.layout");
  const SunState noon = sun_at(21, 12.0, deg_to_rad(simple.latitude_deg));
  const std::string text = report_text(simple, noon, 1);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# sun eta=", 0) == 0);
  std::getline(in, line);
  CHECK(line == "# date 01-21 12:00");
  std::getline(in, line);
  CHECK(line == "# id efficiency area_reflecting area_total");
  std::getline(in, line);
  CHECK(line.rfind("c 0.76", 0) == 0);
  CHECK(line.substr(line.rfind(' ') + 1) == "100");
  CHECK(text.find("\naverage ") != std::string::npos);
  CHECK(text.find("time_ms") == std::string::npos);
  CHECK(format_real(0.1234567891234) == "0.123456789");
}

TEST_CASE("worker count from the environment") {
  ::setenv("HELIO_WORKERS", "3", 1);
  CHECK(default_workers() == 3);
  ::setenv("HELIO_WORKERS", "junk", 1);
  CHECK(default_workers() >= 1);
  ::unsetenv("HELIO_WORKERS");
  CHECK(default_workers() >= 1);
}
