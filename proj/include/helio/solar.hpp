#pragma once

#include "helio/linalg3.hpp"

namespace helio {

/// Sun seen from the plant: solar height eta, compass azimuth theta (from
/// north through east), and the unit direction u_s in which the light travels.
/// With +Y pointing west, an afternoon sun gives u_s.y < 0.
struct SunState {
  double eta = 0.0;
  double theta = 0.0;
  Vec3 u_s{0.0, 0.0, -1.0};
};

/// u_s = (-cos(eta) cos(theta), cos(eta) sin(theta), -sin(eta)).
/// Throws std::domain_error("sun below horizon") for eta <= 0.
SunState sun_vector(double eta, double theta);

struct SolarAngles {
  double eta = 0.0;    ///< radians above the horizon
  double theta = 0.0;  ///< radians in [0, 2*pi): morning in (0, pi), afternoon in (pi, 2*pi)
};

/// Declination in radians, 23.45 deg * sin(2 pi (284 + n) / 365).
double declination(int day_of_year);

/// Day of year (1..365) of a calendar date in a non-leap year.
/// Throws std::invalid_argument for impossible dates.
int day_of_year(int month, int day);

/// Sun position at apparent solar time `solar_hour` (12.0 is solar noon).
/// Throws std::domain_error("sun below horizon") when the sun is not up and
/// std::invalid_argument for out-of-range inputs.
SolarAngles solar_position(int day_of_year, double solar_hour, double latitude);

inline SunState sun_at(int day_of_year, double solar_hour, double latitude) {
  const SolarAngles a = solar_position(day_of_year, solar_hour, latitude);
  return sun_vector(a.eta, a.theta);
}

constexpr double deg_to_rad(double deg) { return deg * 0.017453292519943295; }
constexpr double rad_to_deg(double rad) { return rad * 57.29577951308232; }

}  // namespace helio
