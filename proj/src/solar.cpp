#include "helio/solar.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <stdexcept>

namespace helio {

SunState sun_vector(double eta, double theta) {
  if (!(eta > 0.0)) throw std::domain_error("sun below horizon");
  if (eta > std::numbers::pi / 2 + 1e-12) throw std::invalid_argument("solar height above zenith");
  const double ce = std::cos(eta);
  return SunState{eta, theta, Vec3{-ce * std::cos(theta), ce * std::sin(theta), -std::sin(eta)}};
}

double declination(int n) {
  return deg_to_rad(23.45) * std::sin(2.0 * std::numbers::pi * (284.0 + n) / 365.0);
}

int day_of_year(int month, int day) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12 || day < 1 || day > kDays[static_cast<std::size_t>(month - 1)]) {
    throw std::invalid_argument("invalid calendar date");
  }
  int n = day;
  for (int m = 1; m < month; ++m) n += kDays[static_cast<std::size_t>(m - 1)];
  return n;
}

SolarAngles solar_position(int n, double solar_hour, double latitude) {
  if (n < 1 || n > 365) throw std::invalid_argument("day of year out of range");
  if (!(std::abs(latitude) < std::numbers::pi / 2)) throw std::invalid_argument("latitude out of range");

  const double delta = declination(n);
  const double omega = deg_to_rad(15.0 * (solar_hour - 12.0));
  const double sin_eta = std::sin(delta) * std::sin(latitude) +
                         std::cos(delta) * std::cos(latitude) * std::cos(omega);
  const double eta = std::asin(std::clamp(sin_eta, -1.0, 1.0));
  if (!(eta > 0.0)) throw std::domain_error("sun below horizon");

  // Compass azimuth from the east and north components of the sun direction.
  const double east = -std::cos(delta) * std::sin(omega);
  const double north = std::cos(latitude) * std::sin(delta) - std::sin(latitude) * std::cos(delta) * std::cos(omega);
  double theta = std::atan2(east, north);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  return SolarAngles{eta, theta};
}

}  // namespace helio
