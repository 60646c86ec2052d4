#include "helio/linalg3.hpp"

#include <stdexcept>

namespace helio {

Vec3 normalized(const Vec3& v) {
  const double len = norm(v);
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  }
  return v / len;
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j] + m[i][2] * o.m[2][j];
    }
  }
  return r;
}

Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
  }
  return r;
}

double Mat3::determinant() const {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

namespace {

Mat3 roll_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  return Mat3{{{{c, s, 0}, {-s, c, 0}, {0, 0, 1}}}};
}

Mat3 tilt_x(double b) {
  const double c = std::cos(b), s = std::sin(b);
  return Mat3{{{{1, 0, 0}, {0, c, s}, {0, -s, c}}}};
}

}  // namespace

Mat3 rotation_zxz(const EulerZXZ& angles) {
  return roll_z(angles.gamma) * tilt_x(angles.beta) * roll_z(angles.alpha);
}

EulerZXZ frame_angles(const Vec3& n, double phi) {
  const Vec3 u = [&] {
    try {
      return normalized(n);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("degenerate normal");
    }
  }();
  const double rho = std::hypot(u.x, u.y);
  // atan2(0, 0) is undefined; any alpha gives the same frame up to the roll.
  const double alpha = rho == 0.0 ? 0.0 : std::atan2(u.x, -u.y);
  return {alpha, std::atan2(rho, u.z), phi};
}

HeliostatFrame frame_from_normal(const Vec3& n, double phi, const Vec3& center) {
  return HeliostatFrame(center, rotation_zxz(frame_angles(n, phi)));
}

Vec3 from_frame(const HeliostatFrame& f, const Vec3& xp) {
  const Mat3& r = f.rotation();
  return Vec3{r.m[0][0] * xp.x + r.m[1][0] * xp.y + r.m[2][0] * xp.z,
              r.m[0][1] * xp.x + r.m[1][1] * xp.y + r.m[2][1] * xp.z,
              r.m[0][2] * xp.x + r.m[1][2] * xp.y + r.m[2][2] * xp.z} +
         f.origin();
}

}  // namespace helio
