#pragma once

#include <array>
#include <cmath>

namespace helio {

/// Point or direction in the plant frame (X north, Y west, Z up).
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Returns v / |v|. Throws std::invalid_argument for the zero vector.
Vec3 normalized(const Vec3& v);

/// Row-major 3x3 matrix.
struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  static constexpr Mat3 identity() { return Mat3{{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}}; }

  constexpr Vec3 operator*(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }
  Mat3 operator*(const Mat3& o) const;
  Mat3 transposed() const;
  double determinant() const;
  Vec3 row(int i) const { return {m[i][0], m[i][1], m[i][2]}; }
};

/// Euler angles in the ZXZ convention, radians.
struct EulerZXZ {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// Rz(gamma) * Rx(beta) * Rz(alpha), with the passive sign convention
/// Rz(a) = [[cos a, sin a, 0], [-sin a, cos a, 0], [0, 0, 1]].
Mat3 rotation_zxz(const EulerZXZ& angles);

/// Local frame of a flat heliostat: origin at the mirror center, Z' along the
/// mirror normal. Immutable once built.
class HeliostatFrame {
 public:
  HeliostatFrame() = default;
  HeliostatFrame(const Vec3& origin, const Mat3& rotation) : origin_(origin), rotation_(rotation) {}

  const Vec3& origin() const { return origin_; }
  const Mat3& rotation() const { return rotation_; }

 private:
  Vec3 origin_{};
  Mat3 rotation_ = Mat3::identity();
};

/// Builds the frame whose rotation is R(atan2(n.x, -n.y), atan2(|n_xy|, n.z), phi).
/// For n.x = n.y = 0 the first angle is taken as 0.
HeliostatFrame frame_from_normal(const Vec3& n, double phi, const Vec3& center);

/// Euler angles used by frame_from_normal, exposed for diagnostics.
EulerZXZ frame_angles(const Vec3& n, double phi);

/// Plant frame -> heliostat frame: R (x - P).
inline Vec3 to_frame(const HeliostatFrame& f, const Vec3& x) { return f.rotation() * (x - f.origin()); }

/// Heliostat frame -> plant frame: R^T x' + P.
Vec3 from_frame(const HeliostatFrame& f, const Vec3& xp);

}  // namespace helio
