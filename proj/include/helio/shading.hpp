#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "helio/clip.hpp"
#include "helio/linalg3.hpp"
#include "helio/polygon2d.hpp"
#include "helio/solar.hpp"

namespace helio {

/// Flat rectangular heliostat as described by a layout.
struct Heliostat {
  std::string id;
  Vec3 center;        ///< mirror center X_c, m
  double width = 0;   ///< L_x, m
  double height = 0;  ///< L_y, m
  Vec3 aim;           ///< aim point T, m
  double spin = 0;    ///< angle of the local X' axis, radians
};

/// Mirror corners in the local frame, counterclockwise:
/// (-w/2, h/2), (-w/2, -h/2), (w/2, -h/2), (w/2, h/2).
std::array<Point2, 4> local_corners(double width, double height);

/// Heliostat tracking a given sun state. Frame and plant-frame corners are
/// computed once at construction.
class OrientedHeliostat {
 public:
  OrientedHeliostat(Heliostat spec, const SunState& sun);

  const Heliostat& spec() const { return spec_; }
  const std::string& id() const { return spec_.id; }
  const Vec3& center() const { return spec_.center; }
  const Vec3& aim() const { return spec_.aim; }
  double width() const { return spec_.width; }
  double height() const { return spec_.height; }

  /// Unit mirror normal, parallel to u_t - u_s.
  const Vec3& normal() const { return normal_; }
  const HeliostatFrame& frame() const { return frame_; }
  /// Corners in the plant frame, in local_corners order.
  const std::array<Vec3, 4>& corners() const { return corners_; }
  /// The mirror outline in its own frame (counterclockwise).
  Polygon2 outline() const;
  double area() const { return spec_.width * spec_.height; }

 private:
  Heliostat spec_;
  Vec3 normal_;
  HeliostatFrame frame_;
  std::array<Vec3, 4> corners_;
};

/// Points the heliostat so that light along sun.u_s reflects toward its aim point.
/// Throws std::invalid_argument("heliostat at receiver") when center == aim.
OrientedHeliostat orient(const Heliostat& h, const SunState& sun);

enum class QuadKind { Shadow, Block };

/// A neighbor's outline projected onto the subject plane, in the subject's
/// local coordinates. Four vertices unless the neighbor straddles the
/// subject plane, in which case only its part in front of the plane is kept.
struct ProjectedQuad {
  std::string source_id;
  QuadKind kind = QuadKind::Shadow;
  Polygon2 ring;
};

/// Shadow of `other` on `subject`: corners moved along u_s onto the subject
/// plane. Nothing when the light grazes the subject plane or when no part of
/// `other` lies in front of it.
std::optional<ProjectedQuad> project_shadow(const OrientedHeliostat& subject, const OrientedHeliostat& other,
                                            const SunState& sun);

/// Block of `other` on `subject`: corners projected from the subject's aim
/// point onto the subject plane. Nothing when `other` is not between the
/// subject plane and the aim point.
std::optional<ProjectedQuad> project_block(const OrientedHeliostat& subject, const OrientedHeliostat& other);

/// False when every vertex lies beyond the same side of the subject rectangle.
bool cull(const OrientedHeliostat& subject, const ProjectedQuad& quad);
bool cull(double width, double height, std::span<const Point2> pts);

struct EfficiencyOptions {
  bool cull = true;
  /// Also compute per-source loss areas (extra clipping work).
  bool contributions = false;
};

struct SourceLoss {
  std::string source_id;
  double individual = 0.0;   ///< area lost to this source alone, m^2
  double incremental = 0.0;  ///< area removed by this source in the sequential pass, m^2
};

struct EfficiencyResult {
  std::string subject_id;
  double efficiency = 1.0;
  double reflecting_area = 0.0;
  double total_area = 0.0;
  Region residual;
  std::vector<ProjectedQuad> quads;  ///< quads that survived culling, in subtraction order
  std::vector<SourceLoss> contributions;
};

/// Blocking-and-shadowing efficiency of `subject`: starting from its outline,
/// subtract the block then the shadow quad of every other heliostat in field
/// order and return the remaining area over the mirror area. Entries of
/// `field` with the subject's id are skipped.
EfficiencyResult efficiency(const OrientedHeliostat& subject, std::span<const OrientedHeliostat> field,
                            const SunState& sun, const EfficiencyOptions& options = {});

}  // namespace helio
