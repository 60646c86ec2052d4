#pragma once

#include <string>
#include <vector>

#include "helio/shading.hpp"

namespace helio {

struct SvgLayer {
  std::string source_id;
  QuadKind kind = QuadKind::Shadow;
  std::string color;  ///< "#rrggbb"
  Polygon2 ring;
};

/// Picture of one subject in its own frame: outline, every surviving quad
/// grouped by source, and the residual reflecting region.
struct SvgScene {
  double width = 0;   ///< subject L_x, m
  double height = 0;  ///< subject L_y, m
  std::string subject_id;
  std::vector<SvgLayer> quads;
  Region residual;
  std::string caption;  ///< contains the efficiency formatted as in reports
};

/// Stable color for a source id (FNV-1a hash mapped to a hue).
std::string source_color(const std::string& id);

SvgScene build_scene(const OrientedHeliostat& subject, const EfficiencyResult& result, const std::string& when = "");

/// SVG 1.1 document; +y points up in the drawing.
std::string render_svg(const SvgScene& scene);

}  // namespace helio
