#include "helio/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

#include "helio/field.hpp"

namespace helio {

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void ring_path(std::ostream& out, const Polygon2& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    out << (i == 0 ? 'M' : 'L') << num(p[i].x) << ',' << num(-p[i].y) << ' ';
  }
  out << 'Z';
}

}  // namespace

std::string source_color(const std::string& id) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : id) {
    h ^= c;
    h *= 16777619u;
  }
  // HSV with fixed saturation/value; hue from the hash.
  const double hue = static_cast<double>(h % 360u) / 60.0;
  const double s = 0.75, v = 0.9;
  const double c = v * s;
  const double x = c * (1 - std::abs(std::fmod(hue, 2.0) - 1));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hue)) {
    case 0: r = c, g = x; break;
    case 1: r = x, g = c; break;
    case 2: g = c, b = x; break;
    case 3: g = x, b = c; break;
    case 4: r = x, b = c; break;
    default: r = c, b = x; break;
  }
  const double m = v - c;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround((r + m) * 255)),
                static_cast<int>(std::lround((g + m) * 255)), static_cast<int>(std::lround((b + m) * 255)));
  return buf;
}

SvgScene build_scene(const OrientedHeliostat& subject, const EfficiencyResult& result, const std::string& when) {
  SvgScene scene;
  scene.width = subject.width();
  scene.height = subject.height();
  scene.subject_id = subject.id();
  for (const ProjectedQuad& q : result.quads) {
    scene.quads.push_back(SvgLayer{q.source_id, q.kind, source_color(q.source_id), q.ring});
  }
  scene.residual = result.residual;
  scene.caption = "heliostat " + subject.id() + (when.empty() ? "" : " at " + when) +
                  ": e = " + format_real(result.efficiency);
  return scene;
}

std::string render_svg(const SvgScene& scene) {
  // Frame the subject with a margin; quads reaching beyond are cropped by the viewBox.
  const double margin = 0.3 * std::max(scene.width, scene.height);
  const double x0 = -scene.width / 2 - margin;
  const double y0 = -scene.height / 2 - margin;
  const double vw = scene.width + 2 * margin;
  const double vh = scene.height + 2 * margin;
  const double legend = 0.12 * vh;
  const double stroke = 0.004 * std::max(vw, vh);

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\""
      << num(800 * (vh + legend) / vw) << "\" viewBox=\"" << num(x0) << ' ' << num(y0) << ' ' << num(vw) << ' '
      << num(vh + legend) << "\">\n";
  out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(vw) << "\" height=\""
      << num(vh + legend) << "\" fill=\"white\"/>\n";

  out << "<g id=\"residual\">\n";
  if (!scene.residual.empty()) {
    out << "<path fill=\"#f4e27a\" fill-rule=\"nonzero\" stroke=\"none\" d=\"";
    for (const Polygon2& p : scene.residual.components) ring_path(out, p);
    out << "\"/>\n";
  }
  out << "</g>\n";

  out << "<g id=\"quads\">\n";
  for (const SvgLayer& layer : scene.quads) {
    const bool block = layer.kind == QuadKind::Block;
    out << "<path class=\"" << (block ? "block" : "shadow") << "\" data-source=\"" << xml_escape(layer.source_id)
        << "\" fill=\"" << layer.color << "\" fill-opacity=\"" << (block ? "0.25" : "0.45") << "\" stroke=\""
        << layer.color << "\" stroke-width=\"" << num(stroke) << "\"" << (block ? " stroke-dasharray=\"0.4,0.2\"" : "")
        << " d=\"";
    ring_path(out, layer.ring);
    out << "\"/>\n";
  }
  out << "</g>\n";

  out << "<rect id=\"subject\" x=\"" << num(-scene.width / 2) << "\" y=\"" << num(-scene.height / 2)
      << "\" width=\"" << num(scene.width) << "\" height=\"" << num(scene.height)
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"" << num(1.5 * stroke) << "\"/>\n";

  const double font = 0.35 * legend;
  out << "<text id=\"caption\" x=\"" << num(x0 + 0.5 * font) << "\" y=\"" << num(y0 + vh + 0.6 * legend)
      << "\" font-family=\"sans-serif\" font-size=\"" << num(font) << "\">" << xml_escape(scene.caption)
      << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace helio
