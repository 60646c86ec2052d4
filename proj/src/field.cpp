#include "helio/field.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace helio {

std::vector<Heliostat> FieldLayout::resolve() const {
  std::unordered_map<std::string, Vec3> aims;
  for (const Receiver& r : receivers) aims.emplace(r.id, r.position);
  std::vector<Heliostat> out;
  out.reserve(heliostats.size());
  for (const HeliostatRecord& h : heliostats) {
    const auto it = aims.find(h.receiver);
    if (it == aims.end()) throw LayoutError("heliostat '" + h.id + "' references unknown receiver '" + h.receiver + "'");
    out.push_back(Heliostat{h.id, h.center, h.width, h.height, it->second, h.spin});
  }
  return out;
}

void validate(const FieldLayout& layout) {
  if (!std::isfinite(layout.latitude_deg) || std::abs(layout.latitude_deg) >= 90.0) {
    throw LayoutError("plant latitude out of range");
  }
  std::unordered_map<std::string, const Receiver*> receivers;
  for (const Receiver& r : layout.receivers) {
    if (!receivers.emplace(r.id, &r).second) throw LayoutError("duplicate receiver id '" + r.id + "'");
  }
  std::unordered_set<std::string> ids;
  for (const HeliostatRecord& h : layout.heliostats) {
    if (!ids.insert(h.id).second) throw LayoutError("duplicate heliostat id '" + h.id + "'");
    if (!(h.width > 0) || !(h.height > 0)) {
      throw LayoutError("heliostat '" + h.id + "' has non-positive dimensions");
    }
    const auto it = receivers.find(h.receiver);
    if (it == receivers.end()) {
      throw LayoutError("heliostat '" + h.id + "' references unknown receiver '" + h.receiver + "'");
    }
    if (!(it->second->position.z > h.center.z)) {
      throw LayoutError("receiver '" + h.receiver + "' is not above heliostat '" + h.id + "'");
    }
  }
}

namespace {

double parse_number(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !std::isfinite(v)) throw LayoutError(where + ": invalid number '" + text + "'");
  return v;
}

class Fields {
 public:
  Fields(std::istringstream& tokens, std::string where) : where_(std::move(where)) {
    std::string tok;
    while (tokens >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0) throw LayoutError(where_ + ": expected key=value, got '" + tok + "'");
      if (!values_.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second) {
        throw LayoutError(where_ + ": repeated key '" + tok.substr(0, eq) + "'");
      }
    }
  }

  std::string text(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end() || it->second.empty()) throw LayoutError(where_ + ": missing '" + key + "'");
    std::string v = it->second;
    values_.erase(it);
    return v;
  }
  double number(const std::string& key) { return parse_number(text(key), where_); }
  double number_or(const std::string& key, double fallback) {
    return values_.count(key) ? number(key) : fallback;
  }
  void finish() {
    if (!values_.empty()) throw LayoutError(where_ + ": unknown key '" + values_.begin()->first + "'");
  }

 private:
  std::string where_;
  std::map<std::string, std::string> values_;
};

}  // namespace

FieldLayout parse_layout(std::istream& in, const std::string& source) {
  FieldLayout layout;
  bool have_plant = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string kind;
    if (!(tokens >> kind)) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    Fields f(tokens, where);
    if (kind == "plant") {
      if (have_plant) throw LayoutError(where + ": duplicate plant record");
      layout.latitude_deg = f.number("lat");
      have_plant = true;
    } else if (kind == "receiver") {
      Receiver r;
      r.id = f.text("id");
      r.position = {f.number("x"), f.number("y"), f.number("z")};
      layout.receivers.push_back(std::move(r));
    } else if (kind == "heliostat") {
      HeliostatRecord h;
      h.id = f.text("id");
      h.center = {f.number("x"), f.number("y"), f.number("z")};
      h.width = f.number("w");
      h.height = f.number("h");
      h.receiver = f.text("receiver");
      h.spin = f.number_or("phi", 0.0);
      layout.heliostats.push_back(std::move(h));
    } else {
      throw LayoutError(where + ": unknown record '" + kind + "'");
    }
    f.finish();
  }
  if (!have_plant) throw LayoutError(source + ": missing plant record");
  try {
    validate(layout);
  } catch (const LayoutError& e) {
    throw LayoutError(source + ": " + e.what());
  }
  return layout;
}

FieldLayout load_layout(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LayoutError(path.string() + ": cannot open layout file");
  return parse_layout(in, path.string());
}

namespace {

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_layout(std::ostream& out, const FieldLayout& layout) {
  out << "plant lat=" << exact(layout.latitude_deg) << '\n';
  for (const Receiver& r : layout.receivers) {
    out << "receiver id=" << r.id << " x=" << exact(r.position.x) << " y=" << exact(r.position.y)
        << " z=" << exact(r.position.z) << '\n';
  }
  for (const HeliostatRecord& h : layout.heliostats) {
    out << "heliostat id=" << h.id << " x=" << exact(h.center.x) << " y=" << exact(h.center.y)
        << " z=" << exact(h.center.z) << " w=" << exact(h.width) << " h=" << exact(h.height)
        << " receiver=" << h.receiver;
    if (h.spin != 0.0) out << " phi=" << exact(h.spin);
    out << '\n';
  }
}

namespace {

// Uniform in [-1, 1) from the raw engine output, independent of the
// standard library's distribution implementations.
double symmetric_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

}  // namespace

FieldLayout synthetic_field(std::size_t n, const RadialStagger& p) {
  if (n == 0) throw std::invalid_argument("synthetic field needs at least one heliostat");
  const double diag = std::hypot(p.width, p.height);
  if (!(p.width > 0) || !(p.height > 0) || !(p.first_radius > 0) || !(p.radial_spacing > 0) ||
      !(p.half_sector_deg > 0 && p.half_sector_deg <= 180) || !(p.jitter >= 0) ||
      !(p.receiver_height > p.pivot_height)) {
    throw std::invalid_argument("infeasible spacing parameters");
  }
  // Closest pairs: same row, and rows two apart; staggered neighbors are farther.
  const double margin = 2 * std::sqrt(2.0) * p.jitter;
  if (p.azimuthal_spacing <= diag + margin || 2 * p.radial_spacing <= diag + margin ||
      std::hypot(p.radial_spacing, p.azimuthal_spacing / 2) <= diag + margin) {
    throw std::invalid_argument("infeasible spacing parameters");
  }

  FieldLayout layout;
  layout.latitude_deg = p.latitude_deg;
  layout.receivers.push_back(Receiver{"tower", Vec3{0, 0, p.receiver_height}});

  std::mt19937_64 rng(p.seed);
  const double half_sector = deg_to_rad(p.half_sector_deg);
  // Rows are grouped in zones sharing one angular step, so consecutive rows
  // stay staggered. A new zone starts, after a double radial gap, once the
  // arc between neighbors has doubled.
  double r = p.first_radius;
  double step = p.azimuthal_spacing / r;
  for (int row = 0; layout.heliostats.size() < n; ++row, r += p.radial_spacing) {
    if (r * step >= 2 * p.azimuthal_spacing) {
      r += p.radial_spacing;
      step = p.azimuthal_spacing / r;
      row = 0;
    }
    const double offset = row % 2 == 0 ? 0.0 : step / 2;
    // Center-out ordering keeps a partially filled last row symmetric.
    std::vector<double> angles;
    if (offset == 0.0) angles.push_back(0.0);
    for (int k = 0;; ++k) {
      const double a = (offset == 0.0 ? step : offset) + k * step;
      if (a > half_sector) break;
      angles.push_back(a);
      angles.push_back(-a);
    }
    for (std::size_t k = 0; k < angles.size() && layout.heliostats.size() < n; ++k) {
      const double a = angles[k];
      const double jx = p.jitter * symmetric_unit(rng);
      const double jy = p.jitter * symmetric_unit(rng);
      HeliostatRecord h;
      h.id = "H" + std::to_string(layout.heliostats.size() + 1);
      h.center = Vec3{r * std::cos(a) + jx, r * std::sin(a) + jy, p.pivot_height};
      h.width = p.width;
      h.height = p.height;
      h.receiver = "tower";
      layout.heliostats.push_back(std::move(h));
    }
  }

  const auto& hs = layout.heliostats;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    for (std::size_t j = i + 1; j < hs.size(); ++j) {
      if (norm(hs[i].center - hs[j].center) <= diag) throw std::invalid_argument("infeasible spacing parameters");
    }
  }
  return layout;
}

unsigned default_workers() {
  if (const char* env = std::getenv("HELIO_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

FieldReport evaluate_field(const FieldLayout& layout, const SunState& sun, const EvaluateOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<OrientedHeliostat> field;
  field.reserve(layout.heliostats.size());
  for (const Heliostat& h : layout.resolve()) field.emplace_back(h, sun);

  FieldReport report;
  report.sun = sun;
  report.results.resize(field.size());

  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < field.size(); i = next.fetch_add(1)) {
      report.results[i] = efficiency(field[i], field, sun, options.efficiency);
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(field.size())));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  double sum = 0;
  for (const EfficiencyResult& r : report.results) sum += r.efficiency;
  report.average = report.results.empty() ? 1.0 : sum / static_cast<double>(report.results.size());
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_report(std::ostream& out, const FieldReport& report, const ReportHeader& header) {
  out << "# sun eta=" << format_real(rad_to_deg(report.sun.eta)) << " theta=" << format_real(rad_to_deg(report.sun.theta))
      << '\n';
  out << "# date " << (header.date.empty() ? "-" : header.date) << '\n';
  if (header.timing) out << "# time_ms " << format_real(report.seconds * 1e3) << '\n';
  out << "# id efficiency area_reflecting area_total\n";
  for (const EfficiencyResult& r : report.results) {
    out << r.subject_id << ' ' << format_real(r.efficiency) << ' ' << format_real(r.reflecting_area) << ' '
        << format_real(r.total_area) << '\n';
  }
  out << "average " << format_real(report.average) << '\n';
}

}  // namespace helio
