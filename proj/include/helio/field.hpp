#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "helio/shading.hpp"
#include "helio/solar.hpp"

namespace helio {

struct Receiver {
  std::string id;
  Vec3 position;
};

struct HeliostatRecord {
  std::string id;
  Vec3 center;
  double width = 0;
  double height = 0;
  std::string receiver;
  double spin = 0;
};

/// A plant: latitude, receivers and heliostats, validated on load.
struct FieldLayout {
  double latitude_deg = 0;
  std::vector<Receiver> receivers;
  std::vector<HeliostatRecord> heliostats;

  /// Heliostats with their aim points resolved, in layout order.
  std::vector<Heliostat> resolve() const;
};

/// Layout diagnostic naming the source and, when known, the line.
class LayoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks unique ids, receiver references, positive dimensions and that every
/// receiver sits above the heliostats aiming at it. Throws LayoutError.
void validate(const FieldLayout& layout);

/// Text layout format, one record per line ('#' starts a comment):
///   plant lat=<deg>
///   receiver id=<str> x=<m> y=<m> z=<m>
///   heliostat id=<str> x=<m> y=<m> z=<m> w=<m> h=<m> receiver=<str> [phi=<rad>]
FieldLayout parse_layout(std::istream& in, const std::string& source = "<input>");
FieldLayout load_layout(const std::filesystem::path& path);
void write_layout(std::ostream& out, const FieldLayout& layout);

/// Parameters of the synthetic radially staggered north field.
struct RadialStagger {
  double latitude_deg = 38.23;
  double receiver_height = 150.0;
  double pivot_height = 5.0;
  double width = 12.88;
  double height = 9.489;
  double first_radius = 100.0;
  double radial_spacing = 20.0;     ///< distance between consecutive rows, m
  double azimuthal_spacing = 24.0;  ///< arc length between neighbors in a row, m
  double half_sector_deg = 75.0;    ///< rows span north +/- this angle
  double jitter = 0.5;              ///< max seeded position jitter per axis, m
  std::uint64_t seed = 20140209;
};

/// Deterministic layout of n heliostats with pairwise center distances above
/// the heliostat diagonal. Throws std::invalid_argument for infeasible spacing.
FieldLayout synthetic_field(std::size_t n, const RadialStagger& params = {});

struct EvaluateOptions {
  unsigned workers = 1;
  EfficiencyOptions efficiency;
};

struct FieldReport {
  SunState sun;
  std::vector<EfficiencyResult> results;  ///< layout order
  double average = 1.0;
  double seconds = 0.0;
};

/// Orients every heliostat once, then evaluates each against all others.
/// Results do not depend on the worker count.
FieldReport evaluate_field(const FieldLayout& layout, const SunState& sun, const EvaluateOptions& options = {});

/// Worker count from HELIO_WORKERS, else the hardware concurrency (at least 1).
unsigned default_workers();

/// Nine significant digits, as used in every report.
std::string format_real(double v);

struct ReportHeader {
  std::string date;  ///< free-form, e.g. "01-21 12:00"; "-" when unknown
  bool timing = true;
};

/// Header lines with the sun and date, then one `id efficiency area_reflecting
/// area_total` record per heliostat and a final `average <e>` line.
void write_report(std::ostream& out, const FieldReport& report, const ReportHeader& header);

}  // namespace helio
