#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "helio/shading.hpp"

namespace helio {

enum class SamplingMode {
  Grid,        ///< cell centers of a regular grid
  Stratified,  ///< one seeded uniform point per grid cell
};

enum class OcclusionTest {
  /// Membership in the same projected quads the clipping engine receives
  /// (before culling). Checks clipping, culling and overlap handling.
  ProjectedQuads,
  /// Direct 3D rays from each sample toward the sun and the aim point,
  /// tested against every neighbor rectangle. Also checks the projections.
  DirectRays,
};

struct OracleConfig {
  std::size_t samples_per_axis = 1000;  ///< total samples = samples_per_axis^2
  SamplingMode mode = SamplingMode::Stratified;
  OcclusionTest test = OcclusionTest::ProjectedQuads;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  std::size_t samples() const { return samples_per_axis * samples_per_axis; }
};

/// Minimum sample count accepted for validation runs.
inline constexpr std::size_t kMinOracleSamples = 10'000;

struct OracleEstimate {
  double estimate = 1.0;
  double standard_error = 0.0;  ///< sqrt(p (1 - p) / n) for stratified sampling, 0 for the grid
  std::size_t samples = 0;
};

/// Fraction of sample points on the subject that no neighbor shadows or
/// blocks. Deterministic for a given config, independent of `workers`.
/// Throws std::invalid_argument when cfg.samples() < kMinOracleSamples.
OracleEstimate sample_efficiency(const OrientedHeliostat& subject, std::span<const OrientedHeliostat> field,
                                 const SunState& sun, const OracleConfig& cfg = {});

/// Same estimate against an explicit quad list in the subject's frame.
OracleEstimate sample_efficiency(const OrientedHeliostat& subject, std::span<const ProjectedQuad> quads,
                                 const OracleConfig& cfg);

/// Every block and shadow quad of the field on the subject, without culling,
/// in subtraction order.
std::vector<ProjectedQuad> projected_quads(const OrientedHeliostat& subject, std::span<const OrientedHeliostat> field,
                                           const SunState& sun);

struct OracleComparison {
  double clipping = 1.0;
  OracleEstimate oracle;
  double discrepancy = 0.0;
  double allowance = 0.0;  ///< max(0.002, 4 * standard error)
  bool pass = true;
};

/// Pass/fail threshold between the clipping value and the oracle estimate.
inline double oracle_allowance(double standard_error) { return std::max(0.002, 4.0 * standard_error); }

/// Clipping efficiency vs. oracle estimate. With `corrupt_first_quad`, the
/// clipping side subtracts its first quad displaced by half the subject
/// width (a negative control that must fail).
OracleComparison oracle_check(const OrientedHeliostat& subject, std::span<const OrientedHeliostat> field,
                              const SunState& sun, const OracleConfig& cfg, bool corrupt_first_quad = false);

}  // namespace helio
