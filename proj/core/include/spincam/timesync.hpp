#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "spincam/geometry.hpp"

namespace spincam {

struct GyroSequence {
  std::vector<double> t;     // seconds, strictly increasing
  std::vector<Vec3> rate;    // rad/s

  std::size_t size() const { return t.size(); }
  void validate() const;
  /// Median sample spacing.
  double sample_period() const;
  /// Linear interpolation; `t_query` must lie inside the span.
  Vec3 at(double t_query) const;
};

struct TimeOffset {
  double offset = 0.0;          // b(t + offset) best matches a(t)
  double grid_offset = 0.0;     // discrete minimum before refinement
  double cost = 0.0;            // mean squared difference at grid_offset
  double step = 0.0;            // search resolution
};

/// Searches offsets in [-window, window] on a grid of one sample period of
/// `a`, scoring the mean squared difference between a(t) and b(t + offset)
/// over their overlap, then refines with a parabola through the minimum and
/// its neighbors. Offsets whose overlap covers less than half of `a` are not
/// considered. Throws InsufficientOverlap when none is left.
TimeOffset estimate_time_offset(const GyroSequence& a, const GyroSequence& b, double window);

/// CSV with header `t,wx,wy,wz`.
GyroSequence read_gyro_csv(std::istream& in);
GyroSequence read_gyro_csv(const std::filesystem::path& path);
void write_gyro_csv(const GyroSequence& seq, std::ostream& out);

}  // namespace spincam
