#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "spincam/downwash.hpp"
#include "spincam/geometry.hpp"

namespace spincam {

/// Frame-level success: the detector reported as many neighbors as are
/// visible. Positions are not looked at.
inline bool success(std::size_t num_predictions, std::size_t num_ground_truth) {
  return num_predictions == num_ground_truth;
}

/// Stricter variant, not used for the replication outputs: equal counts and
/// every optimally matched pair closer than `radius`.
bool success_within(std::span<const Vec3> predictions, std::span<const Vec3> ground_truth, double radius);

struct AssignmentResult {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row, col), sorted by row
  double total_cost = 0.0;
  std::size_t unmatched_rows = 0;
  std::size_t unmatched_cols = 0;
};

/// Minimum-cost assignment of min(n, m) rows to distinct columns
/// (shortest augmenting path with potentials, O(n^2 m)).
AssignmentResult hungarian(const Eigen::MatrixXd& cost);

/// Distances of the optimally matched prediction/ground-truth pairs.
/// Throws CardinalityMismatch if the lists differ in length.
std::vector<double> position_errors(std::span<const Vec3> predictions, std::span<const Vec3> ground_truth);

struct ErrorDistribution {
  std::vector<double> samples;  // sorted
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;
};

/// Box-plot summary: quartiles by linear interpolation between order
/// statistics, whiskers at the most extreme samples within 1.5 IQR.
ErrorDistribution summarize_errors(std::vector<double> samples);

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  void add(bool truth, bool predicted);
};

ConfusionCounts confusion(std::span<const DownwashFrameResult> results);

struct ClassificationMetrics {
  double precision = 0.0;  // NaN when nothing was predicted positive
  double recall = 0.0;     // NaN when there are no positives
  double f1 = 0.0;
};

ClassificationMetrics classification_metrics(const ConfusionCounts& c);

}  // namespace spincam
