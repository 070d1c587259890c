#include "spincam/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "spincam/errors.hpp"

namespace spincam {

namespace {

Eigen::MatrixXd distance_matrix(std::span<const Vec3> a, std::span<const Vec3> b) {
  Eigen::MatrixXd cost(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (a[i] - b[j]).norm();
    }
  }
  return cost;
}

// Requires rows <= cols. Returns the column assigned to each row.
std::vector<std::size_t> solve_wide(const Eigen::MatrixXd& cost) {
  const auto n = static_cast<std::size_t>(cost.rows());
  const auto m = static_cast<std::size_t>(cost.cols());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is a virtual source.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (match[j] != 0) {
      row_to_col[match[j] - 1] = j - 1;
    }
  }
  return row_to_col;
}

double quantile_sorted(const std::vector<double>& s, double q) {
  const double pos = q * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, s.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return s[lo] + frac * (s[hi] - s[lo]);
}

}  // namespace

AssignmentResult hungarian(const Eigen::MatrixXd& cost) {
  if (!cost.allFinite()) {
    throw InvalidArgument("assignment costs must be finite");
  }
  AssignmentResult result;
  const auto n = static_cast<std::size_t>(cost.rows());
  const auto m = static_cast<std::size_t>(cost.cols());
  if (n == 0 || m == 0) {
    result.unmatched_rows = n;
    result.unmatched_cols = m;
    return result;
  }
  if (n <= m) {
    const auto cols = solve_wide(cost);
    for (std::size_t i = 0; i < n; ++i) {
      result.pairs.emplace_back(i, cols[i]);
    }
  } else {
    const Eigen::MatrixXd transposed = cost.transpose();
    const auto rows = solve_wide(transposed);
    for (std::size_t j = 0; j < m; ++j) {
      result.pairs.emplace_back(rows[j], j);
    }
    std::sort(result.pairs.begin(), result.pairs.end());
  }
  for (const auto& [i, j] : result.pairs) {
    result.total_cost += cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  result.unmatched_rows = n - result.pairs.size();
  result.unmatched_cols = m - result.pairs.size();
  return result;
}

std::vector<double> position_errors(std::span<const Vec3> predictions, std::span<const Vec3> ground_truth) {
  if (predictions.size() != ground_truth.size()) {
    throw CardinalityMismatch("got " + std::to_string(predictions.size()) + " predictions for " +
                              std::to_string(ground_truth.size()) + " ground-truth positions");
  }
  const Eigen::MatrixXd cost = distance_matrix(predictions, ground_truth);
  const AssignmentResult a = hungarian(cost);
  std::vector<double> out;
  out.reserve(a.pairs.size());
  for (const auto& [i, j] : a.pairs) {
    out.push_back(cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  }
  return out;
}

bool success_within(std::span<const Vec3> predictions, std::span<const Vec3> ground_truth, double radius) {
  if (!success(predictions.size(), ground_truth.size())) {
    return false;
  }
  const auto errors = position_errors(predictions, ground_truth);
  return std::all_of(errors.begin(), errors.end(), [&](double e) { return e <= radius; });
}

ErrorDistribution summarize_errors(std::vector<double> samples) {
  ErrorDistribution d;
  std::sort(samples.begin(), samples.end());
  d.samples = std::move(samples);
  if (d.samples.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    d.mean = d.median = d.q1 = d.q3 = d.whisker_low = d.whisker_high = nan;
    return d;
  }
  const auto& s = d.samples;
  d.mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  d.q1 = quantile_sorted(s, 0.25);
  d.median = quantile_sorted(s, 0.5);
  d.q3 = quantile_sorted(s, 0.75);
  const double iqr = d.q3 - d.q1;
  const double lo_fence = d.q1 - 1.5 * iqr;
  const double hi_fence = d.q3 + 1.5 * iqr;
  d.whisker_low = *std::find_if(s.begin(), s.end(), [&](double x) { return x >= lo_fence; });
  d.whisker_high = *std::find_if(s.rbegin(), s.rend(), [&](double x) { return x <= hi_fence; });
  for (double x : s) {
    if (x < lo_fence || x > hi_fence) {
      d.outliers.push_back(x);
    }
  }
  return d;
}

void ConfusionCounts::add(bool truth, bool predicted) {
  if (truth && predicted) {
    ++tp;
  } else if (!truth && predicted) {
    ++fp;
  } else if (truth && !predicted) {
    ++fn;
  } else {
    ++tn;
  }
}

ConfusionCounts confusion(std::span<const DownwashFrameResult> results) {
  ConfusionCounts c;
  for (const auto& r : results) {
    c.add(r.gt_downwash, r.pred_downwash);
  }
  return c;
}

ClassificationMetrics classification_metrics(const ConfusionCounts& c) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ClassificationMetrics m;
  const auto tp = static_cast<double>(c.tp);
  m.precision = (c.tp + c.fp) == 0 ? nan : tp / static_cast<double>(c.tp + c.fp);
  m.recall = (c.tp + c.fn) == 0 ? nan : tp / static_cast<double>(c.tp + c.fn);
  if (c.tp == 0) {
    m.f1 = 0.0;
  } else {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

}  // namespace spincam
