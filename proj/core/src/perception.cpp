#include "spincam/perception.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "spincam/errors.hpp"

namespace spincam {

GridDetectionMap GridDetectionMap::zeros(GridShape shape) {
  if (shape.rows <= 0 || shape.cols <= 0) {
    throw InvalidArgument("grid dimensions must be positive");
  }
  GridDetectionMap m;
  m.rows = shape.rows;
  m.cols = shape.cols;
  const auto n = static_cast<std::size_t>(shape.rows) * static_cast<std::size_t>(shape.cols);
  m.confidence.assign(n, 0.0);
  m.depth.assign(n, 0.0);
  return m;
}

void GridDetectionMap::validate() const {
  const auto n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (rows <= 0 || cols <= 0 || confidence.size() != n || depth.size() != n) {
    throw InvalidArgument("grid detection map has inconsistent dimensions");
  }
  for (double c : confidence) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw InvalidArgument("grid confidence outside [0, 1]");
    }
  }
}

ImagePoint grid_cell_center(int row, int col, GridShape shape, const CameraIntrinsics& intr) {
  return {(col + 0.5) * intr.width / shape.cols, (row + 0.5) * intr.height / shape.rows};
}

std::pair<int, int> grid_cell_of(const ImagePoint& pixel, GridShape shape, const CameraIntrinsics& intr) {
  const int col = static_cast<int>(std::floor(pixel.u * shape.cols / intr.width));
  const int row = static_cast<int>(std::floor(pixel.v * shape.rows / intr.height));
  return {std::clamp(row, 0, shape.rows - 1), std::clamp(col, 0, shape.cols - 1)};
}

NoiseModel NoiseModel::noiseless() {
  NoiseModel n;
  n.pixel_sigma = 0.0;
  n.depth_rel_sigma = 0.0;
  n.miss_rate = 0.0;
  n.false_positive_rate = 0.0;
  n.true_confidence_min = 1.0;
  n.true_confidence_max = 1.0;
  return n;
}

void NoiseModel::validate() const {
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!(pixel_sigma >= 0.0) || !(depth_rel_sigma >= 0.0)) {
    throw InvalidArgument("noise sigmas must be non-negative");
  }
  if (!in_unit(miss_rate) || !(false_positive_rate >= 0.0)) {
    throw InvalidArgument("noise rates out of range");
  }
  if (!in_unit(true_confidence_min) || !in_unit(true_confidence_max) ||
      true_confidence_min > true_confidence_max || !in_unit(false_confidence_min) ||
      !in_unit(false_confidence_max) || false_confidence_min > false_confidence_max) {
    throw InvalidArgument("confidence ranges must be ordered sub-ranges of [0, 1]");
  }
  if (!(false_depth_min > 0.0) || false_depth_min > false_depth_max) {
    throw InvalidArgument("false detection depth range must be positive and ordered");
  }
}

double subtense_distance(double alpha, double radius) {
  if (!(alpha > 0.0)) {
    throw DegenerateBox();
  }
  return radius / std::sin(alpha / 2.0);
}

PositionEstimate decode_box(const BoxDetection& det, const CameraIntrinsics& intr, double radius) {
  if (!(det.bbox.width() > 0.0)) {
    throw DegenerateBox();
  }
  const double v_mid = 0.5 * (det.bbox.v_min + det.bbox.v_max);
  const Vec3 a1 = pixel_ray({det.bbox.u_min, v_mid}, intr).normalized();
  const Vec3 a2 = pixel_ray({det.bbox.u_max, v_mid}, intr).normalized();
  const double alpha = std::atan2(a1.cross(a2).norm(), a1.dot(a2));
  const double d = subtense_distance(alpha, radius);
  const Vec3 ac = 0.5 * (a1 + a2);
  return {d * ac.normalized(), EstimateSource::box_decoder};
}

std::vector<PositionEstimate> decode_grid(const GridDetectionMap& map, const CameraIntrinsics& intr,
                                          double threshold) {
  map.validate();
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw InvalidArgument("grid threshold must lie in (0, 1)");
  }
  const GridShape shape{map.rows, map.cols};
  std::vector<PositionEstimate> out;
  std::vector<char> visited(map.confidence.size(), 0);
  std::vector<std::pair<int, int>> stack;
  std::vector<std::pair<int, int>> plateau;

  for (int i = 0; i < map.rows; ++i) {
    for (int j = 0; j < map.cols; ++j) {
      const double value = map.conf(i, j);
      if (value < threshold || visited[static_cast<std::size_t>(i) * map.cols + j]) {
        continue;
      }
      // Flood the plateau of equal values; it is a maximum if no
      // 8-neighbor outside it is larger.
      bool is_max = true;
      plateau.clear();
      stack.assign(1, {i, j});
      visited[static_cast<std::size_t>(i) * map.cols + j] = 1;
      while (!stack.empty()) {
        const auto [ci, cj] = stack.back();
        stack.pop_back();
        plateau.emplace_back(ci, cj);
        for (int di = -1; di <= 1; ++di) {
          for (int dj = -1; dj <= 1; ++dj) {
            const int ni = ci + di;
            const int nj = cj + dj;
            if ((di == 0 && dj == 0) || ni < 0 || nj < 0 || ni >= map.rows || nj >= map.cols) {
              continue;
            }
            const double nv = map.conf(ni, nj);
            if (nv > value) {
              is_max = false;
            } else if (nv == value) {
              auto& seen = visited[static_cast<std::size_t>(ni) * map.cols + nj];
              if (!seen) {
                seen = 1;
                stack.emplace_back(ni, nj);
              }
            }
          }
        }
      }
      if (!is_max) {
        continue;
      }
      const auto [pi, pj] = *std::min_element(plateau.begin(), plateau.end());
      const double z = map.dep(pi, pj);
      if (!(z > 0.0)) {
        continue;
      }
      out.push_back({back_project(grid_cell_center(pi, pj, shape, intr), z, intr),
                     EstimateSource::grid_decoder});
    }
  }
  return out;
}

GridDetectionMap encode_grid(const FrameAnnotation& annotation, const CameraIntrinsics& intr,
                             GridShape shape) {
  GridDetectionMap map = GridDetectionMap::zeros(shape);
  for (const auto& n : annotation.neighbors) {
    const auto [i, j] = grid_cell_of(n.center, shape, intr);
    const double z = n.rel_position.z();
    if (map.conf(i, j) == 0.0 || z < map.dep(i, j)) {
      map.conf(i, j) = 1.0;
      map.dep(i, j) = z;
    }
  }
  return map;
}

namespace {

std::mt19937_64 frame_rng(std::uint64_t seed, std::uint64_t frame_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(frame_id), static_cast<std::uint32_t>(frame_id >> 32)};
  return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  if (lo == hi) {
    return lo;
  }
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double gaussian(std::mt19937_64& rng, double sigma) {
  if (sigma == 0.0) {
    return 0.0;
  }
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

bool bernoulli(std::mt19937_64& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::bernoulli_distribution(p)(rng);
}

}  // namespace

DetectorOutput simulate_detector(const FrameAnnotation& annotation, const NoiseModel& noise,
                                 const CameraIntrinsics& intr, DetectorMode mode,
                                 const RobotGeometry& geometry, GridShape shape) {
  noise.validate();
  auto rng = frame_rng(noise.rng_seed, annotation.frame_id);
  const double w = intr.width;
  const double h = intr.height;

  DetectorOutput out;
  out.mode = mode;
  if (mode == DetectorMode::grid) {
    out.grid = GridDetectionMap::zeros(shape);
  }

  auto place_cell = [&](const ImagePoint& pixel, double depth, double confidence) {
    const auto [i, j] = grid_cell_of(pixel, shape, intr);
    if (out.grid.conf(i, j) == 0.0 || depth < out.grid.dep(i, j)) {
      out.grid.conf(i, j) = confidence;
      out.grid.dep(i, j) = depth;
    }
  };

  for (const auto& n : annotation.neighbors) {
    if (bernoulli(rng, noise.miss_rate)) {
      continue;
    }
    const double confidence = uniform(rng, noise.true_confidence_min, noise.true_confidence_max);
    if (mode == DetectorMode::box) {
      BoundingBox b = n.bbox;
      b.u_min += gaussian(rng, noise.pixel_sigma);
      b.v_min += gaussian(rng, noise.pixel_sigma);
      b.u_max += gaussian(rng, noise.pixel_sigma);
      b.v_max += gaussian(rng, noise.pixel_sigma);
      if (b.u_min > b.u_max) std::swap(b.u_min, b.u_max);
      if (b.v_min > b.v_max) std::swap(b.v_min, b.v_max);
      b = b.clipped(w, h);
      if (b.width() > 0.0 && b.height() > 0.0) {
        out.boxes.push_back({b, confidence});
      }
    } else {
      const ImagePoint c{n.center.u + gaussian(rng, noise.pixel_sigma),
                         n.center.v + gaussian(rng, noise.pixel_sigma)};
      const double z = n.rel_position.z();
      const double depth = std::max(z * (1.0 + gaussian(rng, noise.depth_rel_sigma)), 1e-3 * z);
      if (inside_image(c, intr)) {
        place_cell(c, depth, confidence);
      }
    }
  }

  std::uint64_t false_count = 0;
  if (noise.false_positive_rate > 0.0) {
    false_count = std::poisson_distribution<std::uint64_t>(noise.false_positive_rate)(rng);
  }
  const double aspect = geometry.half_extents.z() / geometry.half_extents.x();
  for (std::uint64_t k = 0; k < false_count; ++k) {
    const ImagePoint c{uniform(rng, 0.0, w), uniform(rng, 0.0, h)};
    const double depth = uniform(rng, noise.false_depth_min, noise.false_depth_max);
    const double confidence = uniform(rng, noise.false_confidence_min, noise.false_confidence_max);
    if (mode == DetectorMode::box) {
      const double half_w = intr.fx * geometry.sphere_radius / depth;
      const double half_h = half_w * aspect;
      const BoundingBox b =
          BoundingBox{c.u - half_w, c.v - half_h, c.u + half_w, c.v + half_h}.clipped(w, h);
      if (b.width() > 0.0 && b.height() > 0.0) {
        out.boxes.push_back({b, confidence});
      }
    } else {
      place_cell(c, depth, confidence);
    }
  }
  return out;
}

std::string_view to_string(PerceptionMode mode) {
  switch (mode) {
    case PerceptionMode::oracle:
      return "oracle";
    case PerceptionMode::omniscient:
      return "omniscient";
    case PerceptionMode::box:
      return "box";
    case PerceptionMode::grid:
      return "grid";
  }
  return "oracle";
}

PerceptionMode parse_perception_mode(std::string_view text) {
  if (text == "oracle") return PerceptionMode::oracle;
  if (text == "omniscient") return PerceptionMode::omniscient;
  if (text == "box") return PerceptionMode::box;
  if (text == "grid") return PerceptionMode::grid;
  throw InvalidArgument("unknown perception mode '" + std::string(text) + "'");
}

std::vector<PositionEstimate> run_perception(const FrameAnnotation& annotation,
                                             const CameraIntrinsics& intr,
                                             const PerceptionConfig& config,
                                             const RobotGeometry& geometry) {
  std::vector<PositionEstimate> out;
  switch (config.mode) {
    case PerceptionMode::oracle:
    case PerceptionMode::omniscient:
      for (const auto& n : annotation.neighbors) {
        out.push_back({n.rel_position, EstimateSource::oracle});
      }
      break;
    case PerceptionMode::box: {
      const auto det = simulate_detector(annotation, config.noise, intr, DetectorMode::box, geometry,
                                         config.grid);
      for (const auto& b : det.boxes) {
        if (b.confidence < config.threshold) {
          continue;
        }
        try {
          out.push_back(decode_box(b, intr, geometry.sphere_radius));
        } catch (const DegenerateBox&) {
        }
      }
      break;
    }
    case PerceptionMode::grid: {
      const auto det = simulate_detector(annotation, config.noise, intr, DetectorMode::grid, geometry,
                                         config.grid);
      out = decode_grid(det.grid, intr, config.threshold);
      break;
    }
  }
  return out;
}

}  // namespace spincam
