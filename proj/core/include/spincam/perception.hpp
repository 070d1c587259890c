#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "spincam/annotation.hpp"
#include "spincam/camera.hpp"

namespace spincam {

struct BoxDetection {
  BoundingBox bbox;
  double confidence = 1.0;
};

struct GridShape {
  int rows = 28;
  int cols = 40;
};

/// Two-channel detector output over a coarse grid laid on the image:
/// per-cell confidence and depth (meters, only meaningful where confident).
struct GridDetectionMap {
  int rows = 0;
  int cols = 0;
  std::vector<double> confidence;  // row-major
  std::vector<double> depth;       // row-major

  static GridDetectionMap zeros(GridShape shape);

  double& conf(int i, int j) { return confidence[static_cast<std::size_t>(i) * cols + j]; }
  double conf(int i, int j) const { return confidence[static_cast<std::size_t>(i) * cols + j]; }
  double& dep(int i, int j) { return depth[static_cast<std::size_t>(i) * cols + j]; }
  double dep(int i, int j) const { return depth[static_cast<std::size_t>(i) * cols + j]; }

  void validate() const;
};

/// Cell (i, j) center maps to pixel ((j + 0.5) W / cols, (i + 0.5) H / rows).
ImagePoint grid_cell_center(int row, int col, GridShape shape, const CameraIntrinsics& intr);
/// Cell containing `pixel`, clamped to the grid.
std::pair<int, int> grid_cell_of(const ImagePoint& pixel, GridShape shape, const CameraIntrinsics& intr);

struct NoiseModel {
  double pixel_sigma = 1.0;
  double depth_rel_sigma = 0.1;
  double miss_rate = 0.1;
  double false_positive_rate = 0.05;  // expected false detections per frame
  double true_confidence_min = 0.6;
  double true_confidence_max = 1.0;
  double false_confidence_min = 0.5;
  double false_confidence_max = 0.8;
  double false_depth_min = 0.5;
  double false_depth_max = 4.0;
  std::uint64_t rng_seed = 0;

  static NoiseModel noiseless();
  void validate() const;
};

enum class EstimateSource { box_decoder, grid_decoder, oracle };

struct PositionEstimate {
  Vec3 position = Vec3::Zero();  // camera frame
  EstimateSource source = EstimateSource::oracle;
};

enum class DetectorMode { box, grid };

struct DetectorOutput {
  DetectorMode mode = DetectorMode::box;
  std::vector<BoxDetection> boxes;  // box mode
  GridDetectionMap grid;            // grid mode
};

/// Distance to the center of a sphere of radius r whose silhouette subtends
/// `alpha` radians: r / sin(alpha / 2). Throws DegenerateBox for alpha <= 0.
double subtense_distance(double alpha, double radius);

/// Position from the rays through the midpoints of the box's left and right
/// edges, assuming a spherical target of radius `radius`.
PositionEstimate decode_box(const BoxDetection& det, const CameraIntrinsics& intr, double radius);

/// One estimate per thresholded local maximum (8-connected; a plateau counts
/// once, reported at its first cell in row-major order).
std::vector<PositionEstimate> decode_grid(const GridDetectionMap& map, const CameraIntrinsics& intr,
                                          double threshold = 0.5);

/// Training-target style grid: confidence 1 and true depth in the cell of each
/// neighbor center. The nearer neighbor wins a shared cell.
GridDetectionMap encode_grid(const FrameAnnotation& annotation, const CameraIntrinsics& intr,
                             GridShape shape = {});

/// Stand-in for a trained detector. Deterministic in (noise.rng_seed,
/// annotation.frame_id).
DetectorOutput simulate_detector(const FrameAnnotation& annotation, const NoiseModel& noise,
                                 const CameraIntrinsics& intr, DetectorMode mode,
                                 const RobotGeometry& geometry, GridShape shape = {});

enum class PerceptionMode { oracle, omniscient, box, grid };

std::string_view to_string(PerceptionMode mode);
PerceptionMode parse_perception_mode(std::string_view text);

struct PerceptionConfig {
  PerceptionMode mode = PerceptionMode::oracle;
  NoiseModel noise;
  double threshold = 0.5;
  GridShape grid;
};

/// Frame annotation -> camera-frame estimates for the chosen mode. Oracle
/// passes the annotation through; box/grid simulate a detector and decode.
/// The omniscient mode needs world poses and is handled by the downwash
/// evaluation, here it behaves like oracle.
std::vector<PositionEstimate> run_perception(const FrameAnnotation& annotation,
                                             const CameraIntrinsics& intr,
                                             const PerceptionConfig& config,
                                             const RobotGeometry& geometry);

}  // namespace spincam
