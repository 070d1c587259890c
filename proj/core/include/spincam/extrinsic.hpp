#pragma once

#include <vector>

#include "spincam/annotation.hpp"
#include "spincam/camera.hpp"
#include "spincam/geometry.hpp"

namespace spincam {

/// Ground-truth neighbor pose paired with the center pixel observed for it.
struct CenterObservation {
  Pose neighbor;
  ImagePoint observed_center;
};

struct ExtrinsicFrame {
  Pose ego;
  std::vector<CenterObservation> observations;
};

struct AxisRange {
  double min = -0.15;
  double max = 0.15;
  double step = 0.01;

  std::size_t count() const;
  double value(std::size_t i) const { return min + static_cast<double>(i) * step; }
};

/// Cube of rotation-vector perturbations, one range per axis.
struct RotationGrid {
  AxisRange x;
  AxisRange y;
  AxisRange z;

  static RotationGrid cube(double half_range, double step) {
    AxisRange a{-half_range, half_range, step};
    return {a, a, a};
  }
};

struct ExtrinsicRefinement {
  RigidTransform robot_to_camera;
  Vec3 perturbation = Vec3::Zero();  // rotation vector applied in the camera frame
  double objective = 0.0;            // mean squared reprojection error, px^2
  std::size_t evaluated = 0;
};

/// The extrinsic obtained by applying `perturbation` (camera frame) to the
/// current robot_to_camera rotation; translation is kept.
RigidTransform perturb_extrinsic(const RigidTransform& robot_to_camera, const Vec3& perturbation);

/// Mean squared pixel distance between projected ground-truth centers and
/// observations. Points at or behind the image plane cost the squared image
/// diagonal. Throws NoObservations when there is nothing to compare.
double reprojection_objective(const std::vector<ExtrinsicFrame>& frames, const CameraModel& camera);

/// Exhaustive search over `grid` for the extrinsic rotation that best
/// explains the observed centers. Ties keep the first grid point in
/// x-major enumeration order.
ExtrinsicRefinement refine_extrinsic_rotation(const std::vector<ExtrinsicFrame>& frames,
                                              const CameraModel& camera,
                                              const RotationGrid& grid = RotationGrid::cube(0.15, 0.01));

}  // namespace spincam
