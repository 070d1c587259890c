#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spincam/camera.hpp"
#include "spincam/geometry.hpp"

namespace spincam {

/// Physical size of a robot: a box with the given half extents (used for
/// bounding-box annotation) and the sphere radius assumed by the
/// box-based distance decoder.
struct RobotGeometry {
  Vec3 half_extents{0.065, 0.065, 0.02};
  double sphere_radius = 0.065;

  void validate() const;
  /// The eight box corners in the robot frame.
  std::array<Vec3, 8> corners() const;
};

struct NeighborAnnotation {
  std::string robot_id;
  Vec3 rel_position = Vec3::Zero();  // camera frame
  ImagePoint center;
  BoundingBox bbox;
};

struct FrameAnnotation {
  std::uint64_t frame_id = 0;
  double timestamp = 0.0;
  std::string ego_id;
  std::vector<NeighborAnnotation> neighbors;
};

struct RobotPose {
  std::string robot_id;
  Pose pose;
};

/// Min/max of the projected corners. A corner at or behind the camera plane
/// makes the projection unbounded, so the box then spans the whole image.
/// The result is clipped to the image.
BoundingBox bbox_from_corners(std::span<const Vec3> corners_camera, const CameraIntrinsics& intr);

/// Ground truth for one frame seen from `ego`. Neighbors whose origin lies
/// behind the camera or projects outside the image are left out.
FrameAnnotation annotate_frame(const Pose& ego, std::span<const RobotPose> neighbors,
                               const CameraModel& camera, const RobotGeometry& geometry,
                               std::uint64_t frame_id = 0, const std::string& ego_id = {});

}  // namespace spincam
