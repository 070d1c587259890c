#include "spincam/annotation.hpp"

#include <algorithm>
#include <limits>

#include "spincam/errors.hpp"

namespace spincam {

void RobotGeometry::validate() const {
  if (!(half_extents.minCoeff() > 0.0) || !(sphere_radius > 0.0)) {
    throw InvalidArgument("robot geometry must be positive");
  }
}

std::array<Vec3, 8> RobotGeometry::corners() const {
  std::array<Vec3, 8> out;
  for (int i = 0; i < 8; ++i) {
    out[i] = Vec3((i & 1) ? half_extents.x() : -half_extents.x(),
                  (i & 2) ? half_extents.y() : -half_extents.y(),
                  (i & 4) ? half_extents.z() : -half_extents.z());
  }
  return out;
}

BoundingBox bbox_from_corners(std::span<const Vec3> corners_camera, const CameraIntrinsics& intr) {
  const double w = intr.width;
  const double h = intr.height;
  if (corners_camera.empty()) {
    return BoundingBox{};
  }
  BoundingBox box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Vec3& c : corners_camera) {
    if (!(c.z() > 0.0)) {
      return BoundingBox{0.0, 0.0, w, h};
    }
    const ImagePoint p = project(c, intr);
    box.u_min = std::min(box.u_min, p.u);
    box.v_min = std::min(box.v_min, p.v);
    box.u_max = std::max(box.u_max, p.u);
    box.v_max = std::max(box.v_max, p.v);
  }
  return box.clipped(w, h);
}

FrameAnnotation annotate_frame(const Pose& ego, std::span<const RobotPose> neighbors,
                               const CameraModel& camera, const RobotGeometry& geometry,
                               std::uint64_t frame_id, const std::string& ego_id) {
  FrameAnnotation out;
  out.frame_id = frame_id;
  out.timestamp = ego.timestamp;
  out.ego_id = ego_id;

  const auto corners = geometry.corners();
  for (const RobotPose& n : neighbors) {
    const RigidTransform to_camera = relative_transform(ego, n.pose, camera);
    const Vec3 origin = to_camera.translation;
    const auto center = project_if_visible(origin, camera.intrinsics);
    if (!center) {
      continue;
    }
    std::array<Vec3, 8> corners_camera;
    for (std::size_t i = 0; i < corners.size(); ++i) {
      corners_camera[i] = to_camera.apply(corners[i]);
    }
    out.neighbors.push_back(NeighborAnnotation{
        n.robot_id, origin, *center, bbox_from_corners(corners_camera, camera.intrinsics)});
  }
  return out;
}

}  // namespace spincam
