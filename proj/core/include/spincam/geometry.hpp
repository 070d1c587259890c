#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <span>
#include <string>
#include <vector>

namespace spincam {

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Rigid transform x' = R x + t. The name of a transform follows the
/// "source to target" convention, e.g. robot_to_world maps robot-frame
/// coordinates to world coordinates.
struct RigidTransform {
  Quat rotation = Quat::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }
  static RigidTransform from_matrix(const Mat4& m);

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  RigidTransform inverse() const;
  Mat4 matrix() const;

  /// Composition (*this) ∘ rhs: applies rhs first.
  RigidTransform operator*(const RigidTransform& rhs) const;
};

/// Rotation about world z by `yaw` radians.
Quat yaw_rotation(double yaw);

/// Rotation whose axis-angle vector is `rotvec` (exponential map).
Quat rotation_from_vector(const Vec3& rotvec);

/// Inverse of rotation_from_vector, angle in [0, pi].
Vec3 rotation_to_vector(const Quat& q);

struct Pose {
  double timestamp = 0.0;
  RigidTransform robot_to_world;

  const Vec3& position() const { return robot_to_world.translation; }
  const Quat& orientation() const { return robot_to_world.rotation; }
};

struct PoseTrack {
  std::string robot_id;
  std::vector<Pose> samples;

  double start_time() const { return samples.front().timestamp; }
  double end_time() const { return samples.back().timestamp; }
};

/// Throws InvalidArgument unless timestamps are finite, non-negative and
/// strictly increasing and orientations are unit quaternions.
void validate_track(const PoseTrack& track);

/// Pose at time `t`: position is interpolated linearly, orientation along the
/// shortest great-circle arc. Throws OutOfRange outside the track span.
Pose interpolate_pose(const PoseTrack& track, double t);

struct CameraModel;

/// Transform from the neighbor's body frame into the ego camera frame:
/// robot_to_camera * ego^-1 * neighbor.
RigidTransform relative_transform(const Pose& ego, const Pose& neighbor,
                                  const CameraModel& camera);

}  // namespace spincam
