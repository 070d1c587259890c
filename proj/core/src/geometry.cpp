#include "spincam/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "spincam/camera.hpp"
#include "spincam/errors.hpp"

namespace spincam {

RigidTransform RigidTransform::from_matrix(const Mat4& m) {
  RigidTransform t;
  t.rotation = Quat(Mat3(m.topLeftCorner<3, 3>())).normalized();
  t.translation = m.topRightCorner<3, 1>();
  return t;
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform inv;
  inv.rotation = rotation.conjugate();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

Mat4 RigidTransform::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation.toRotationMatrix();
  m.topRightCorner<3, 1>() = translation;
  return m;
}

RigidTransform RigidTransform::operator*(const RigidTransform& rhs) const {
  RigidTransform out;
  out.rotation = (rotation * rhs.rotation).normalized();
  out.translation = rotation * rhs.translation + translation;
  return out;
}

Quat yaw_rotation(double yaw) { return Quat(Eigen::AngleAxisd(yaw, Vec3::UnitZ())); }

Quat rotation_from_vector(const Vec3& rotvec) {
  const double angle = rotvec.norm();
  if (angle < 1e-300) {
    return Quat::Identity();
  }
  return Quat(Eigen::AngleAxisd(angle, rotvec / angle));
}

Vec3 rotation_to_vector(const Quat& q) {
  Quat n = q.normalized();
  if (n.w() < 0.0) {
    n.coeffs() = -n.coeffs();
  }
  const double s = n.vec().norm();
  if (s < 1e-300) {
    return Vec3::Zero();
  }
  const double angle = 2.0 * std::atan2(s, n.w());
  return n.vec() / s * angle;
}

void validate_track(const PoseTrack& track) {
  double prev = -1.0;
  bool first = true;
  for (const Pose& p : track.samples) {
    if (!std::isfinite(p.timestamp) || p.timestamp < 0.0) {
      throw InvalidArgument("track " + track.robot_id + ": timestamp must be finite and non-negative");
    }
    if (!first && !(p.timestamp > prev)) {
      throw InvalidArgument("track " + track.robot_id + ": timestamps must be strictly increasing");
    }
    if (std::abs(p.orientation().norm() - 1.0) > 1e-9) {
      throw InvalidArgument("track " + track.robot_id + ": orientation is not a unit quaternion");
    }
    if (!p.position().allFinite()) {
      throw InvalidArgument("track " + track.robot_id + ": non-finite position");
    }
    prev = p.timestamp;
    first = false;
  }
}

Pose interpolate_pose(const PoseTrack& track, double t) {
  const auto& s = track.samples;
  if (s.size() < 2) {
    throw InvalidArgument("track " + track.robot_id + " needs at least two samples");
  }
  if (!(t >= s.front().timestamp && t <= s.back().timestamp)) {
    throw OutOfRange("time " + std::to_string(t) + " outside track " + track.robot_id + " span");
  }
  auto it = std::lower_bound(s.begin(), s.end(), t,
                             [](const Pose& p, double value) { return p.timestamp < value; });
  if (it->timestamp == t) {
    return *it;
  }
  const Pose& hi = *it;
  const Pose& lo = *(it - 1);
  const double alpha = (t - lo.timestamp) / (hi.timestamp - lo.timestamp);

  Pose out;
  out.timestamp = t;
  out.robot_to_world.translation = (1.0 - alpha) * lo.position() + alpha * hi.position();
  // Eigen's slerp already picks the shorter arc.
  out.robot_to_world.rotation = lo.orientation().slerp(alpha, hi.orientation()).normalized();
  return out;
}

RigidTransform relative_transform(const Pose& ego, const Pose& neighbor, const CameraModel& camera) {
  return camera.robot_to_camera * ego.robot_to_world.inverse() * neighbor.robot_to_world;
}

}  // namespace spincam
