#include "spincam/camera.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spincam/errors.hpp"

namespace spincam {

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw InvalidArgument("focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw InvalidArgument("image size must be positive");
  }
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height)) {
    throw InvalidArgument("principal point must lie inside the image");
  }
  if (!std::isfinite(k1)) {
    throw InvalidArgument("distortion coefficient must be finite");
  }
}

std::string_view to_string(CameraPitch pitch) {
  switch (pitch) {
    case CameraPitch::forward:
      return "forward";
    case CameraPitch::tilt45:
      return "tilt45";
    case CameraPitch::up:
      return "up";
  }
  return "forward";
}

CameraPitch parse_camera_pitch(std::string_view text) {
  if (text == "forward") return CameraPitch::forward;
  if (text == "tilt45" || text == "45") return CameraPitch::tilt45;
  if (text == "up") return CameraPitch::up;
  throw InvalidArgument("unknown camera pitch '" + std::string(text) + "'");
}

double pitch_angle(CameraPitch pitch) {
  switch (pitch) {
    case CameraPitch::forward:
      return 0.0;
    case CameraPitch::tilt45:
      return std::numbers::pi / 4.0;
    case CameraPitch::up:
      return std::numbers::pi / 2.0;
  }
  return 0.0;
}

CameraModel CameraModel::mounted(const CameraIntrinsics& intrinsics, CameraPitch pitch) {
  const double theta = pitch_angle(pitch);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  // Rows are the camera axes expressed in the body frame.
  Mat3 camera_from_body;
  camera_from_body.row(0) << 0.0, -1.0, 0.0;
  camera_from_body.row(1) << s, 0.0, -c;
  camera_from_body.row(2) << c, 0.0, s;

  CameraModel model;
  model.intrinsics = intrinsics;
  model.pitch = pitch;
  model.robot_to_camera.rotation = Quat(camera_from_body).normalized();
  model.robot_to_camera.translation = Vec3::Zero();
  return model;
}

BoundingBox BoundingBox::clipped(double w, double h) const {
  BoundingBox b;
  b.u_min = std::clamp(u_min, 0.0, w);
  b.u_max = std::clamp(u_max, 0.0, w);
  b.v_min = std::clamp(v_min, 0.0, h);
  b.v_max = std::clamp(v_max, 0.0, h);
  return b;
}

Eigen::Vector2d distort_normalized(const Eigen::Vector2d& undistorted, double k1) {
  return undistorted * (1.0 + k1 * undistorted.squaredNorm());
}

Eigen::Vector2d undistort_normalized(const Eigen::Vector2d& distorted, double k1) {
  const double rd = distorted.norm();
  if (k1 == 0.0 || rd == 0.0) {
    return distorted;
  }
  // Solve r (1 + k1 r^2) = rd for the undistorted radius r.
  double r = rd;
  for (int i = 0; i < kUndistortMaxIterations; ++i) {
    const double g = r * (1.0 + k1 * r * r) - rd;
    const double dg = 1.0 + 3.0 * k1 * r * r;
    if (dg <= 0.0) {
      break;  // past the fold of the distortion curve
    }
    const double step = g / dg;
    r -= step;
    if (std::abs(step) < kUndistortTolerance * std::max(1.0, r)) {
      break;
    }
  }
  return distorted * (r / rd);
}

ImagePoint project(const Vec3& point_camera, const CameraIntrinsics& intr) {
  if (!(point_camera.z() > 0.0)) {
    throw NonPositiveDepth();
  }
  const Eigen::Vector2d normalized(point_camera.x() / point_camera.z(),
                                   point_camera.y() / point_camera.z());
  const Eigen::Vector2d d = distort_normalized(normalized, intr.k1);
  return {intr.fx * d.x() + intr.cx, intr.fy * d.y() + intr.cy};
}

Vec3 pixel_ray(const ImagePoint& pixel, const CameraIntrinsics& intr) {
  const Eigen::Vector2d distorted((pixel.u - intr.cx) / intr.fx, (pixel.v - intr.cy) / intr.fy);
  const Eigen::Vector2d n = undistort_normalized(distorted, intr.k1);
  return {n.x(), n.y(), 1.0};
}

Vec3 back_project(const ImagePoint& pixel, double depth_z, const CameraIntrinsics& intr) {
  if (!(depth_z > 0.0)) {
    throw NonPositiveDepth();
  }
  return depth_z * pixel_ray(pixel, intr);
}

bool inside_image(const ImagePoint& p, const CameraIntrinsics& intr) {
  return p.u > 0.0 && p.u < intr.width && p.v > 0.0 && p.v < intr.height;
}

std::optional<ImagePoint> project_if_visible(const Vec3& point_camera, const CameraIntrinsics& intr) {
  if (!(point_camera.z() > 0.0)) {
    return std::nullopt;
  }
  const ImagePoint p = project(point_camera, intr);
  if (!inside_image(p, intr)) {
    return std::nullopt;
  }
  return p;
}

}  // namespace spincam
