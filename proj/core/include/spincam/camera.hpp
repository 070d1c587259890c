#pragma once

#include <optional>
#include <string_view>

#include "spincam/geometry.hpp"

namespace spincam {

/// Pinhole intrinsics with a single radial distortion term applied to
/// normalized coordinates: x_d = x (1 + k1 |x|^2).
struct CameraIntrinsics {
  double fx = 180.0;
  double fy = 180.0;
  double cx = 160.0;
  double cy = 160.0;
  double k1 = 0.0;
  int width = 320;
  int height = 320;

  /// Throws InvalidArgument when the invariants do not hold.
  void validate() const;
};

enum class CameraPitch { forward, tilt45, up };

std::string_view to_string(CameraPitch pitch);
/// Accepts "forward", "tilt45" (or "45") and "up". Throws InvalidArgument.
CameraPitch parse_camera_pitch(std::string_view text);
/// Elevation of the optical axis above the body x-y plane in radians.
double pitch_angle(CameraPitch pitch);

struct CameraModel {
  CameraIntrinsics intrinsics;
  RigidTransform robot_to_camera;
  CameraPitch pitch = CameraPitch::forward;

  /// Camera rigidly mounted at the body origin looking along body +x and
  /// tilted upwards by the pitch angle. Camera axes follow the optical
  /// convention: z along the optical axis, x right, y down.
  static CameraModel mounted(const CameraIntrinsics& intrinsics, CameraPitch pitch);
};

struct ImagePoint {
  double u = 0.0;
  double v = 0.0;
};

struct BoundingBox {
  double u_min = 0.0;
  double v_min = 0.0;
  double u_max = 0.0;
  double v_max = 0.0;

  double width() const { return u_max - u_min; }
  double height() const { return v_max - v_min; }
  bool contains(const ImagePoint& p) const {
    return p.u >= u_min && p.u <= u_max && p.v >= v_min && p.v <= v_max;
  }
  BoundingBox clipped(double width, double height) const;
};

inline constexpr int kUndistortMaxIterations = 10;
inline constexpr double kUndistortTolerance = 1e-10;

Eigen::Vector2d distort_normalized(const Eigen::Vector2d& undistorted, double k1);
/// Inverts distort_normalized by Newton iteration on the radius.
Eigen::Vector2d undistort_normalized(const Eigen::Vector2d& distorted, double k1);

/// Pixel coordinates of a camera-frame point. Throws NonPositiveDepth if z <= 0.
ImagePoint project(const Vec3& point_camera, const CameraIntrinsics& intr);

/// Camera-frame point on the ray through `pixel` at depth z.
/// Throws NonPositiveDepth if depth_z <= 0.
Vec3 back_project(const ImagePoint& pixel, double depth_z, const CameraIntrinsics& intr);

/// Undistorted viewing ray (x, y, 1) through `pixel`.
Vec3 pixel_ray(const ImagePoint& pixel, const CameraIntrinsics& intr);

/// Strictly inside the image rectangle (0, width) x (0, height).
bool inside_image(const ImagePoint& p, const CameraIntrinsics& intr);

/// Pixel of a camera-frame point when it has positive depth and lands
/// strictly inside the image, otherwise nullopt.
std::optional<ImagePoint> project_if_visible(const Vec3& point_camera, const CameraIntrinsics& intr);

}  // namespace spincam
