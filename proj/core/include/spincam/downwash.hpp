#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "spincam/annotation.hpp"
#include "spincam/camera.hpp"
#include "spincam/geometry.hpp"
#include "spincam/perception.hpp"

namespace spincam {

/// Axis-aligned safety ellipsoid radii in meters.
struct EllipsoidSpec {
  double rx = 0.15;
  double ry = 0.15;
  double rz = 0.3;

  void validate() const;
};

/// ||E^-1 (p_i - p_j)||. Two robots are safe while the margin is >= 2.
double ellipsoid_margin(const Vec3& p_i, const Vec3& p_j, const EllipsoidSpec& e);

inline bool in_downwash(const Vec3& p_i, const Vec3& p_j, const EllipsoidSpec& e) {
  return ellipsoid_margin(p_i, p_j, e) < 2.0;
}

inline constexpr double kBeliefMergeRadius = 0.1;

struct Belief {
  Vec3 position = Vec3::Zero();  // world frame
  double born_at = 0.0;
};

struct BeliefSet {
  std::vector<Belief> beliefs;

  bool empty() const { return beliefs.empty(); }
  std::size_t size() const { return beliefs.size(); }
};

/// True when a world point would be observed in the current image.
using VisibilityTest = std::function<bool(const Vec3& world)>;

/// One tracker step: drop beliefs that reproject into the current view,
/// drop remaining beliefs within `merge_radius` of a new prediction, then add
/// every prediction (camera frame, mapped to world with `camera_to_world`).
BeliefSet update_belief(const BeliefSet& beliefs, double timestamp,
                        const RigidTransform& camera_to_world, const VisibilityTest& visible,
                        std::span<const PositionEstimate> predictions,
                        double merge_radius = kBeliefMergeRadius);

/// Same step for a pinhole camera carried by `ego`.
BeliefSet update_belief(const BeliefSet& beliefs, const Pose& ego, const CameraModel& camera,
                        std::span<const PositionEstimate> predictions,
                        double merge_radius = kBeliefMergeRadius);

bool predict_downwash(const BeliefSet& beliefs, const Vec3& ego_position, const EllipsoidSpec& e);

struct DownwashFrameResult {
  std::uint64_t frame_id = 0;
  double timestamp = 0.0;
  bool gt_downwash = false;
  bool pred_downwash = false;
};

/// Everything the evaluation needs about one camera frame.
struct EvalFrame {
  std::uint64_t frame_id = 0;
  Pose ego;
  std::vector<RobotPose> others;  // world poses of every other robot
  FrameAnnotation annotation;
};

/// Runs the belief-set protocol over frames already sorted by timestamp.
std::vector<DownwashFrameResult> evaluate_downwash_frames(std::span<const EvalFrame> frames,
                                                          const CameraModel& camera,
                                                          const PerceptionConfig& perception,
                                                          const EllipsoidSpec& ellipsoid,
                                                          const RobotGeometry& geometry);

/// Builds frames from pose tracks (interpolated at `frame_times`) and
/// evaluates them with `ego_id` as the camera carrier.
std::vector<EvalFrame> build_eval_frames(std::span<const PoseTrack> tracks, const std::string& ego_id,
                                         const CameraModel& camera, std::span<const double> frame_times,
                                         const RobotGeometry& geometry);

std::vector<DownwashFrameResult> run_downwash_eval(std::span<const PoseTrack> tracks,
                                                   const std::string& ego_id, const CameraModel& camera,
                                                   std::span<const double> frame_times,
                                                   const PerceptionConfig& perception,
                                                   const EllipsoidSpec& ellipsoid,
                                                   const RobotGeometry& geometry);

}  // namespace spincam
