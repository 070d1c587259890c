#include "spincam/downwash.hpp"

#include <algorithm>
#include <cmath>

#include "spincam/errors.hpp"

namespace spincam {

void EllipsoidSpec::validate() const {
  if (!(rx > 0.0 && ry > 0.0 && rz > 0.0)) {
    throw InvalidArgument("ellipsoid radii must be positive");
  }
}

double ellipsoid_margin(const Vec3& p_i, const Vec3& p_j, const EllipsoidSpec& e) {
  const Vec3 d = p_i - p_j;
  return Vec3(d.x() / e.rx, d.y() / e.ry, d.z() / e.rz).norm();
}

BeliefSet update_belief(const BeliefSet& beliefs, double timestamp,
                        const RigidTransform& camera_to_world, const VisibilityTest& visible,
                        std::span<const PositionEstimate> predictions, double merge_radius) {
  std::vector<Vec3> added;
  added.reserve(predictions.size());
  for (const auto& p : predictions) {
    added.push_back(camera_to_world.apply(p.position));
  }

  BeliefSet out;
  for (const Belief& b : beliefs.beliefs) {
    if (visible(b.position)) {
      continue;
    }
    const bool superseded = std::any_of(added.begin(), added.end(), [&](const Vec3& q) {
      return (q - b.position).norm() <= merge_radius;
    });
    if (!superseded) {
      out.beliefs.push_back(b);
    }
  }
  for (const Vec3& q : added) {
    out.beliefs.push_back({q, timestamp});
  }
  return out;
}

BeliefSet update_belief(const BeliefSet& beliefs, const Pose& ego, const CameraModel& camera,
                        std::span<const PositionEstimate> predictions, double merge_radius) {
  const RigidTransform world_to_camera = camera.robot_to_camera * ego.robot_to_world.inverse();
  const RigidTransform camera_to_world = world_to_camera.inverse();
  const VisibilityTest visible = [&](const Vec3& world) {
    return project_if_visible(world_to_camera.apply(world), camera.intrinsics).has_value();
  };
  return update_belief(beliefs, ego.timestamp, camera_to_world, visible, predictions, merge_radius);
}

bool predict_downwash(const BeliefSet& beliefs, const Vec3& ego_position, const EllipsoidSpec& e) {
  return std::any_of(beliefs.beliefs.begin(), beliefs.beliefs.end(),
                     [&](const Belief& b) { return in_downwash(b.position, ego_position, e); });
}

std::vector<DownwashFrameResult> evaluate_downwash_frames(std::span<const EvalFrame> frames,
                                                          const CameraModel& camera,
                                                          const PerceptionConfig& perception,
                                                          const EllipsoidSpec& ellipsoid,
                                                          const RobotGeometry& geometry) {
  ellipsoid.validate();
  std::vector<DownwashFrameResult> results;
  results.reserve(frames.size());
  BeliefSet beliefs;
  double last_time = -1.0;

  for (const EvalFrame& f : frames) {
    if (f.ego.timestamp < last_time) {
      throw InvalidArgument("evaluation frames must be sorted by timestamp");
    }
    last_time = f.ego.timestamp;
    const Vec3& ego_position = f.ego.position();

    DownwashFrameResult r;
    r.frame_id = f.frame_id;
    r.timestamp = f.ego.timestamp;
    r.gt_downwash = std::any_of(f.others.begin(), f.others.end(), [&](const RobotPose& o) {
      return in_downwash(o.pose.position(), ego_position, ellipsoid);
    });

    if (perception.mode == PerceptionMode::omniscient) {
      // Every neighbor is seen, wherever it is.
      const RigidTransform world_to_camera = camera.robot_to_camera * f.ego.robot_to_world.inverse();
      std::vector<PositionEstimate> all;
      for (const RobotPose& o : f.others) {
        all.push_back({world_to_camera.apply(o.pose.position()), EstimateSource::oracle});
      }
      beliefs = update_belief(beliefs, f.ego.timestamp, world_to_camera.inverse(),
                              [](const Vec3&) { return true; }, all);
    } else {
      const auto estimates = run_perception(f.annotation, camera.intrinsics, perception, geometry);
      beliefs = update_belief(beliefs, f.ego, camera, estimates);
    }
    r.pred_downwash = predict_downwash(beliefs, ego_position, ellipsoid);
    results.push_back(r);
  }
  return results;
}

std::vector<EvalFrame> build_eval_frames(std::span<const PoseTrack> tracks, const std::string& ego_id,
                                         const CameraModel& camera, std::span<const double> frame_times,
                                         const RobotGeometry& geometry) {
  const auto ego_it = std::find_if(tracks.begin(), tracks.end(),
                                   [&](const PoseTrack& t) { return t.robot_id == ego_id; });
  if (ego_it == tracks.end()) {
    throw InvalidArgument("no track for camera robot '" + ego_id + "'");
  }
  std::vector<double> times(frame_times.begin(), frame_times.end());
  std::sort(times.begin(), times.end());

  std::vector<EvalFrame> frames;
  frames.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    EvalFrame f;
    f.frame_id = k;
    f.ego = interpolate_pose(*ego_it, times[k]);
    for (const PoseTrack& t : tracks) {
      if (t.robot_id != ego_id) {
        f.others.push_back({t.robot_id, interpolate_pose(t, times[k])});
      }
    }
    f.annotation = annotate_frame(f.ego, f.others, camera, geometry, k, ego_id);
    frames.push_back(std::move(f));
  }
  return frames;
}

std::vector<DownwashFrameResult> run_downwash_eval(std::span<const PoseTrack> tracks,
                                                   const std::string& ego_id, const CameraModel& camera,
                                                   std::span<const double> frame_times,
                                                   const PerceptionConfig& perception,
                                                   const EllipsoidSpec& ellipsoid,
                                                   const RobotGeometry& geometry) {
  const auto frames = build_eval_frames(tracks, ego_id, camera, frame_times, geometry);
  return evaluate_downwash_frames(frames, camera, perception, ellipsoid, geometry);
}

}  // namespace spincam
