#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "spincam/annotation.hpp"
#include "spincam/camera.hpp"
#include "spincam/downwash.hpp"
#include "spincam/geometry.hpp"

namespace spincam {

enum class ScenarioKind { random_waypoint, hover_orbit, swap };

std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(std::string_view text);

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::swap;
  int num_robots = 2;
  double yaw_rate = 2.0;  // rad/s of the camera-carrying robots
  CameraPitch camera_pitch = CameraPitch::up;
  double frame_rate = 6.0;
  double duration = 20.0;
  double sample_rate = 100.0;  // pose track rate, >= 100 Hz
  Vec3 arena_min{-1.5, -1.5, 0.2};
  Vec3 arena_max{1.5, 1.5, 2.5};
  std::uint64_t rng_seed = 0;

  // random_waypoint
  int waypoint_count = 8;
  double max_speed = 0.5;
  double max_accel = 1.0;
  double min_separation_margin = 2.0;  // ellipsoid margin kept between robots

  // hover_orbit: robots 0..n-2 hover, the last one orbits them. The orbit is
  // a stand-in for the teleoperated flight and is not taken from real logs.
  std::vector<double> hover_heights{0.6, 1.0, 1.4};
  double hover_spread = 0.25;  // hover positions on a circle of this radius
  double orbit_radius = 0.7;
  double orbit_speed = 0.4;
  double orbit_height = 0.8;

  // swap: robot 0 and robot 1 exchange x and y, keeping their heights
  Vec3 swap_start_a{-0.5, -0.5, 0.5};
  Vec3 swap_start_b{0.5, 0.5, 1.0};
  int swap_count = 1;

  CameraIntrinsics intrinsics;
  RobotGeometry geometry;
  EllipsoidSpec ellipsoid;

  /// Throws InvalidConfig with the reason.
  void validate() const;
};

struct Scenario {
  std::vector<PoseTrack> tracks;
  std::string camera_robot;
};

std::string robot_name(int index);

/// Kinematic pose tracks for the configured flight. Deterministic in
/// `rng_seed`.
Scenario generate_scenario(const ScenarioConfig& cfg);

/// Frame timestamps 0, 1/fps, 2/fps, ... up to and including `duration`.
std::vector<double> frame_schedule(double frame_rate, double duration);
inline std::vector<double> frame_schedule(const ScenarioConfig& cfg) {
  return frame_schedule(cfg.frame_rate, cfg.duration);
}

/// Normalized position along a rest-to-rest trapezoidal velocity profile of
/// total time `total` with ramps of `ramp` seconds, in [0, 1].
double trapezoid_fraction(double t, double total, double ramp);

/// Minimum-jerk rest-to-rest blend 10s^3 - 15s^4 + 6s^5.
double min_jerk(double s);

}  // namespace spincam
