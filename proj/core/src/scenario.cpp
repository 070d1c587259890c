#include "spincam/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "spincam/errors.hpp"

namespace spincam {

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::random_waypoint:
      return "random_waypoint";
    case ScenarioKind::hover_orbit:
      return "hover_orbit";
    case ScenarioKind::swap:
      return "swap";
  }
  return "swap";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
  if (text == "random_waypoint") return ScenarioKind::random_waypoint;
  if (text == "hover_orbit") return ScenarioKind::hover_orbit;
  if (text == "swap") return ScenarioKind::swap;
  throw InvalidConfig("unknown scenario kind '" + std::string(text) + "'");
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& why) { throw InvalidConfig(why); };
  if (num_robots < 1 || num_robots > 4) fail("num_robots must be between 1 and 4");
  if (!(yaw_rate > 0.0) || !std::isfinite(yaw_rate)) fail("yaw_rate must be positive");
  if (!(frame_rate > 0.0)) fail("frame_rate must be positive");
  if (!(duration > 0.0) || !std::isfinite(duration)) fail("duration must be positive");
  if (!(sample_rate >= 100.0)) fail("sample_rate must be at least 100 Hz");
  if (!(arena_min.array() < arena_max.array()).all()) fail("arena bounds must be well ordered");
  try {
    intrinsics.validate();
    geometry.validate();
    ellipsoid.validate();
  } catch (const InvalidArgument& e) {
    fail(e.what());
  }
  switch (kind) {
    case ScenarioKind::random_waypoint:
      if (waypoint_count < 1) fail("waypoint_count must be positive");
      if (!(max_speed > 0.0) || !(max_accel > 0.0)) fail("max_speed and max_accel must be positive");
      if (!(min_separation_margin >= 0.0)) fail("min_separation_margin must be non-negative");
      break;
    case ScenarioKind::hover_orbit: {
      if (static_cast<int>(hover_heights.size()) < num_robots - 1) {
        fail("hover_orbit needs one hover height per hovering robot");
      }
      std::vector<double> h(hover_heights.begin(), hover_heights.begin() + (num_robots - 1));
      std::sort(h.begin(), h.end());
      if (std::adjacent_find(h.begin(), h.end()) != h.end()) fail("hover heights must be distinct");
      if (!(orbit_radius > hover_spread) || !(orbit_speed > 0.0)) {
        fail("orbit must enclose the hovering robots and have positive speed");
      }
      break;
    }
    case ScenarioKind::swap:
      if (num_robots != 2) fail("swap requires exactly 2 robots");
      if (swap_start_a.z() == swap_start_b.z()) fail("swap robots must start at different heights");
      if (swap_count < 1) fail("swap_count must be positive");
      break;
  }
}

std::string robot_name(int index) { return "cf" + std::to_string(index); }

std::vector<double> frame_schedule(double frame_rate, double duration) {
  if (!(frame_rate > 0.0)) {
    throw InvalidArgument("frame rate must be positive");
  }
  if (!(duration >= 0.0)) {
    throw InvalidArgument("duration must be non-negative");
  }
  const auto n = static_cast<std::size_t>(std::floor(duration * frame_rate + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = static_cast<double>(k) / frame_rate;
  }
  return out;
}

double trapezoid_fraction(double t, double total, double ramp) {
  if (t <= 0.0) return 0.0;
  if (t >= total) return 1.0;
  ramp = std::min(ramp, total / 2.0);
  const double peak = 1.0 / (total - ramp);
  if (t < ramp) {
    return 0.5 * peak * t * t / ramp;
  }
  if (t <= total - ramp) {
    return peak * (t - ramp / 2.0);
  }
  const double rest = total - t;
  return 1.0 - 0.5 * peak * rest * rest / ramp;
}

double min_jerk(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

namespace {

std::vector<double> sample_times(const ScenarioConfig& cfg) {
  const auto n = static_cast<std::size_t>(std::ceil(cfg.duration * cfg.sample_rate - 1e-9));
  std::vector<double> t(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    t[k] = cfg.duration * static_cast<double>(k) / static_cast<double>(n);
  }
  t.back() = cfg.duration;
  return t;
}

using PositionFn = std::function<Vec3(double)>;
using YawFn = std::function<double(double)>;

PoseTrack sample_track(const std::string& id, const std::vector<double>& times, const PositionFn& pos,
                       const YawFn& yaw) {
  PoseTrack track;
  track.robot_id = id;
  track.samples.reserve(times.size());
  for (double t : times) {
    Pose p;
    p.timestamp = t;
    p.robot_to_world.translation = pos(t);
    p.robot_to_world.rotation = yaw_rotation(yaw(t));
    track.samples.push_back(p);
  }
  return track;
}

struct Leg {
  double start = 0.0;
  double length = 0.0;
  std::vector<Vec3> from;
  std::vector<Vec3> to;
  std::vector<double> ramp;  // per robot, in leg-scaled time
};

double profile_time(double distance, double vmax, double amax) {
  if (distance <= 0.0) return 0.0;
  if (distance >= vmax * vmax / amax) {
    return distance / vmax + vmax / amax;
  }
  return 2.0 * std::sqrt(distance / amax);
}

double ramp_time(double distance, double vmax, double amax) {
  if (distance <= 0.0) return 0.0;
  if (distance >= vmax * vmax / amax) return vmax / amax;
  return std::sqrt(distance / amax);
}

Vec3 leg_position(const Leg& leg, std::size_t robot, double t) {
  const double local = t - leg.start;
  if (leg.length <= 0.0) return leg.to[robot];
  const double f = trapezoid_fraction(local, leg.length, leg.ramp[robot]);
  return leg.from[robot] + f * (leg.to[robot] - leg.from[robot]);
}

bool leg_is_separated(const Leg& leg, const ScenarioConfig& cfg) {
  constexpr int kChecks = 40;
  const std::size_t n = leg.from.size();
  for (int c = 0; c <= kChecks; ++c) {
    const double t = leg.start + leg.length * c / kChecks;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (ellipsoid_margin(leg_position(leg, i, t), leg_position(leg, j, t), cfg.ellipsoid) <
            cfg.min_separation_margin) {
          return false;
        }
      }
    }
  }
  return true;
}

Scenario random_waypoint(const ScenarioConfig& cfg) {
  std::mt19937_64 rng(cfg.rng_seed);
  std::uniform_real_distribution<double> ux(cfg.arena_min.x(), cfg.arena_max.x());
  std::uniform_real_distribution<double> uy(cfg.arena_min.y(), cfg.arena_max.y());
  std::uniform_real_distribution<double> uz(cfg.arena_min.z(), cfg.arena_max.z());
  auto draw = [&] { return Vec3(ux(rng), uy(rng), uz(rng)); };
  const auto n = static_cast<std::size_t>(cfg.num_robots);
  constexpr int kMaxAttempts = 500;

  auto separated = [&](const std::vector<Vec3>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        if (ellipsoid_margin(pts[i], pts[j], cfg.ellipsoid) < cfg.min_separation_margin) return false;
      }
    }
    return true;
  };

  std::vector<Vec3> current(n);
  bool placed = false;
  for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
    for (auto& p : current) p = draw();
    placed = separated(current);
  }
  if (!placed) {
    throw InvalidConfig("arena too small to place robots with the requested separation");
  }

  std::vector<Leg> legs;
  double t = 0.0;
  for (int w = 0; w < cfg.waypoint_count && t < cfg.duration; ++w) {
    Leg leg;
    bool accepted = false;
    for (int attempt = 0; attempt < kMaxAttempts && !accepted; ++attempt) {
      leg = Leg{};
      leg.start = t;
      leg.from = current;
      double longest = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        leg.to.push_back(draw());
        longest = std::max(longest, profile_time((leg.to[i] - leg.from[i]).norm(), cfg.max_speed, cfg.max_accel));
      }
      leg.length = longest;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = (leg.to[i] - leg.from[i]).norm();
        const double own = profile_time(d, cfg.max_speed, cfg.max_accel);
        // Stretch the robot's own profile over the shared leg duration.
        leg.ramp.push_back(own > 0.0 ? ramp_time(d, cfg.max_speed, cfg.max_accel) * longest / own : 0.0);
      }
      accepted = leg_is_separated(leg, cfg);
    }
    if (!accepted) {
      break;  // hold position for the rest of the flight
    }
    legs.push_back(leg);
    current = leg.to;
    t += leg.length;
  }

  const auto times = sample_times(cfg);
  Scenario s;
  s.camera_robot = robot_name(0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 start = legs.empty() ? current[i] : legs.front().from[i];
    PositionFn pos = [&legs, i, start](double time) {
      if (legs.empty()) return start;
      auto it = std::upper_bound(legs.begin(), legs.end(), time,
                                 [](double value, const Leg& l) { return value < l.start; });
      if (it == legs.begin()) return start;
      const Leg& leg = *(it - 1);
      if (time >= leg.start + leg.length) return leg.to[i];
      return leg_position(leg, i, time);
    };
    YawFn yaw = [rate = cfg.yaw_rate](double time) { return rate * time; };
    s.tracks.push_back(sample_track(robot_name(static_cast<int>(i)), times, pos, yaw));
  }
  return s;
}

Scenario hover_orbit(const ScenarioConfig& cfg) {
  const auto times = sample_times(cfg);
  const int hovering = cfg.num_robots - 1;
  const Vec3 center = 0.5 * (cfg.arena_min + cfg.arena_max);
  Scenario s;
  for (int i = 0; i < hovering; ++i) {
    Vec3 p = center;
    if (hovering > 1) {
      const double a = 2.0 * std::numbers::pi * i / hovering;
      p.x() += cfg.hover_spread * std::cos(a);
      p.y() += cfg.hover_spread * std::sin(a);
    }
    p.z() = cfg.hover_heights[static_cast<std::size_t>(i)];
    s.tracks.push_back(sample_track(robot_name(i), times, [p](double) { return p; },
                                    [](double) { return 0.0; }));
  }
  const double angular = cfg.orbit_speed / cfg.orbit_radius;
  PositionFn orbit = [&cfg, center, angular](double t) {
    return Vec3(center.x() + cfg.orbit_radius * std::cos(angular * t),
                center.y() + cfg.orbit_radius * std::sin(angular * t), cfg.orbit_height);
  };
  s.tracks.push_back(sample_track(robot_name(hovering), times, orbit,
                                  [rate = cfg.yaw_rate](double t) { return rate * t; }));
  s.camera_robot = robot_name(hovering);
  return s;
}

Scenario swap(const ScenarioConfig& cfg) {
  const auto times = sample_times(cfg);
  const double leg = cfg.duration / cfg.swap_count;
  auto mover = [&cfg, leg](const Vec3& start, const Vec3& other) -> PositionFn {
    const Vec3 end(other.x(), other.y(), start.z());
    return [start, end, leg, count = cfg.swap_count](double t) {
      const int k = std::min(static_cast<int>(std::floor(t / leg)), count - 1);
      const double f = min_jerk((t - k * leg) / leg);
      const Vec3& from = (k % 2 == 0) ? start : end;
      const Vec3& to = (k % 2 == 0) ? end : start;
      return Vec3(from + f * (to - from));
    };
  };
  const bool a_lower = cfg.swap_start_a.z() < cfg.swap_start_b.z();
  YawFn spin = [rate = cfg.yaw_rate](double t) { return rate * t; };
  YawFn still = [](double) { return 0.0; };

  Scenario s;
  s.tracks.push_back(sample_track(robot_name(0), times, mover(cfg.swap_start_a, cfg.swap_start_b),
                                  a_lower ? spin : still));
  s.tracks.push_back(sample_track(robot_name(1), times, mover(cfg.swap_start_b, cfg.swap_start_a),
                                  a_lower ? still : spin));
  s.camera_robot = robot_name(a_lower ? 0 : 1);
  return s;
}

}  // namespace

Scenario generate_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  switch (cfg.kind) {
    case ScenarioKind::random_waypoint:
      return random_waypoint(cfg);
    case ScenarioKind::hover_orbit:
      return hover_orbit(cfg);
    case ScenarioKind::swap:
      return swap(cfg);
  }
  throw InvalidConfig("unknown scenario kind");
}

}  // namespace spincam
