#include "spincam/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "spincam/errors.hpp"

namespace spincam {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw InvalidConfig("key '" + key + "': expected a real number, got '" + text + "'");
  }
  return value;
}

}  // namespace

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(to_double(text, trim(item)));
  }
  return out;
}

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw InvalidConfig("line " + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw InvalidConfig("line " + std::to_string(number) + ": empty key");
    }
    if (!cfg.values_.emplace(key, value).second) {
      throw InvalidConfig("line " + std::to_string(number) + ": duplicate key '" + key + "'");
    }
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidConfig("cannot open config file '" + path.string() + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const std::string& KeyValueConfig::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw InvalidConfig("missing key '" + key + "'");
  }
  return it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? to_double(key, raw(key)) : fallback;
}

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string& text = raw(key);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidConfig("key '" + key + "': expected an integer, got '" + text + "'");
  }
  return value;
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string& text = raw(key);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidConfig("key '" + key + "': expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? raw(key) : fallback;
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key,
                                                const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  std::stringstream ss(raw(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(to_double(key, trim(item)));
  }
  return out;
}

Vec3 KeyValueConfig::get_vec3(const std::string& key, const Vec3& fallback) const {
  if (!has(key)) return fallback;
  const auto v = get_doubles(key, {});
  if (v.size() != 3) {
    throw InvalidConfig("key '" + key + "': expected three comma-separated reals");
  }
  return {v[0], v[1], v[2]};
}

void KeyValueConfig::reject_unknown(const std::set<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    if (!known.count(key)) {
      throw InvalidConfig("unknown key '" + key + "'");
    }
  }
}

std::string KeyValueConfig::to_text() const {
  std::string out;
  for (const auto& [key, value] : values_) {
    out += key + " = " + value + "\n";
  }
  return out;
}

namespace {

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_real(values[i]);
  }
  return out;
}

std::string join(const Vec3& v) { return join(std::vector<double>{v.x(), v.y(), v.z()}); }

const std::set<std::string> kScenarioKeys = {
    "kind", "num_robots", "yaw_rate", "camera_pitch", "frame_rate", "duration", "sample_rate",
    "arena_min", "arena_max", "seed", "waypoint_count", "max_speed", "max_accel",
    "min_separation_margin", "hover_heights", "hover_spread", "orbit_radius", "orbit_speed",
    "orbit_height", "swap_start_a", "swap_start_b", "swap_count", "fx", "fy", "cx", "cy", "k1",
    "width", "height", "half_extents", "sphere_radius", "ellipsoid"};

const std::set<std::string> kNoiseKeys = {
    "pixel_sigma", "depth_rel_sigma", "miss_rate", "false_positive_rate", "true_confidence_min",
    "true_confidence_max", "false_confidence_min", "false_confidence_max", "false_depth_min",
    "false_depth_max", "seed"};

}  // namespace

ScenarioConfig scenario_from_config(const KeyValueConfig& kv) {
  kv.reject_unknown(kScenarioKeys);
  ScenarioConfig c;
  c.kind = parse_scenario_kind(kv.get_string("kind", std::string(to_string(c.kind))));
  c.num_robots = static_cast<int>(kv.get_int("num_robots", c.num_robots));
  c.yaw_rate = kv.get_double("yaw_rate", c.yaw_rate);
  try {
    c.camera_pitch = parse_camera_pitch(kv.get_string("camera_pitch", std::string(to_string(c.camera_pitch))));
  } catch (const InvalidArgument& e) {
    throw InvalidConfig(e.what());
  }
  c.frame_rate = kv.get_double("frame_rate", c.frame_rate);
  c.duration = kv.get_double("duration", c.duration);
  c.sample_rate = kv.get_double("sample_rate", c.sample_rate);
  c.arena_min = kv.get_vec3("arena_min", c.arena_min);
  c.arena_max = kv.get_vec3("arena_max", c.arena_max);
  c.rng_seed = kv.get_uint("seed", c.rng_seed);
  c.waypoint_count = static_cast<int>(kv.get_int("waypoint_count", c.waypoint_count));
  c.max_speed = kv.get_double("max_speed", c.max_speed);
  c.max_accel = kv.get_double("max_accel", c.max_accel);
  c.min_separation_margin = kv.get_double("min_separation_margin", c.min_separation_margin);
  c.hover_heights = kv.get_doubles("hover_heights", c.hover_heights);
  c.hover_spread = kv.get_double("hover_spread", c.hover_spread);
  c.orbit_radius = kv.get_double("orbit_radius", c.orbit_radius);
  c.orbit_speed = kv.get_double("orbit_speed", c.orbit_speed);
  c.orbit_height = kv.get_double("orbit_height", c.orbit_height);
  c.swap_start_a = kv.get_vec3("swap_start_a", c.swap_start_a);
  c.swap_start_b = kv.get_vec3("swap_start_b", c.swap_start_b);
  c.swap_count = static_cast<int>(kv.get_int("swap_count", c.swap_count));
  c.intrinsics.fx = kv.get_double("fx", c.intrinsics.fx);
  c.intrinsics.fy = kv.get_double("fy", c.intrinsics.fy);
  c.intrinsics.cx = kv.get_double("cx", c.intrinsics.cx);
  c.intrinsics.cy = kv.get_double("cy", c.intrinsics.cy);
  c.intrinsics.k1 = kv.get_double("k1", c.intrinsics.k1);
  c.intrinsics.width = static_cast<int>(kv.get_int("width", c.intrinsics.width));
  c.intrinsics.height = static_cast<int>(kv.get_int("height", c.intrinsics.height));
  c.geometry.half_extents = kv.get_vec3("half_extents", c.geometry.half_extents);
  c.geometry.sphere_radius = kv.get_double("sphere_radius", c.geometry.sphere_radius);
  const Vec3 e = kv.get_vec3("ellipsoid", Vec3(c.ellipsoid.rx, c.ellipsoid.ry, c.ellipsoid.rz));
  c.ellipsoid = {e.x(), e.y(), e.z()};
  c.validate();
  return c;
}

KeyValueConfig scenario_to_config(const ScenarioConfig& c) {
  KeyValueConfig kv;
  kv.set("kind", std::string(to_string(c.kind)));
  kv.set("num_robots", std::to_string(c.num_robots));
  kv.set("yaw_rate", format_real(c.yaw_rate));
  kv.set("camera_pitch", std::string(to_string(c.camera_pitch)));
  kv.set("frame_rate", format_real(c.frame_rate));
  kv.set("duration", format_real(c.duration));
  kv.set("sample_rate", format_real(c.sample_rate));
  kv.set("arena_min", join(c.arena_min));
  kv.set("arena_max", join(c.arena_max));
  kv.set("seed", std::to_string(c.rng_seed));
  kv.set("waypoint_count", std::to_string(c.waypoint_count));
  kv.set("max_speed", format_real(c.max_speed));
  kv.set("max_accel", format_real(c.max_accel));
  kv.set("min_separation_margin", format_real(c.min_separation_margin));
  kv.set("hover_heights", join(c.hover_heights));
  kv.set("hover_spread", format_real(c.hover_spread));
  kv.set("orbit_radius", format_real(c.orbit_radius));
  kv.set("orbit_speed", format_real(c.orbit_speed));
  kv.set("orbit_height", format_real(c.orbit_height));
  kv.set("swap_start_a", join(c.swap_start_a));
  kv.set("swap_start_b", join(c.swap_start_b));
  kv.set("swap_count", std::to_string(c.swap_count));
  kv.set("fx", format_real(c.intrinsics.fx));
  kv.set("fy", format_real(c.intrinsics.fy));
  kv.set("cx", format_real(c.intrinsics.cx));
  kv.set("cy", format_real(c.intrinsics.cy));
  kv.set("k1", format_real(c.intrinsics.k1));
  kv.set("width", std::to_string(c.intrinsics.width));
  kv.set("height", std::to_string(c.intrinsics.height));
  kv.set("half_extents", join(c.geometry.half_extents));
  kv.set("sphere_radius", format_real(c.geometry.sphere_radius));
  kv.set("ellipsoid", join(Vec3(c.ellipsoid.rx, c.ellipsoid.ry, c.ellipsoid.rz)));
  return kv;
}

NoiseModel noise_from_config(const KeyValueConfig& kv) {
  kv.reject_unknown(kNoiseKeys);
  NoiseModel n;
  n.pixel_sigma = kv.get_double("pixel_sigma", n.pixel_sigma);
  n.depth_rel_sigma = kv.get_double("depth_rel_sigma", n.depth_rel_sigma);
  n.miss_rate = kv.get_double("miss_rate", n.miss_rate);
  n.false_positive_rate = kv.get_double("false_positive_rate", n.false_positive_rate);
  n.true_confidence_min = kv.get_double("true_confidence_min", n.true_confidence_min);
  n.true_confidence_max = kv.get_double("true_confidence_max", n.true_confidence_max);
  n.false_confidence_min = kv.get_double("false_confidence_min", n.false_confidence_min);
  n.false_confidence_max = kv.get_double("false_confidence_max", n.false_confidence_max);
  n.false_depth_min = kv.get_double("false_depth_min", n.false_depth_min);
  n.false_depth_max = kv.get_double("false_depth_max", n.false_depth_max);
  n.rng_seed = kv.get_uint("seed", n.rng_seed);
  try {
    n.validate();
  } catch (const InvalidArgument& e) {
    throw InvalidConfig(e.what());
  }
  return n;
}

KeyValueConfig noise_to_config(const NoiseModel& n) {
  KeyValueConfig kv;
  kv.set("pixel_sigma", format_real(n.pixel_sigma));
  kv.set("depth_rel_sigma", format_real(n.depth_rel_sigma));
  kv.set("miss_rate", format_real(n.miss_rate));
  kv.set("false_positive_rate", format_real(n.false_positive_rate));
  kv.set("true_confidence_min", format_real(n.true_confidence_min));
  kv.set("true_confidence_max", format_real(n.true_confidence_max));
  kv.set("false_confidence_min", format_real(n.false_confidence_min));
  kv.set("false_confidence_max", format_real(n.false_confidence_max));
  kv.set("false_depth_min", format_real(n.false_depth_min));
  kv.set("false_depth_max", format_real(n.false_depth_max));
  kv.set("seed", std::to_string(n.rng_seed));
  return kv;
}

}  // namespace spincam
