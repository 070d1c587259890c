#include "spincam/pose_log.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "spincam/config.hpp"
#include "spincam/errors.hpp"

namespace spincam {

namespace {

constexpr const char* kHeader = "robot_id,t,x,y,z,qw,qx,qy,qz";

double field_value(const std::string& text, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("'" + text + "' is not a number", line);
  }
  if (!std::isfinite(value)) {
    throw NonFiniteValue("line " + std::to_string(line) + ": non-finite value");
  }
  return value;
}

}  // namespace

std::vector<PoseTrack> ingest_pose_log(std::istream& in, const WarningSink& warn) {
  std::vector<PoseTrack> tracks;
  std::map<std::string, std::size_t> index;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (number == 1) {
      if (line != kHeader) throw ParseError(std::string("expected header '") + kHeader + "'", number);
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 9) throw ParseError("expected 9 columns, got " + std::to_string(fields.size()), number);
    if (fields[0].empty()) throw ParseError("empty robot id", number);

    double v[8];
    for (int i = 0; i < 8; ++i) v[i] = field_value(fields[static_cast<std::size_t>(i) + 1], number);
    Quat q(v[4], v[5], v[6], v[7]);
    const double norm = q.norm();
    if (!(norm > 1e-12)) {
      throw NonFiniteValue("line " + std::to_string(number) + ": quaternion has zero norm");
    }
    if (std::abs(norm - 1.0) > 1e-3) {
      const std::string msg = "line " + std::to_string(number) + ": quaternion norm " + format_real(norm) +
                              " normalized";
      if (warn) {
        warn(msg);
      } else {
        std::cerr << "warning: " << msg << '\n';
      }
    }
    Pose p;
    p.timestamp = v[0];
    p.robot_to_world.translation = Vec3(v[1], v[2], v[3]);
    p.robot_to_world.rotation = q.normalized();

    auto [it, inserted] = index.emplace(fields[0], tracks.size());
    if (inserted) tracks.push_back(PoseTrack{fields[0], {}});
    tracks[it->second].samples.push_back(p);
  }
  if (number == 0) throw ParseError("empty pose log", 0);

  for (auto& t : tracks) {
    std::stable_sort(t.samples.begin(), t.samples.end(),
                     [](const Pose& a, const Pose& b) { return a.timestamp < b.timestamp; });
    try {
      validate_track(t);
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), number);
    }
  }
  return tracks;
}

std::vector<PoseTrack> ingest_pose_log(const std::filesystem::path& path, const WarningSink& warn) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return ingest_pose_log(in, warn);
}

void write_pose_log(const std::vector<PoseTrack>& tracks, std::ostream& out) {
  out << kHeader << '\n';
  for (const auto& t : tracks) {
    for (const auto& p : t.samples) {
      const Vec3& x = p.position();
      const Quat& q = p.orientation();
      out << t.robot_id << ',' << format_real(p.timestamp) << ',' << format_real(x.x()) << ','
          << format_real(x.y()) << ',' << format_real(x.z()) << ',' << format_real(q.w()) << ','
          << format_real(q.x()) << ',' << format_real(q.y()) << ',' << format_real(q.z()) << '\n';
    }
  }
}

}  // namespace spincam
