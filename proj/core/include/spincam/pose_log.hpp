#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "spincam/geometry.hpp"

namespace spincam {

using WarningSink = std::function<void(const std::string&)>;

/// Reads a motion-capture style CSV log with the header
/// `robot_id,t,x,y,z,qw,qx,qy,qz`. Rows may interleave robots; the result has
/// one time-sorted track per robot, ordered by first appearance.
/// Quaternions are normalized; a norm off by more than 1e-3 is reported to
/// `warn` (stderr when empty).
std::vector<PoseTrack> ingest_pose_log(std::istream& in, const WarningSink& warn = {});
std::vector<PoseTrack> ingest_pose_log(const std::filesystem::path& path, const WarningSink& warn = {});

void write_pose_log(const std::vector<PoseTrack>& tracks, std::ostream& out);

}  // namespace spincam
