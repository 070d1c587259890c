#include "spincam/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "spincam/errors.hpp"

namespace spincam {

using nlohmann::json;

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw json::type_error::create(302, "expected a 3-vector", &j);
  }
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json quat_json(const Quat& q) { return json::array({q.w(), q.x(), q.y(), q.z()}); }

Quat quat_from(const json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw json::type_error::create(302, "expected a quaternion [w,x,y,z]", &j);
  }
  return Quat(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(), j.at(3).get<double>());
}

json transform_json(const RigidTransform& t) {
  return {{"rotation", quat_json(t.rotation)}, {"translation", vec_json(t.translation)}};
}

RigidTransform transform_from(const json& j) {
  return {quat_from(j.at("rotation")), vec_from(j.at("translation"))};
}

json pose_json(const RobotPose& p) {
  return {{"robot_id", p.robot_id},
          {"t", p.pose.timestamp},
          {"position", vec_json(p.pose.position())},
          {"orientation", quat_json(p.pose.orientation())}};
}

RobotPose pose_from(const json& j) {
  RobotPose p;
  p.robot_id = j.at("robot_id").get<std::string>();
  p.pose.timestamp = j.at("t").get<double>();
  p.pose.robot_to_world.translation = vec_from(j.at("position"));
  p.pose.robot_to_world.rotation = quat_from(j.at("orientation"));
  return p;
}

json bbox_json(const BoundingBox& b) { return json::array({b.u_min, b.v_min, b.u_max, b.v_max}); }

BoundingBox bbox_from(const json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw json::type_error::create(302, "expected a box [u_min,v_min,u_max,v_max]", &j);
  }
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(), j.at(3).get<double>()};
}

json header_json(const DatasetHeader& h) {
  const auto& in = h.camera.intrinsics;
  json scenario = json::object();
  for (const auto& [k, v] : h.scenario) scenario[k] = v;
  return {{"record", "header"},
          {"schema_version", h.schema_version},
          {"camera",
           {{"fx", in.fx},
            {"fy", in.fy},
            {"cx", in.cx},
            {"cy", in.cy},
            {"k1", in.k1},
            {"width", in.width},
            {"height", in.height},
            {"pitch", std::string(to_string(h.camera.pitch))},
            {"robot_to_camera", transform_json(h.camera.robot_to_camera)}}},
          {"geometry",
           {{"half_extents", vec_json(h.geometry.half_extents)}, {"sphere_radius", h.geometry.sphere_radius}}},
          {"ellipsoid", json::array({h.ellipsoid.rx, h.ellipsoid.ry, h.ellipsoid.rz})},
          {"ego_id", h.ego_id},
          {"robot_ids", h.robot_ids},
          {"scenario", scenario}};
}

DatasetHeader header_from(const json& j) {
  DatasetHeader h;
  h.schema_version = j.at("schema_version").get<int>();
  if (h.schema_version != kDatasetSchemaVersion) {
    throw VersionMismatch("dataset schema version " + std::to_string(h.schema_version) +
                          " is not supported (expected " + std::to_string(kDatasetSchemaVersion) + ")");
  }
  const json& c = j.at("camera");
  auto& in = h.camera.intrinsics;
  in.fx = c.at("fx").get<double>();
  in.fy = c.at("fy").get<double>();
  in.cx = c.at("cx").get<double>();
  in.cy = c.at("cy").get<double>();
  in.k1 = c.at("k1").get<double>();
  in.width = c.at("width").get<int>();
  in.height = c.at("height").get<int>();
  h.camera.pitch = parse_camera_pitch(c.at("pitch").get<std::string>());
  h.camera.robot_to_camera = transform_from(c.at("robot_to_camera"));
  h.geometry.half_extents = vec_from(j.at("geometry").at("half_extents"));
  h.geometry.sphere_radius = j.at("geometry").at("sphere_radius").get<double>();
  const Vec3 e = vec_from(j.at("ellipsoid"));
  h.ellipsoid = {e.x(), e.y(), e.z()};
  h.ego_id = j.at("ego_id").get<std::string>();
  h.robot_ids = j.at("robot_ids").get<std::vector<std::string>>();
  for (const auto& [k, v] : j.at("scenario").items()) h.scenario[k] = v.get<std::string>();
  return h;
}

json frame_json(const AnnotationRecord& r) {
  const auto& a = r.annotation;
  json neighbors = json::array();
  for (const auto& n : a.neighbors) {
    neighbors.push_back({{"robot_id", n.robot_id},
                         {"rel_position", vec_json(n.rel_position)},
                         {"center", json::array({n.center.u, n.center.v})},
                         {"bbox", bbox_json(n.bbox)}});
  }
  json poses = json::array();
  for (const auto& p : r.world_poses) poses.push_back(pose_json(p));
  return {{"record", "frame"},       {"frame_id", a.frame_id}, {"timestamp", a.timestamp},
          {"ego_id", a.ego_id},      {"neighbors", neighbors}, {"world_poses", poses}};
}

AnnotationRecord frame_from(const json& j) {
  AnnotationRecord r;
  auto& a = r.annotation;
  a.frame_id = j.at("frame_id").get<std::uint64_t>();
  a.timestamp = j.at("timestamp").get<double>();
  a.ego_id = j.at("ego_id").get<std::string>();
  for (const auto& n : j.at("neighbors")) {
    NeighborAnnotation na;
    na.robot_id = n.at("robot_id").get<std::string>();
    na.rel_position = vec_from(n.at("rel_position"));
    const json& c = n.at("center");
    na.center = {c.at(0).get<double>(), c.at(1).get<double>()};
    na.bbox = bbox_from(n.at("bbox"));
    a.neighbors.push_back(std::move(na));
  }
  for (const auto& p : j.at("world_poses")) r.world_poses.push_back(pose_from(p));
  return r;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  return in;
}

}  // namespace

Dataset build_dataset(std::span<const PoseTrack> tracks, const std::string& ego_id,
                      const CameraModel& camera, std::span<const double> frame_times,
                      const RobotGeometry& geometry, const EllipsoidSpec& ellipsoid) {
  Dataset d;
  d.header.camera = camera;
  d.header.geometry = geometry;
  d.header.ellipsoid = ellipsoid;
  d.header.ego_id = ego_id;
  for (const auto& t : tracks) d.header.robot_ids.push_back(t.robot_id);

  const auto frames = build_eval_frames(tracks, ego_id, camera, frame_times, geometry);
  for (const auto& f : frames) {
    AnnotationRecord r;
    r.annotation = f.annotation;
    r.world_poses.push_back({ego_id, f.ego});
    for (const auto& o : f.others) r.world_poses.push_back(o);
    d.records.push_back(std::move(r));
  }
  return d;
}

void write_dataset(const Dataset& dataset, std::ostream& out) {
  out << header_json(dataset.header).dump() << '\n';
  for (const auto& r : dataset.records) {
    out << frame_json(r).dump() << '\n';
  }
  if (!out) {
    throw IoError("failed writing dataset");
  }
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_dataset(dataset, out);
}

Dataset read_dataset(std::istream& in) {
  Dataset d;
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const std::string what = have_header ? "frame record " + std::to_string(d.records.size() + 1) : "header record";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(what + ": malformed record (" + e.what() + ")", number);
    }
    try {
      const std::string kind = j.at("record").get<std::string>();
      if (!have_header) {
        if (kind != "header") throw ParseError("expected the header record first", number);
        d.header = header_from(j);
        have_header = true;
      } else {
        if (kind != "frame") throw ParseError(what + ": unexpected record type '" + kind + "'", number);
        d.records.push_back(frame_from(j));
      }
    } catch (const json::exception& e) {
      throw ParseError(what + ": " + e.what(), number);
    } catch (const InvalidArgument& e) {
      throw ParseError(what + ": " + e.what(), number);
    }
  }
  if (!have_header) {
    throw ParseError("missing header record", number);
  }
  return d;
}

Dataset read_dataset(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_dataset(in);
}

std::vector<EvalFrame> eval_frames(const Dataset& dataset) {
  std::vector<EvalFrame> frames;
  for (const auto& r : dataset.records) {
    EvalFrame f;
    f.frame_id = r.annotation.frame_id;
    f.annotation = r.annotation;
    bool have_ego = false;
    for (const auto& p : r.world_poses) {
      if (p.robot_id == dataset.header.ego_id) {
        f.ego = p.pose;
        have_ego = true;
      } else {
        f.others.push_back(p);
      }
    }
    if (!have_ego) {
      throw DataError("frame " + std::to_string(f.frame_id) + " has no pose for the camera robot");
    }
    frames.push_back(std::move(f));
  }
  std::stable_sort(frames.begin(), frames.end(),
                   [](const EvalFrame& a, const EvalFrame& b) { return a.ego.timestamp < b.ego.timestamp; });
  return frames;
}

void export_labels(std::span<const FrameAnnotation> annotations, LabelMode mode,
                   const CameraIntrinsics& intr, GridShape shape, std::ostream& out) {
  for (const auto& a : annotations) {
    json row = {{"schema_version", kLabelSchemaVersion}, {"frame_id", a.frame_id}, {"timestamp", a.timestamp}};
    if (mode == LabelMode::bbox) {
      json labels = json::array();
      for (const auto& n : a.neighbors) {
        labels.push_back({{"robot_id", n.robot_id},
                          {"center", json::array({n.center.u, n.center.v})},
                          {"bbox", bbox_json(n.bbox)}});
      }
      row["labels"] = labels;
    } else {
      const auto grid = encode_grid(a, intr, shape);
      json cells = json::array();
      for (int i = 0; i < grid.rows; ++i) {
        for (int j = 0; j < grid.cols; ++j) {
          if (grid.conf(i, j) > 0.0) {
            cells.push_back({{"row", i}, {"col", j}, {"confidence", grid.conf(i, j)}, {"depth", grid.dep(i, j)}});
          }
        }
      }
      row["rows"] = grid.rows;
      row["cols"] = grid.cols;
      row["cells"] = cells;
    }
    out << row.dump() << '\n';
  }
  if (!out) {
    throw IoError("failed writing labels");
  }
}

void export_labels(std::span<const FrameAnnotation> annotations, LabelMode mode,
                   const CameraIntrinsics& intr, GridShape shape, const std::filesystem::path& path) {
  auto out = open_out(path);
  export_labels(annotations, mode, intr, shape, out);
}

std::string format_metric(double value) {
  if (std::isnan(value)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

void write_report(std::span<const DownwashFrameResult> results, std::ostream& out) {
  out << "frame_id,gt_downwash,pred_downwash\n";
  for (const auto& r : results) {
    out << r.frame_id << ',' << (r.gt_downwash ? 1 : 0) << ',' << (r.pred_downwash ? 1 : 0) << '\n';
  }
  const ConfusionCounts c = confusion(results);
  const ClassificationMetrics m = classification_metrics(c);
  out << "summary,tp=" << c.tp << ",fp=" << c.fp << ",fn=" << c.fn << ",tn=" << c.tn
      << ",precision=" << format_metric(m.precision) << ",recall=" << format_metric(m.recall)
      << ",f1=" << format_metric(m.f1) << '\n';
  if (!out) {
    throw IoError("failed writing report");
  }
}

void write_report(std::span<const DownwashFrameResult> results, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_report(results, out);
}

Report read_report(std::istream& in) {
  Report report;
  std::string line;
  std::size_t number = 0;
  bool have_summary = false;
  while (std::getline(in, line)) {
    ++number;
    if (number == 1) {
      if (line != "frame_id,gt_downwash,pred_downwash") throw ParseError("unexpected report header", number);
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (!fields.empty() && fields[0] == "summary") {
      std::map<std::string, std::string> kv;
      for (std::size_t i = 1; i < fields.size(); ++i) {
        const auto eq = fields[i].find('=');
        if (eq == std::string::npos) throw ParseError("malformed summary field", number);
        kv[fields[i].substr(0, eq)] = fields[i].substr(eq + 1);
      }
      try {
        report.counts = {std::stoull(kv.at("tp")), std::stoull(kv.at("fp")), std::stoull(kv.at("fn")),
                         std::stoull(kv.at("tn"))};
        report.metrics = {std::stod(kv.at("precision")), std::stod(kv.at("recall")), std::stod(kv.at("f1"))};
      } catch (const std::exception&) {
        throw ParseError("malformed summary record", number);
      }
      have_summary = true;
      continue;
    }
    if (fields.size() != 3 || (fields[1] != "0" && fields[1] != "1") || (fields[2] != "0" && fields[2] != "1")) {
      throw ParseError("malformed report row", number);
    }
    DownwashFrameResult r;
    try {
      r.frame_id = std::stoull(fields[0]);
    } catch (const std::exception&) {
      throw ParseError("malformed frame id", number);
    }
    r.gt_downwash = fields[1] == "1";
    r.pred_downwash = fields[2] == "1";
    report.rows.push_back(r);
  }
  if (!have_summary) {
    throw ParseError("missing summary record", number);
  }
  return report;
}

Report read_report(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_report(in);
}

}  // namespace spincam
