#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "spincam/annotation.hpp"
#include "spincam/camera.hpp"
#include "spincam/downwash.hpp"
#include "spincam/eval.hpp"
#include "spincam/perception.hpp"

namespace spincam {

inline constexpr int kDatasetSchemaVersion = 1;
inline constexpr int kLabelSchemaVersion = 1;

struct DatasetHeader {
  int schema_version = kDatasetSchemaVersion;
  CameraModel camera;
  RobotGeometry geometry;
  EllipsoidSpec ellipsoid;
  std::string ego_id;
  std::vector<std::string> robot_ids;
  std::map<std::string, std::string> scenario;  // generating config, if any
};

/// One frame: its annotation plus the world poses of all robots (ego
/// included) at the frame timestamp.
struct AnnotationRecord {
  FrameAnnotation annotation;
  std::vector<RobotPose> world_poses;
};

struct Dataset {
  DatasetHeader header;
  std::vector<AnnotationRecord> records;
};

/// Interpolates every track at `frame_times` and annotates the frames seen
/// by `ego_id`.
Dataset build_dataset(std::span<const PoseTrack> tracks, const std::string& ego_id,
                      const CameraModel& camera, std::span<const double> frame_times,
                      const RobotGeometry& geometry, const EllipsoidSpec& ellipsoid);

/// Newline-delimited JSON: a header record then one record per frame. Reals
/// are written with round-trip precision.
void write_dataset(const Dataset& dataset, std::ostream& out);
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);

/// Throws ParseError (with the 1-based line) or VersionMismatch.
Dataset read_dataset(std::istream& in);
Dataset read_dataset(const std::filesystem::path& path);

/// Evaluation frames in timestamp order.
std::vector<EvalFrame> eval_frames(const Dataset& dataset);

enum class LabelMode { bbox, grid };

/// One JSON line per frame: box/center labels, or the sparse cells of the
/// encoded grid target.
void export_labels(std::span<const FrameAnnotation> annotations, LabelMode mode,
                   const CameraIntrinsics& intr, GridShape shape, std::ostream& out);
void export_labels(std::span<const FrameAnnotation> annotations, LabelMode mode,
                   const CameraIntrinsics& intr, GridShape shape, const std::filesystem::path& path);

/// CSV rows `frame_id,gt_downwash,pred_downwash` and a `summary` footer with
/// the confusion counts and precision/recall/F1 to four decimals.
void write_report(std::span<const DownwashFrameResult> results, std::ostream& out);
void write_report(std::span<const DownwashFrameResult> results, const std::filesystem::path& path);

struct Report {
  std::vector<DownwashFrameResult> rows;
  ConfusionCounts counts;
  ClassificationMetrics metrics;  // as printed, i.e. rounded
};

Report read_report(std::istream& in);
Report read_report(const std::filesystem::path& path);

/// Fixed four-decimal rendering used by reports; NaN prints as "nan".
std::string format_metric(double value);

}  // namespace spincam
