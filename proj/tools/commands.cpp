#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "spincam/spincam.hpp"

namespace spincam::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Manifest {
  std::string command;
  std::vector<std::string> args;
  std::string config_path;
  std::string config_text;
  std::uint64_t rng_seed = 0;
  std::vector<std::string> outputs;
};

// Written before any output so a partially finished run still records how it
// was started.
void write_manifest(const fs::path& dir, const Manifest& m) {
  json j = {{"toolkit_version", kToolkitVersion},
            {"command", m.command},
            {"args", m.args},
            {"config_path", m.config_path},
            {"config", m.config_text},
            {"rng_seed", m.rng_seed},
            {"schema_versions", {{"dataset", kDatasetSchemaVersion}, {"labels", kLabelSchemaVersion}, {"report", 1}}},
            {"outputs", m.outputs}};
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw IoError("cannot write manifest in '" + dir.string() + "'");
  out << j.dump(2) << '\n';
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

void require_file(const std::string& path, const std::string& what) {
  if (path.empty() || !fs::is_regular_file(path)) {
    throw UsageError(what + " '" + path + "' does not exist");
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

EllipsoidSpec parse_ellipsoid(const std::string& text) {
  std::vector<double> v;
  try {
    v = parse_real_list(text);
  } catch (const InvalidConfig&) {
    throw UsageError("--ellipsoid expects rx,ry,rz");
  }
  if (v.size() != 3 || !(v[0] > 0.0 && v[1] > 0.0 && v[2] > 0.0)) {
    throw UsageError("--ellipsoid expects three positive radii rx,ry,rz");
  }
  return {v[0], v[1], v[2]};
}

std::vector<CameraPitch> parse_pitches(const std::string& text) {
  std::vector<CameraPitch> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_camera_pitch(item));
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("--pitches needs at least one value");
  return out;
}

std::vector<double> parse_rates(const std::string& text) {
  std::vector<double> out;
  try {
    out = parse_real_list(text);
  } catch (const InvalidConfig&) {
    throw UsageError("--yaw-rates expects comma-separated reals");
  }
  if (out.empty() || std::any_of(out.begin(), out.end(), [](double r) { return !(r > 0.0); })) {
    throw UsageError("--yaw-rates must be positive");
  }
  return out;
}

// Detector options shared by downwash-eval and benchmark.
struct PerceptionOptions {
  bool oracle = false;
  bool omniscient = false;
  std::string noise_path;
  std::string detector = "box";
  double threshold = 0.5;
  std::string grid = "28,40";
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* cmd) {
    cmd->add_flag("--oracle", oracle, "Use ground-truth annotations as detections");
    cmd->add_flag("--omniscient", omniscient, "Every neighbor is always seen (upper bound)");
    cmd->add_option("--noise", noise_path, "Noise model config (key = value)");
    cmd->add_option("--detector", detector, "Simulated detector: box or grid")->check(CLI::IsMember({"box", "grid"}));
    cmd->add_option("--threshold", threshold, "Detection confidence threshold");
    cmd->add_option("--grid", grid, "Grid detector rows,cols");
    cmd->add_option("--seed", seed, "Noise seed override");
  }

  PerceptionConfig resolve() const {
    PerceptionConfig pc;
    if (oracle && omniscient) throw UsageError("--oracle and --omniscient are exclusive");
    if ((oracle || omniscient) && !noise_path.empty()) throw UsageError("--noise cannot be combined with --oracle");
    if (oracle) {
      pc.mode = PerceptionMode::oracle;
    } else if (omniscient) {
      pc.mode = PerceptionMode::omniscient;
    } else {
      pc.mode = detector == "grid" ? PerceptionMode::grid : PerceptionMode::box;
      if (!noise_path.empty()) {
        require_file(noise_path, "noise config");
        pc.noise = noise_from_config(KeyValueConfig::load(noise_path));
      }
    }
    if (seed) pc.noise.rng_seed = *seed;
    if (!(threshold > 0.0 && threshold < 1.0)) throw UsageError("--threshold must lie in (0, 1)");
    pc.threshold = threshold;
    std::vector<double> dims;
    try {
      dims = parse_real_list(grid);
    } catch (const InvalidConfig&) {
      throw UsageError("--grid expects rows,cols");
    }
    if (dims.size() != 2 || dims[0] < 1 || dims[1] < 1) throw UsageError("--grid expects rows,cols");
    pc.grid = {static_cast<int>(dims[0]), static_cast<int>(dims[1])};
    return pc;
  }
};

std::string describe(const PerceptionConfig& pc) { return std::string(to_string(pc.mode)); }

struct CellResult {
  double yaw_rate = 0.0;
  CameraPitch pitch = CameraPitch::up;
  std::size_t frames = 0;
  ConfusionCounts counts;
  ClassificationMetrics metrics;
};

std::string cell_name(double rate, CameraPitch pitch) {
  return "swap_yaw" + format_real(rate) + "_" + std::string(to_string(pitch));
}

std::vector<DownwashFrameResult> evaluate_dataset(const Dataset& d, const PerceptionConfig& pc,
                                                  const EllipsoidSpec& e) {
  const auto frames = eval_frames(d);
  return evaluate_downwash_frames(frames, d.header.camera, pc, e, d.header.geometry);
}

Dataset simulate_dataset(const ScenarioConfig& cfg) {
  const Scenario sc = generate_scenario(cfg);
  const CameraModel camera = CameraModel::mounted(cfg.intrinsics, cfg.camera_pitch);
  const auto frames = frame_schedule(cfg);
  Dataset d = build_dataset(sc.tracks, sc.camera_robot, camera, frames, cfg.geometry, cfg.ellipsoid);
  d.header.scenario = scenario_to_config(cfg).values();
  return d;
}

// --- subcommands -----------------------------------------------------------

int cmd_simulate(const std::vector<std::string>& args, const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed, const std::string& labels, std::ostream& out) {
  require_file(config_path, "config");
  KeyValueConfig kv = KeyValueConfig::load(config_path);
  ScenarioConfig cfg = scenario_from_config(kv);
  if (seed) cfg.rng_seed = *seed;

  ensure_dir(out_dir);
  Manifest m{"simulate", args, config_path, kv.to_text(), cfg.rng_seed, {"dataset.jsonl", "tracks.csv"}};
  if (!labels.empty()) m.outputs.push_back("labels_" + labels + ".jsonl");
  write_manifest(out_dir, m);

  const Scenario sc = generate_scenario(cfg);
  const CameraModel camera = CameraModel::mounted(cfg.intrinsics, cfg.camera_pitch);
  const auto frames = frame_schedule(cfg);
  Dataset d = build_dataset(sc.tracks, sc.camera_robot, camera, frames, cfg.geometry, cfg.ellipsoid);
  d.header.scenario = scenario_to_config(cfg).values();
  write_dataset(d, fs::path(out_dir) / "dataset.jsonl");
  {
    std::ofstream tracks(fs::path(out_dir) / "tracks.csv", std::ios::binary);
    write_pose_log(sc.tracks, tracks);
  }
  if (!labels.empty()) {
    std::vector<FrameAnnotation> annotations;
    for (const auto& r : d.records) annotations.push_back(r.annotation);
    export_labels(annotations, labels == "grid" ? LabelMode::grid : LabelMode::bbox, camera.intrinsics,
                  GridShape{}, fs::path(out_dir) / ("labels_" + labels + ".jsonl"));
  }

  std::size_t downwash = 0;
  std::size_t visible = 0;
  for (const auto& f : eval_frames(d)) {
    visible += f.annotation.neighbors.empty() ? 0 : 1;
    for (const auto& o : f.others) {
      if (in_downwash(o.pose.position(), f.ego.position(), cfg.ellipsoid)) {
        ++downwash;
        break;
      }
    }
  }
  out << "scenario " << to_string(cfg.kind) << ", " << cfg.num_robots << " robots, camera " << sc.camera_robot
      << " (" << to_string(cfg.camera_pitch) << "), yaw rate " << format_real(cfg.yaw_rate) << " rad/s\n"
      << d.records.size() << " frames, " << visible << " with visible neighbors, " << downwash
      << " with ground-truth downwash\n"
      << "wrote " << (fs::path(out_dir) / "dataset.jsonl").string() << '\n';
  return kExitOk;
}

int cmd_downwash_eval(const std::vector<std::string>& args, const std::string& dataset_path,
                      const PerceptionOptions& popts, const std::string& ellipsoid_text, const std::string& out_dir,
                      std::ostream& out) {
  require_file(dataset_path, "dataset");
  const PerceptionConfig pc = popts.resolve();
  const Dataset d = read_dataset(fs::path(dataset_path));
  const EllipsoidSpec e = ellipsoid_text.empty() ? d.header.ellipsoid : parse_ellipsoid(ellipsoid_text);

  ensure_dir(out_dir);
  write_manifest(out_dir, {"downwash-eval", args, popts.noise_path,
                           popts.noise_path.empty() ? "" : read_text(popts.noise_path), pc.noise.rng_seed,
                           {"report.csv"}});
  const auto results = evaluate_dataset(d, pc, e);
  write_report(results, fs::path(out_dir) / "report.csv");

  const auto c = confusion(results);
  const auto m = classification_metrics(c);
  out << "perception " << describe(pc) << ", " << results.size() << " frames\n"
      << "tp " << c.tp << "  fp " << c.fp << "  fn " << c.fn << "  tn " << c.tn << '\n'
      << "precision " << format_metric(m.precision) << "  recall " << format_metric(m.recall) << "  f1 "
      << format_metric(m.f1) << '\n';
  return kExitOk;
}

int cmd_benchmark(const std::vector<std::string>& args, const std::string& config_path,
                  const std::string& datasets_dir, const std::string& rates_text, const std::string& pitches_text,
                  const PerceptionOptions& popts, const std::string& ellipsoid_text, const std::string& out_dir,
                  std::ostream& out) {
  if (config_path.empty() == datasets_dir.empty()) {
    throw UsageError("benchmark needs exactly one of --config or --datasets");
  }
  const auto rates = parse_rates(rates_text);
  const auto pitches = parse_pitches(pitches_text);
  const PerceptionConfig pc = popts.resolve();

  std::optional<ScenarioConfig> base;
  std::string config_text;
  if (!config_path.empty()) {
    require_file(config_path, "config");
    const auto kv = KeyValueConfig::load(config_path);
    base = scenario_from_config(kv);
    config_text = kv.to_text();
  } else {
    if (!fs::is_directory(datasets_dir)) throw UsageError("dataset directory '" + datasets_dir + "' does not exist");
    for (double r : rates) {
      for (CameraPitch p : pitches) {
        require_file((fs::path(datasets_dir) / (cell_name(r, p) + ".jsonl")).string(), "dataset");
      }
    }
  }
  std::optional<EllipsoidSpec> ellipsoid;
  if (!ellipsoid_text.empty()) ellipsoid = parse_ellipsoid(ellipsoid_text);

  ensure_dir(out_dir);
  Manifest m{"benchmark", args, config_path, config_text, base ? base->rng_seed : pc.noise.rng_seed, {"summary.csv"}};
  for (double r : rates) {
    for (CameraPitch p : pitches) {
      if (base) m.outputs.push_back(cell_name(r, p) + ".jsonl");
      m.outputs.push_back(cell_name(r, p) + "_report.csv");
    }
  }
  write_manifest(out_dir, m);

  // Cells are independent; each one runs its frames in order.
  std::vector<std::future<CellResult>> jobs;
  for (double r : rates) {
    for (CameraPitch p : pitches) {
      jobs.push_back(std::async(std::launch::async, [&, r, p] {
        Dataset d;
        if (base) {
          ScenarioConfig cfg = *base;
          cfg.yaw_rate = r;
          cfg.camera_pitch = p;
          d = simulate_dataset(cfg);
          write_dataset(d, fs::path(out_dir) / (cell_name(r, p) + ".jsonl"));
        } else {
          d = read_dataset(fs::path(datasets_dir) / (cell_name(r, p) + ".jsonl"));
        }
        const auto results = evaluate_dataset(d, pc, ellipsoid.value_or(d.header.ellipsoid));
        write_report(results, fs::path(out_dir) / (cell_name(r, p) + "_report.csv"));
        CellResult cell{r, p, results.size(), confusion(results), {}};
        cell.metrics = classification_metrics(cell.counts);
        return cell;
      }));
    }
  }
  std::vector<CellResult> cells;
  for (auto& j : jobs) cells.push_back(j.get());

  std::ofstream summary(fs::path(out_dir) / "summary.csv", std::ios::binary);
  if (!summary) throw IoError("cannot write summary.csv");
  summary << "yaw_rate,pitch,frames,tp,fp,fn,tn,precision,recall,f1\n";
  out << "perception " << describe(pc) << "\n"
      << std::left << std::setw(10) << "yaw_rate" << std::setw(9) << "pitch" << std::setw(9) << "f1"
      << std::setw(11) << "precision" << "recall\n";
  for (const auto& c : cells) {
    summary << format_real(c.yaw_rate) << ',' << to_string(c.pitch) << ',' << c.frames << ',' << c.counts.tp << ','
            << c.counts.fp << ',' << c.counts.fn << ',' << c.counts.tn << ',' << format_metric(c.metrics.precision)
            << ',' << format_metric(c.metrics.recall) << ',' << format_metric(c.metrics.f1) << '\n';
    out << std::left << std::setw(10) << format_real(c.yaw_rate) << std::setw(9) << to_string(c.pitch)
        << std::setw(9) << format_metric(c.metrics.f1) << std::setw(11) << format_metric(c.metrics.precision)
        << format_metric(c.metrics.recall) << '\n';
  }
  return kExitOk;
}

int cmd_timesync(const std::string& a_path, const std::string& b_path, double window, std::ostream& out) {
  require_file(a_path, "gyro log");
  require_file(b_path, "gyro log");
  if (!(window > 0.0)) throw UsageError("--window must be positive");
  const auto a = read_gyro_csv(fs::path(a_path));
  const auto b = read_gyro_csv(fs::path(b_path));
  try {
    a.validate();
    b.validate();
  } catch (const InvalidArgument& e) {
    throw DataError(e.what());
  }
  const TimeOffset r = estimate_time_offset(a, b, window);
  out << "offset " << std::setprecision(9) << r.offset << " s (grid " << r.grid_offset << " s, step " << r.step
      << " s)\n";
  return kExitOk;
}

int cmd_ingest(const std::vector<std::string>& args, const std::string& log_path, const std::string& ego,
               const std::string& pitch_text, double frame_rate, const std::string& config_path,
               const std::string& out_dir, std::ostream& out) {
  require_file(log_path, "pose log");
  if (!(frame_rate > 0.0)) throw UsageError("--frame-rate must be positive");
  ScenarioConfig cfg;
  std::string config_text;
  if (!config_path.empty()) {
    require_file(config_path, "config");
    const auto kv = KeyValueConfig::load(config_path);
    cfg = scenario_from_config(kv);
    config_text = kv.to_text();
  }
  CameraPitch pitch;
  try {
    pitch = parse_camera_pitch(pitch_text);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  ensure_dir(out_dir);
  write_manifest(out_dir, {"ingest", args, config_path, config_text, 0, {"dataset.jsonl"}});

  const auto tracks = ingest_pose_log(fs::path(log_path), [&](const std::string& w) { out << "warning: " << w << '\n'; });
  double start = 0.0;
  double end = std::numeric_limits<double>::infinity();
  for (const auto& t : tracks) {
    if (t.samples.size() < 2) throw DataError("track " + t.robot_id + " has fewer than two samples");
    start = std::max(start, t.start_time());
    end = std::min(end, t.end_time());
  }
  if (tracks.empty() || !(end > start)) throw DataError("pose tracks do not overlap in time");
  std::vector<double> frames;
  for (double t : frame_schedule(frame_rate, end - start)) frames.push_back(start + t);
  const CameraModel camera = CameraModel::mounted(cfg.intrinsics, pitch);
  const std::string ego_id = ego.empty() ? tracks.front().robot_id : ego;
  const Dataset d = build_dataset(tracks, ego_id, camera, frames, cfg.geometry, cfg.ellipsoid);
  write_dataset(d, fs::path(out_dir) / "dataset.jsonl");
  out << tracks.size() << " tracks, " << d.records.size() << " frames from camera robot " << ego_id << '\n';
  return kExitOk;
}

std::vector<std::string> replace_out(std::vector<std::string> args, const std::string& out_dir) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out" && i + 1 < args.size()) {
      args[i + 1] = out_dir;
      return args;
    }
    if (args[i].rfind("--out=", 0) == 0) {
      args[i] = "--out=" + out_dir;
      return args;
    }
  }
  args.push_back("--out");
  args.push_back(out_dir);
  return args;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spinning-camera multi-robot perception toolkit", "spincam"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolkitVersion);

  std::string config_path, out_dir, labels;
  std::optional<std::uint64_t> sim_seed;
  auto* sim = app.add_subcommand("simulate", "Generate a scenario and its annotated dataset");
  sim->add_option("--config", config_path, "Scenario config (key = value)")->required();
  sim->add_option("--out", out_dir, "Output directory")->required();
  sim->add_option("--seed", sim_seed, "Override the config seed");
  sim->add_option("--labels", labels, "Also export labels: bbox or grid")->check(CLI::IsMember({"bbox", "grid"}));

  std::string dataset_path, ellipsoid_text;
  PerceptionOptions eval_opts;
  auto* ev = app.add_subcommand("downwash-eval", "Belief-set downwash prediction on a dataset");
  ev->add_option("--dataset", dataset_path, "Dataset file")->required();
  ev->add_option("--ellipsoid", ellipsoid_text, "Ellipsoid radii rx,ry,rz (default: the dataset header, normally 0.15,0.15,0.3)");
  ev->add_option("--out", out_dir, "Output directory")->required();
  eval_opts.attach(ev);

  std::string bench_config, datasets_dir, rates_text = "2,4,6,8", pitches_text = "forward,tilt45,up";
  PerceptionOptions bench_opts;
  auto* bench = app.add_subcommand("benchmark", "Downwash prediction over a yaw-rate x camera-pitch matrix");
  bench->add_option("--config", bench_config, "Base scenario config; every cell is simulated from it");
  bench->add_option("--datasets", datasets_dir, "Directory of swap_yaw<rate>_<pitch>.jsonl datasets");
  bench->add_option("--yaw-rates", rates_text, "Comma-separated yaw rates in rad/s");
  bench->add_option("--pitches", pitches_text, "Comma-separated camera pitches");
  bench->add_option("--ellipsoid", ellipsoid_text, "Ellipsoid radii rx,ry,rz");
  bench->add_option("--out", out_dir, "Output directory")->required();
  bench_opts.attach(bench);

  std::string log_a, log_b;
  double window = 0.1;
  auto* ts = app.add_subcommand("timesync", "Estimate the clock offset between two gyro logs");
  ts->add_option("--a", log_a, "Reference gyro CSV (t,wx,wy,wz)")->required();
  ts->add_option("--b", log_b, "Second gyro CSV")->required();
  ts->add_option("--window", window, "Search window in seconds");

  std::string log_path, ego, pitch_text = "up";
  double frame_rate = 6.0;
  auto* ing = app.add_subcommand("ingest", "Annotate frames from an external pose log");
  ing->add_option("--log", log_path, "Pose CSV (robot_id,t,x,y,z,qw,qx,qy,qz)")->required();
  ing->add_option("--ego", ego, "Camera robot id (default: first in the log)");
  ing->add_option("--pitch", pitch_text, "Camera pitch: forward, tilt45 or up");
  ing->add_option("--frame-rate", frame_rate, "Frames per second");
  ing->add_option("--config", config_path, "Config supplying intrinsics, geometry and ellipsoid");
  ing->add_option("--out", out_dir, "Output directory")->required();

  std::string manifest_path, replay_out;
  auto* rep = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  rep->add_option("--manifest", manifest_path, "manifest.json of an earlier run")->required();
  rep->add_option("--out", replay_out, "Write to this directory instead of the recorded one");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sim) return cmd_simulate(args, config_path, out_dir, sim_seed, labels, out);
    if (*ev) return cmd_downwash_eval(args, dataset_path, eval_opts, ellipsoid_text, out_dir, out);
    if (*bench) {
      return cmd_benchmark(args, bench_config, datasets_dir, rates_text, pitches_text, bench_opts, ellipsoid_text,
                           out_dir, out);
    }
    if (*ts) return cmd_timesync(log_a, log_b, window, out);
    if (*ing) return cmd_ingest(args, log_path, ego, pitch_text, frame_rate, config_path, out_dir, out);
    if (*rep) {
      require_file(manifest_path, "manifest");
      json j;
      try {
        j = json::parse(read_text(manifest_path));
      } catch (const json::exception& e) {
        throw DataError(std::string("malformed manifest: ") + e.what());
      }
      auto recorded = j.at("args").get<std::vector<std::string>>();
      if (!recorded.empty() && recorded.front() == "replay") throw UsageError("refusing to replay a replay");
      if (!replay_out.empty()) recorded = replace_out(recorded, replay_out);
      return run(recorded, out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace spincam::cli
