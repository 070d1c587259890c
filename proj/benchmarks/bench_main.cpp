#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "spincam/spincam.hpp"

using namespace spincam;

static void BM_Hungarian(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::MatrixXd c(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c(i, j) = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(hungarian(c));
  state.SetComplexityN(n);
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(2)->Range(4, 128)->Complexity();

static void BM_AnnotateFrame(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::random_waypoint;
  cfg.num_robots = static_cast<int>(state.range(0));
  cfg.arena_min = {-3, -3, 0.2};
  cfg.arena_max = {3, 3, 2.5};
  cfg.duration = 5;
  const Scenario s = generate_scenario(cfg);
  const CameraModel cam = CameraModel::mounted(cfg.intrinsics, CameraPitch::tilt45);
  const Pose ego = interpolate_pose(s.tracks[0], 2.0);
  std::vector<RobotPose> others;
  for (std::size_t i = 1; i < s.tracks.size(); ++i) others.push_back({s.tracks[i].robot_id, interpolate_pose(s.tracks[i], 2.0)});
  for (auto _ : state) benchmark::DoNotOptimize(annotate_frame(ego, others, cam, cfg.geometry));
}
BENCHMARK(BM_AnnotateFrame)->Arg(2)->Arg(3)->Arg(4);

static void BM_DownwashEvalSwap(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.duration = 60;
  cfg.swap_count = 6;
  const Scenario s = generate_scenario(cfg);
  const CameraModel cam = CameraModel::mounted(cfg.intrinsics, cfg.camera_pitch);
  const auto times = frame_schedule(cfg);
  const auto frames = build_eval_frames(s.tracks, s.camera_robot, cam, times, cfg.geometry);
  PerceptionConfig pc;
  pc.mode = static_cast<PerceptionMode>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_downwash_frames(frames, cam, pc, cfg.ellipsoid, cfg.geometry));
  state.SetLabel(std::string(to_string(pc.mode)));
}
BENCHMARK(BM_DownwashEvalSwap)
    ->Arg(static_cast<int>(PerceptionMode::oracle))
    ->Arg(static_cast<int>(PerceptionMode::box))
    ->Arg(static_cast<int>(PerceptionMode::grid));

static void BM_TimeOffset(benchmark::State& state) {
  GyroSequence a, b;
  for (int i = 0; i <= 2000; ++i) {
    const double t = i / 1000.0;
    a.t.push_back(t);
    b.t.push_back(t);
    a.rate.emplace_back(std::sin(3 * t), std::exp(-50 * (t - 1) * (t - 1)), 0);
    b.rate.emplace_back(std::sin(3 * (t - 0.02)), std::exp(-50 * (t - 1.02) * (t - 1.02)), 0);
  }
  for (auto _ : state) benchmark::DoNotOptimize(estimate_time_offset(a, b, 0.1));
}
BENCHMARK(BM_TimeOffset);
BENCHMARK_MAIN();
