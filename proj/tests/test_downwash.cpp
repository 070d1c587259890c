#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spincam/downwash.hpp"
#include "spincam/errors.hpp"
#include "spincam/scenario.hpp"

using namespace spincam;

namespace {

const EllipsoidSpec kE{0.15, 0.15, 0.3};

// Camera at the world origin looking along +z; only points with z > 0 are in
// view. Stands in for the projection test so the trace below is easy to
// follow by hand.
bool in_front(const Vec3& p) { return p.z() > 0; }

std::vector<PositionEstimate> at(std::initializer_list<Vec3> pts) {
  std::vector<PositionEstimate> out;
  for (const Vec3& p : pts) out.push_back({p, EstimateSource::oracle});
  return out;
}

}  // namespace

TEST(Ellipsoid, MarginExamples) {
  EXPECT_DOUBLE_EQ(ellipsoid_margin({0, 0, 0.6}, Vec3::Zero(), kE), 2.0);
  EXPECT_FALSE(in_downwash({0, 0, 0.6}, Vec3::Zero(), kE));
  EXPECT_EQ(ellipsoid_margin(Vec3::Zero(), Vec3::Zero(), kE), 0.0);
  EXPECT_NEAR(ellipsoid_margin({0.15, 0, 0.15}, Vec3::Zero(), kE), std::sqrt(1.25), 1e-15);
  EXPECT_TRUE(in_downwash({0.15, 0, 0.15}, Vec3::Zero(), kE));
}

TEST(Ellipsoid, SymmetryScalingAndSphere) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 100; ++i) {
    const Vec3 a(u(rng), u(rng), u(rng));
    const Vec3 b(u(rng), u(rng), u(rng));
    EXPECT_EQ(ellipsoid_margin(a, b, kE), ellipsoid_margin(b, a, kE));
    EXPECT_NEAR(ellipsoid_margin(a, b, {0.3, 0.3, 0.6}), 0.5 * ellipsoid_margin(a, b, kE), 1e-12);
    const double r = 0.2;
    EXPECT_NEAR(ellipsoid_margin(a, b, {r, r, r}) * r, (a - b).norm(), 1e-12);
    EXPECT_EQ(in_downwash(a, b, {r, r, r}), (a - b).norm() < 2 * r);
  }
  EXPECT_ANY_THROW((EllipsoidSpec{0, 1, 1}.validate()));
}

TEST(Belief, EmptyStaysEmpty) {
  const BeliefSet b = update_belief({}, 0, RigidTransform::identity(), in_front, {});
  EXPECT_TRUE(b.empty());
}

TEST(Belief, OutOfViewPersists) {
  BeliefSet b;
  b.beliefs.push_back({{0, 0, -1}, 0});
  const BeliefSet n = update_belief(b, 1, RigidTransform::identity(), in_front, {});
  ASSERT_EQ(n.size(), 1u);
  EXPECT_EQ(n.beliefs[0].position, Vec3(0, 0, -1));
}

TEST(Belief, ThreeFrameTrace) {
  // Frame 0: one prediction straight ahead.
  BeliefSet b = update_belief({}, 0, RigidTransform::identity(), in_front, at({{0, 0, 2}}));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b.beliefs[0].position, Vec3(0, 0, 2));

  // Frame 1: the old belief is in view and the robot is seen elsewhere.
  b = update_belief(b, 1, RigidTransform::identity(), in_front, at({{0.5, 0, 2}}));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b.beliefs[0].position, Vec3(0.5, 0, 2));
  EXPECT_EQ(b.beliefs[0].born_at, 1);

  // Frame 2: the camera is turned around (half turn about y, shifted to
  // x = 1); the belief is now behind it and must stay. A new robot is seen 1 m
  // ahead of the camera, which in the world is at (1, 0, -1).
  const RigidTransform turned{Quat(Eigen::AngleAxisd(std::numbers::pi, Vec3::UnitY())), {1, 0, 0}};
  const VisibilityTest turned_view = [&](const Vec3& w) { return turned.inverse().apply(w).z() > 0; };
  b = update_belief(b, 2, turned, turned_view, at({{0, 0, 1}}));
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b.beliefs[0].position, Vec3(0.5, 0, 2));
  EXPECT_LT((b.beliefs[1].position - Vec3(1, 0, -1)).norm(), 1e-12);
}

TEST(Belief, NearbyPredictionSupersedesHiddenBelief) {
  BeliefSet b;
  b.beliefs.push_back({{0, 0, -1}, 0});
  const BeliefSet n = update_belief(b, 1, RigidTransform::identity(), [](const Vec3&) { return false; },
                                    at({{0.05, 0, -1}}));
  ASSERT_EQ(n.size(), 1u);
  EXPECT_EQ(n.beliefs[0].position, Vec3(0.05, 0, -1));
}

TEST(Prediction, Examples) {
  EXPECT_FALSE(predict_downwash({}, Vec3::Zero(), kE));
  BeliefSet over;
  over.beliefs.push_back({{0, 0, 1.2}, 0});
  EXPECT_NEAR(ellipsoid_margin({0, 0, 1.2}, {0, 0, 1.0}, kE), 0.2 / 0.3, 1e-12);
  EXPECT_TRUE(predict_downwash(over, {0, 0, 1.0}, kE));
  BeliefSet far;
  far.beliefs.push_back({{1, 1, 0}, 0});
  EXPECT_NEAR(ellipsoid_margin({1, 1, 0}, Vec3::Zero(), kE), std::sqrt(2.0) / 0.15, 1e-12);
  EXPECT_NEAR(ellipsoid_margin({1, 1, 0}, Vec3::Zero(), kE), 9.43, 5e-3);
  EXPECT_FALSE(predict_downwash(far, Vec3::Zero(), kE));
}

TEST(Prediction, Monotone) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  BeliefSet b;
  bool prev = false;
  for (int i = 0; i < 200; ++i) {
    b.beliefs.push_back({{u(rng), u(rng), u(rng)}, 0});
    const bool now = predict_downwash(b, Vec3::Zero(), kE);
    EXPECT_TRUE(now || !prev);
    prev = now;
  }
}

TEST(Evaluation, SingleRobotIsVacuous) {
  const PoseTrack only{"cf0", {{0, {Quat::Identity(), {0, 0, 1}}}, {1, {Quat::Identity(), {0, 0, 1}}}}};
  const std::vector<PoseTrack> tracks{only};
  const auto times = frame_schedule(6, 1);
  const CameraModel cam = CameraModel::mounted({}, CameraPitch::up);
  const auto r = run_downwash_eval(tracks, "cf0", cam, times, {}, kE, {});
  ASSERT_EQ(r.size(), 7u);
  for (const auto& f : r) {
    EXPECT_FALSE(f.gt_downwash);
    EXPECT_FALSE(f.pred_downwash);
  }
}

TEST(Evaluation, UpCameraCatchesSwapForwardDoesNot) {
  ScenarioConfig cfg;
  cfg.swap_count = 2;
  cfg.duration = 20;
  const Scenario s = generate_scenario(cfg);
  const auto times = frame_schedule(cfg);
  std::size_t up_tp = 0;
  std::size_t fwd_tp = 0;
  std::size_t positives = 0;
  for (auto pitch : {CameraPitch::up, CameraPitch::forward}) {
    const CameraModel cam = CameraModel::mounted({}, pitch);
    for (const auto& f : run_downwash_eval(s.tracks, s.camera_robot, cam, times, {}, kE, {})) {
      if (pitch == CameraPitch::up) positives += f.gt_downwash;
      (pitch == CameraPitch::up ? up_tp : fwd_tp) += f.gt_downwash && f.pred_downwash;
    }
  }
  EXPECT_GT(positives, 0u);
  EXPECT_EQ(up_tp, positives);
  EXPECT_LT(fwd_tp, positives);
}

TEST(Evaluation, RejectsUnsortedFrames) {
  std::vector<EvalFrame> frames(2);
  frames[0].ego.timestamp = 1;
  frames[1].ego.timestamp = 0;
  EXPECT_THROW(evaluate_downwash_frames(frames, CameraModel{}, {}, kE, {}), InvalidArgument);
}
