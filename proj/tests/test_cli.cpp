#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "spincam/dataset.hpp"

namespace fs = std::filesystem;
using spincam::cli::run;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("spincam_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  int call(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

const char* kSwap = "kind = swap\nduration = 20\nswap_count = 2\ncamera_pitch = up\n";

}  // namespace

TEST_F(CliTest, SimulateWritesManifestAndDataset) {
  const std::string cfg = write("swap.cfg", kSwap);
  ASSERT_EQ(call({"simulate", "--config", cfg, "--out", path("a"), "--labels", "bbox"}), 0) << err_.str();
  EXPECT_TRUE(fs::exists(path("a/manifest.json")));
  EXPECT_TRUE(fs::exists(path("a/labels_bbox.jsonl")));
  EXPECT_TRUE(fs::exists(path("a/tracks.csv")));
  const auto d = spincam::read_dataset(fs::path(path("a/dataset.jsonl")));
  std::size_t positives = 0;
  for (const auto& f : spincam::eval_frames(d)) {
    for (const auto& o : f.others) positives += spincam::in_downwash(o.pose.position(), f.ego.position(), d.header.ellipsoid);
  }
  EXPECT_GE(positives, 1u);
  const std::string manifest = slurp(path("a/manifest.json"));
  EXPECT_NE(manifest.find("\"toolkit_version\""), std::string::npos);
  EXPECT_NE(manifest.find("swap_count = 2"), std::string::npos);

  ASSERT_EQ(call({"simulate", "--config", cfg, "--out", path("b")}), 0);
  EXPECT_EQ(slurp(path("a/dataset.jsonl")), slurp(path("b/dataset.jsonl")));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(call({"simulate", "--config", write("bad.cfg", "kind = swap\nnum_robots = 3\n"), "--out", path("x")}), 2);
  EXPECT_EQ(call({"simulate", "--config", path("missing.cfg"), "--out", path("x")}), 2);
  EXPECT_EQ(call({"simulate", "--out", path("x")}), 2);
  EXPECT_EQ(call({"frobnicate"}), 2);
  EXPECT_EQ(call({}), 2);
  EXPECT_EQ(call({"--help"}), 0);
  EXPECT_EQ(call({"downwash-eval", "--dataset", path("none.jsonl"), "--oracle", "--out", path("x")}), 2);
  EXPECT_EQ(call({"downwash-eval", "--dataset", write("broken.jsonl", "{not json\n"), "--oracle", "--out", path("x")}), 3);
  EXPECT_EQ(call({"benchmark", "--datasets", path("nowhere"), "--oracle", "--out", path("x")}), 2);
  EXPECT_EQ(call({"downwash-eval", "--dataset", path("none.jsonl"), "--ellipsoid", "1,2", "--out", path("x")}), 2);
}

TEST_F(CliTest, EvalOracleUpAndForward) {
  const std::string cfg = write("swap.cfg", kSwap);
  ASSERT_EQ(call({"simulate", "--config", cfg, "--out", path("up")}), 0);
  ASSERT_EQ(call({"downwash-eval", "--dataset", path("up/dataset.jsonl"), "--oracle", "--out", path("up_eval")}), 0) << err_.str();
  auto report = spincam::read_report(fs::path(path("up_eval/report.csv")));
  EXPECT_GE(report.metrics.f1, 0.95);
  EXPECT_NE(out_.str().find("f1 1.0000"), std::string::npos) << out_.str();

  const std::string fcfg = write("forward.cfg", "kind = swap\nduration = 20\nswap_count = 2\ncamera_pitch = forward\n");
  ASSERT_EQ(call({"simulate", "--config", fcfg, "--out", path("fw")}), 0);
  ASSERT_EQ(call({"downwash-eval", "--dataset", path("fw/dataset.jsonl"), "--oracle", "--out", path("fw_eval")}), 0);
  report = spincam::read_report(fs::path(path("fw_eval/report.csv")));
  EXPECT_LT(report.metrics.f1, 0.5);
}

TEST_F(CliTest, EvalEmptyDataset) {
  std::ofstream d(path("empty.jsonl"));
  spincam::write_dataset(spincam::Dataset{}, d);
  d.close();
  ASSERT_EQ(call({"downwash-eval", "--dataset", path("empty.jsonl"), "--oracle", "--out", path("e")}), 0) << err_.str();
  EXPECT_TRUE(spincam::read_report(fs::path(path("e/report.csv"))).rows.empty());
}

TEST_F(CliTest, NoisyEvalReplaysByteIdentically) {
  const std::string cfg = write("swap.cfg", kSwap);
  const std::string noise = write("noise.cfg", "pixel_sigma = 2\nmiss_rate = 0.2\nseed = 5\n");
  ASSERT_EQ(call({"simulate", "--config", cfg, "--out", path("s")}), 0);
  ASSERT_EQ(call({"downwash-eval", "--dataset", path("s/dataset.jsonl"), "--noise", noise, "--detector", "grid", "--out", path("r1")}), 0) << err_.str();
  ASSERT_EQ(call({"replay", "--manifest", path("r1/manifest.json"), "--out", path("r2")}), 0) << err_.str();
  EXPECT_EQ(slurp(path("r1/report.csv")), slurp(path("r2/report.csv")));
  EXPECT_EQ(call({"downwash-eval", "--dataset", path("s/dataset.jsonl"), "--noise", noise, "--oracle", "--out", path("r3")}), 2);
}

TEST_F(CliTest, BenchmarkTableShape) {
  const std::string cfg = write("swap.cfg", kSwap);
  ASSERT_EQ(call({"benchmark", "--config", cfg, "--oracle", "--out", path("bench")}), 0) << err_.str();
  std::ifstream in(path("bench/summary.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 12);

  ASSERT_EQ(call({"benchmark", "--datasets", path("bench"), "--yaw-rates", "4", "--pitches", "up", "--oracle", "--out", path("one")}), 0) << err_.str();
  std::ifstream one(path("one/summary.csv"));
  rows = -1;
  while (std::getline(one, line)) ++rows;
  EXPECT_EQ(rows, 1);
  EXPECT_EQ(slurp(path("bench/swap_yaw4_up_report.csv")), slurp(path("one/swap_yaw4_up_report.csv")));
}

TEST_F(CliTest, TimeSync) {
  auto gyro = [&](const std::string& name, double shift, double start, double end) {
    std::ofstream f(path(name));
    f << "t,wx,wy,wz\n";
    for (int i = static_cast<int>(start * 1000); i <= static_cast<int>(end * 1000); ++i) {
      const double t = i / 1000.0;
      const double s = t - shift;
      f << t << ',' << std::exp(-0.5 * (s - 0.5) * (s - 0.5) / 4e-4) << ',' << std::sin(4 * s) << ",0\n";
    }
    return path(name);
  };
  const std::string a = gyro("a.csv", 0, 0, 1);
  const std::string b = gyro("b.csv", 0.02, 0, 1);
  ASSERT_EQ(call({"timesync", "--a", a, "--b", b}), 0) << err_.str();
  ASSERT_EQ(out_.str().rfind("offset ", 0), 0u) << out_.str();
  EXPECT_NEAR(std::stod(out_.str().substr(7)), 0.02, 1e-4);
  const std::string far = gyro("far.csv", 0, 10, 11);
  EXPECT_EQ(call({"timesync", "--a", a, "--b", far}), 3);
}

TEST_F(CliTest, IngestPoseLog) {
  std::ofstream log(path("log.csv"));
  log << "robot_id,t,x,y,z,qw,qx,qy,qz\n";
  for (int i = 0; i <= 100; ++i) {
    log << "cf0," << i * 0.01 << ",0,0,0.5,1,0,0,0\n";
    log << "cf1," << i * 0.01 << ",0.05,0,1.0,1,0,0,0\n";
  }
  log.close();
  ASSERT_EQ(call({"ingest", "--log", path("log.csv"), "--ego", "cf0", "--out", path("ing")}), 0) << err_.str();
  const auto d = spincam::read_dataset(fs::path(path("ing/dataset.jsonl")));
  ASSERT_EQ(d.records.size(), 7u);
  ASSERT_EQ(d.records[0].annotation.neighbors.size(), 1u);
  EXPECT_NEAR(d.records[0].annotation.neighbors[0].rel_position.z(), 0.5, 1e-12);
}
