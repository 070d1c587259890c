#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spincam/errors.hpp"
#include "spincam/eval.hpp"
#include "support/oracles.hpp"

using namespace spincam;

TEST(Success, CardinalityOnly) {
  EXPECT_TRUE(success(0, 0));
  EXPECT_FALSE(success(2, 3));
  EXPECT_TRUE(success(4, 4));
  const std::vector<Vec3> a{{0, 0, 1}}, b{{0, 0, 1.05}};
  EXPECT_TRUE(success_within(a, b, 0.1));
  EXPECT_FALSE(success_within(a, b, 0.01));
}

TEST(Hungarian, Examples) {
  Eigen::MatrixXd one(1, 1);
  one << 5;
  const auto r1 = hungarian(one);
  ASSERT_EQ(r1.pairs.size(), 1u);
  EXPECT_EQ(r1.pairs[0], std::make_pair(std::size_t{0}, std::size_t{0}));
  EXPECT_EQ(r1.total_cost, 5);

  Eigen::MatrixXd two(2, 2);
  two << 1, 2, 2, 4;
  const auto r2 = hungarian(two);
  ASSERT_EQ(r2.pairs.size(), 2u);
  EXPECT_EQ(r2.pairs[0], std::make_pair(std::size_t{0}, std::size_t{1}));
  EXPECT_EQ(r2.pairs[1], std::make_pair(std::size_t{1}, std::size_t{0}));
  EXPECT_DOUBLE_EQ(r2.total_cost, 4);
  EXPECT_DOUBLE_EQ(oracle::brute_force_assignment(two), 4);

  EXPECT_TRUE(hungarian(Eigen::MatrixXd(0, 0)).pairs.empty());
  EXPECT_TRUE(hungarian(Eigen::MatrixXd(0, 3)).pairs.empty());
}

TEST(Hungarian, RectangularMatchesBruteForce) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0, 10);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 5;
    const int m = 1 + (trial / 5) % 5;
    Eigen::MatrixXd c(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) c(i, j) = u(rng);
    const auto r = hungarian(c);
    EXPECT_EQ(r.pairs.size(), static_cast<std::size_t>(std::min(n, m)));
    EXPECT_NEAR(r.total_cost, oracle::brute_force_assignment(c), 1e-9);
    double sum = 0;
    std::vector<bool> used_col(m, false);
    for (auto [i, j] : r.pairs) {
      EXPECT_FALSE(used_col[j]);
      used_col[j] = true;
      sum += c(static_cast<int>(i), static_cast<int>(j));
    }
    EXPECT_NEAR(sum, r.total_cost, 1e-12);
    EXPECT_EQ(r.unmatched_rows + r.pairs.size(), static_cast<std::size_t>(n));
    EXPECT_EQ(r.unmatched_cols + r.pairs.size(), static_cast<std::size_t>(m));
  }
}

TEST(Hungarian, RejectsNonFinite) {
  Eigen::MatrixXd c(2, 2);
  c << 1, NAN, 2, 3;
  EXPECT_THROW(hungarian(c), InvalidArgument);
}

TEST(PositionErrors, Examples) {
  const std::vector<Vec3> same{{0, 0, 1}, {1, 0, 2}};
  for (double e : position_errors(same, same)) EXPECT_EQ(e, 0);
  const std::vector<Vec3> p{{0, 0, 1}}, g{{0, 0, 2}};
  const auto e = position_errors(p, g);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_DOUBLE_EQ(e[0], 1.0);
  EXPECT_THROW(position_errors(p, same), CardinalityMismatch);
}

TEST(PositionErrors, BeatsGreedyOnCrossing) {
  // Greedy would pair pred 0 with gt 0 (distance 0.9) and leave pred 1 with
  // gt 1 far away; the optimum swaps them.
  const std::vector<Vec3> pred{{0, 0, 0}, {1.0, 0, 0}};
  const std::vector<Vec3> gt{{0.9, 0, 0}, {-1.0, 0, 0}};
  const auto e = position_errors(pred, gt);
  double total = 0;
  for (double x : e) total += x;
  Eigen::MatrixXd c(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c(i, j) = (pred[i] - gt[j]).norm();
  EXPECT_NEAR(total, oracle::brute_force_assignment(c), 1e-12);
  EXPECT_NEAR(total, 1.1, 1e-12);
}

TEST(PositionErrors, PermutationInvariant) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<Vec3> p, g;
  for (int i = 0; i < 5; ++i) {
    p.emplace_back(u(rng), u(rng), u(rng));
    g.emplace_back(u(rng), u(rng), u(rng));
  }
  auto a = position_errors(p, g);
  std::shuffle(p.begin(), p.end(), rng);
  std::shuffle(g.begin(), g.end(), rng);
  auto b = position_errors(p, g);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(ErrorDistribution, QuartilesAndWhiskers) {
  const auto d = summarize_errors({5, 1, 3, 2, 4, 100});
  EXPECT_DOUBLE_EQ(d.q1, 2.25);
  EXPECT_DOUBLE_EQ(d.median, 3.5);
  EXPECT_DOUBLE_EQ(d.q3, 4.75);
  EXPECT_DOUBLE_EQ(d.whisker_low, 1);
  EXPECT_DOUBLE_EQ(d.whisker_high, 5);
  ASSERT_EQ(d.outliers.size(), 1u);
  EXPECT_EQ(d.outliers[0], 100);
  EXPECT_NEAR(d.mean, 115.0 / 6, 1e-12);
  EXPECT_TRUE(std::isnan(summarize_errors({}).median));

  std::mt19937_64 rng(4);
  std::exponential_distribution<double> ex(3);
  std::vector<double> s(501);
  for (double& x : s) x = ex(rng);
  const auto r = summarize_errors(s);
  EXPECT_LE(r.q1, r.median);
  EXPECT_LE(r.median, r.q3);
  EXPECT_LE(r.whisker_low, r.q1);
  EXPECT_GE(r.whisker_high, r.q3);
}

TEST(Metrics, Examples) {
  const auto m = classification_metrics({2, 1, 1, 0});
  EXPECT_DOUBLE_EQ(m.precision, 2.0 / 3);
  EXPECT_DOUBLE_EQ(m.recall, 2.0 / 3);
  EXPECT_DOUBLE_EQ(m.f1, 2.0 / 3);

  const auto none = classification_metrics({0, 0, 5, 10});
  EXPECT_TRUE(std::isnan(none.precision));
  EXPECT_EQ(none.recall, 0);
  EXPECT_EQ(none.f1, 0);

  const auto perfect = classification_metrics({7, 0, 0, 3});
  EXPECT_EQ(perfect.precision, 1);
  EXPECT_EQ(perfect.recall, 1);
  EXPECT_EQ(perfect.f1, 1);
}

TEST(Metrics, F1BetweenPrecisionAndRecall) {
  for (std::size_t tp = 1; tp < 6; ++tp)
    for (std::size_t fp = 0; fp < 6; ++fp)
      for (std::size_t fn = 0; fn < 6; ++fn) {
        const auto m = classification_metrics({tp, fp, fn, 0});
        EXPECT_LE(std::min(m.precision, m.recall), m.f1 + 1e-15);
        EXPECT_GE(std::max(m.precision, m.recall), m.f1 - 1e-15);
      }
}

TEST(Metrics, ConfusionFromResults) {
  const std::vector<DownwashFrameResult> r{{0, 0, true, true}, {1, 0, true, false}, {2, 0, false, true}, {3, 0, false, false}};
  const auto c = confusion(r);
  EXPECT_EQ(c.tp, 1u);
  EXPECT_EQ(c.fn, 1u);
  EXPECT_EQ(c.fp, 1u);
  EXPECT_EQ(c.tn, 1u);
}
