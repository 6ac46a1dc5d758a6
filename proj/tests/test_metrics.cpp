#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "helssvr/errors.hpp"
#include "helssvr/eval/metrics.hpp"
#include "helssvr/random.hpp"

namespace helssvr {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const double x : v) out(i++) = x;
  return out;
}

TEST(Metrics, PerfectFit) {
  const Vector y = vec({1.0, -2.0, 3.5});
  const MetricsReport m = compute_metrics(y, y);
  EXPECT_EQ(m.rmse, 0.0);
  EXPECT_EQ(m.mae, 0.0);
  ASSERT_TRUE(m.error_pos.has_value());
  EXPECT_EQ(*m.error_pos, 0.0);
  EXPECT_FALSE(m.error_neg.has_value());
  EXPECT_EQ(m.n_pos, 3u);
}

TEST(Metrics, TwoPoint) {
  const MetricsReport m = compute_metrics(vec({0.0, 0.0}), vec({1.0, -1.0}));
  EXPECT_EQ(m.rmse, 1.0);
  EXPECT_EQ(m.mae, 1.0);
  EXPECT_EQ(*m.error_pos, 1.0);
  EXPECT_EQ(*m.error_neg, 1.0);
  EXPECT_EQ(m.n_pos, 1u);
  EXPECT_EQ(m.n_neg, 1u);
}

TEST(Metrics, OnePoint) {
  const MetricsReport m = compute_metrics(vec({3.0}), vec({1.0}));
  EXPECT_EQ(m.rmse, 2.0);
  EXPECT_EQ(m.mae, 2.0);
  EXPECT_EQ(*m.error_pos, 2.0);
  EXPECT_FALSE(m.error_neg.has_value());
}

TEST(Metrics, GroupsNormalizedSeparately) {
  const MetricsReport m = compute_metrics(vec({1.0, 1.0, 1.0}), vec({0.0, 0.5, 4.0}));
  EXPECT_DOUBLE_EQ(*m.error_pos, 0.75);
  EXPECT_DOUBLE_EQ(*m.error_neg, 3.0);
  EXPECT_DOUBLE_EQ(m.mae, 4.5 / 3.0);
}

TEST(Metrics, Errors) {
  EXPECT_THROW(compute_metrics(vec({1.0}), vec({1.0, 2.0})), ShapeError);
  EXPECT_THROW(compute_metrics(Vector(0), Vector(0)), DomainError);
}

TEST(MetricsProperty, MaeAtMostRmse) {
  Rng rng(1);
  for (int rep = 0; rep < 10000; ++rep) {
    const auto n = static_cast<Eigen::Index>(1 + rng.below(30));
    Vector y(n), f(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      y(i) = rng.uniform(-10, 10);
      f(i) = rng.uniform(-10, 10);
    }
    const MetricsReport m = compute_metrics(y, f);
    ASSERT_LE(m.mae, m.rmse * (1.0 + 1e-15));
    ASSERT_EQ(m.n_pos + m.n_neg, static_cast<std::size_t>(n));
  }
}

TEST(MetricsProperty, PermutationInvariant) {
  Rng rng(2);
  for (int rep = 0; rep < 200; ++rep) {
    const Eigen::Index n = 17;
    Vector y(n), f(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      y(i) = rng.uniform(-1, 1);
      f(i) = rng.uniform(-1, 1);
    }
    std::vector<std::size_t> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    partial_shuffle(perm, perm.size(), rng);
    Vector yp(n), fp(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      yp(i) = y(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]));
      fp(i) = f(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]));
    }
    const MetricsReport a = compute_metrics(y, f), b = compute_metrics(yp, fp);
    ASSERT_NEAR(a.rmse, b.rmse, 1e-14);
    ASSERT_NEAR(a.mae, b.mae, 1e-14);
    ASSERT_EQ(a.n_pos, b.n_pos);
  }
}

}  // namespace
}  // namespace helssvr
