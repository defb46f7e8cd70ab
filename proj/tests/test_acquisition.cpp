#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hypbo/acquisition.hpp"
#include "hypbo/errors.hpp"

namespace hypbo {
namespace {

Point p1(double v) {
  Point x(1);
  x << v;
  return x;
}

double monte_carlo_ei(double mean, double sd, double incumbent, double jitter, int samples, Rng& rng) {
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) sum += std::max(mean + sd * rng.normal() - incumbent - jitter, 0.0);
  return sum / samples;
}

TEST(ExpectedImprovement, ClosedFormCases) {
  EXPECT_EQ(expected_improvement(1.0, 0.0, 1.0, 0.0), 0.0);
  EXPECT_NEAR(expected_improvement(0.0, 1.0, 0.0, 0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-12);
  EXPECT_NEAR(expected_improvement(100.0, 1.0, 0.0, 0.0), 100.0, 1e-6);
  EXPECT_EQ(expected_improvement(3.0, 0.0, 1.0, 0.5), 1.5);
}

TEST(ExpectedImprovement, AtIncumbentMatchesMonteCarlo) {
  Rng rng(1);
  EXPECT_NEAR(expected_improvement(0.0, 1.0, 0.0, 0.0), monte_carlo_ei(0.0, 1.0, 0.0, 0.0, 1000000, rng), 1e-3);
}

TEST(ExpectedImprovement, NonnegativeAndMonotoneInMean) {
  for (double sd : {0.01, 0.5, 3.0}) {
    double prev = 0.0;
    for (int i = -400; i <= 400; ++i) {
      const double ei = expected_improvement(i / 40.0, sd, 0.0, 0.1);
      ASSERT_GE(ei, 0.0);
      ASSERT_GE(ei, prev);
      prev = ei;
    }
  }
}

TEST(Maximize, PriorModelReturnsPriorEi) {
  const GPModel m = GPModel::prior(2, KernelParams::uniform(2, 1.0));
  const SearchSpace s = SearchSpace::cube(2, -1, 1);
  Rng rng(2);
  const Candidate c = maximize_acquisition(m, s, 0.5, AcquisitionSpec{}, rng);
  EXPECT_TRUE(s.contains(c.x));
  EXPECT_NEAR(c.acq_value, expected_improvement(0.0, 1.0, 0.5, 0.0), 1e-12);
}

TEST(Maximize, MidpointOfTwoObservations) {
  Dataset d;
  d.append(p1(0), 0);
  d.append(p1(2), 0);
  GPFitOptions o;
  o.optimize = false;
  const GPModel m = GPModel::condition(d, KernelParams::uniform(1, 1.0, 1e-6), o);
  const SearchSpace s = SearchSpace::cube(1, 0, 2);
  double grid_best = 0.0;
  double grid_x = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double v = acquisition_value(m, p1(2.0 * i / 1000.0), 0.0, AcquisitionSpec{});
    if (v > grid_best) {
      grid_best = v;
      grid_x = 2.0 * i / 1000.0;
    }
  }
  Rng rng(3);
  const Candidate c = maximize_acquisition(m, s, 0.0, AcquisitionSpec{}, rng);
  EXPECT_NEAR(c.x(0), 1.0, 0.15);
  EXPECT_NEAR(c.x(0), grid_x, 0.15);
  EXPECT_GE(c.acq_value, 0.99 * grid_best);
}

TEST(Maximize, GridDominanceOnRandomOneDimensionalModels) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    Dataset d;
    for (int i = 0; i < 6; ++i) d.append(p1(rng.uniform(-3, 3)), rng.uniform(-1, 1));
    GPFitOptions o;
    o.optimize = false;
    const GPModel m = GPModel::condition(d, KernelParams::uniform(1, 0.8, 1e-6), o);
    const SearchSpace s = SearchSpace::cube(1, -3, 3);
    double grid_best = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      grid_best = std::max(grid_best, acquisition_value(m, p1(-3 + 6.0 * i / 1000.0), d.y_max(), AcquisitionSpec{}));
    }
    const Candidate c = maximize_acquisition(m, s, d.y_max(), AcquisitionSpec{}, rng);
    EXPECT_GE(c.acq_value, 0.99 * grid_best) << "trial " << trial;
  }
}

TEST(Maximize, ReportedValueIsEiAtPoint) {
  Rng rng(5);
  Dataset d;
  for (int i = 0; i < 8; ++i) d.append(Eigen::Vector2d(rng.uniform(-1, 1), rng.uniform(-1, 1)), rng.uniform());
  GPFitOptions o;
  o.optimize = false;
  const GPModel m = GPModel::condition(d, KernelParams::uniform(2, 0.5, 1e-6), o);
  const SearchSpace s = SearchSpace::cube(2, -1, 1);
  const Candidate c = maximize_acquisition(m, s, d.y_max(), AcquisitionSpec{}, rng, best_points(d, 3));
  EXPECT_DOUBLE_EQ(c.acq_value, acquisition_value(m, c.x, d.y_max(), AcquisitionSpec{}));
}

TEST(Maximize, NeverLeavesHypothesis) {
  const SearchSpace s = SearchSpace::cube(2, -5, 5);
  Eigen::MatrixXd b(1, 2);
  b << 1, 1;
  const Hypothesis tri("tri", s, Eigen::MatrixXd(0, 2), Eigen::VectorXd(0), b, Eigen::VectorXd::Constant(1, -2));
  const Hypothesis box = Hypothesis::box("box", s, Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1));
  Rng rng(6);
  Dataset d;
  for (int i = 0; i < 10; ++i) d.append(s.sample_uniform(rng), rng.uniform(-1, 1));
  GPFitOptions o;
  o.optimize = false;
  const GPModel m = GPModel::condition(d, KernelParams::uniform(2, 2.0, 1e-6), o);
  AcquisitionSpec cheap;
  cheap.multistarts = 4;
  cheap.refine_steps = 8;
  for (int t = 0; t < 10000; ++t) {
    const Hypothesis& h = t % 2 ? tri : box;
    const Candidate c = maximize_acquisition(m, h, d.y_max(), cheap, rng, best_points(d, 3));
    ASSERT_TRUE(h.contains(c.x)) << t;
  }
}

TEST(Maximize, DeterministicGivenStream) {
  Dataset d;
  d.append(p1(0.2), 1);
  d.append(p1(0.9), 0.5);
  GPFitOptions o;
  o.optimize = false;
  const GPModel m = GPModel::condition(d, KernelParams::uniform(1, 0.3, 1e-6), o);
  const SearchSpace s = SearchSpace::cube(1, 0, 1);
  Rng a(7);
  Rng b(7);
  const Candidate ca = maximize_acquisition(m, s, 1.0, AcquisitionSpec{}, a);
  const Candidate cb = maximize_acquisition(m, s, 1.0, AcquisitionSpec{}, b);
  EXPECT_EQ(ca.x, cb.x);
  EXPECT_EQ(ca.acq_value, cb.acq_value);
}

TEST(AcquisitionSpec, Validates) {
  AcquisitionSpec s;
  s.multistarts = 0;
  EXPECT_THROW(s.validate(), InvalidArgument);
  s.multistarts = 1;
  s.refine_steps = -1;
  EXPECT_THROW(s.validate(), InvalidArgument);
}

TEST(BestPoints, OrdersByValue) {
  Dataset d;
  d.append(p1(0), 1);
  d.append(p1(1), 3);
  d.append(p1(2), 2);
  const auto b = best_points(d, 2);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0](0), 1.0);
  EXPECT_EQ(b[1](0), 2.0);
}

}  // namespace
}  // namespace hypbo
