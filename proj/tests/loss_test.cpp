#include <gtest/gtest.h>

#include <cmath>

#include "avocast/loss.hpp"
#include "avocast/rng.hpp"
#include "test_util.hpp"

using namespace avocast;

TEST(HuberTest, ZeroResidual) {
  Tape tape;
  TensorPtr y = Tensor::vector({1.0, -2.0, 0.5});
  TensorPtr loss = huber_loss(tape, y, y, HuberDelta(1.0));
  EXPECT_EQ(loss->value(), 0.0);
}

TEST(HuberTest, BranchesMeetAtDelta) {
  const double delta = 0.8;
  const double quadratic = 0.5 * delta * delta;
  const double linear = delta * (delta - 0.5 * delta);
  EXPECT_EQ(quadratic, linear);
  EXPECT_EQ(huber_value(delta, delta), quadratic);
  EXPECT_EQ(huber_value(-delta, delta), quadratic);
}

TEST(HuberTest, HandEvaluatedFixture) {
  Tape tape;
  TensorPtr y = Tensor::vector({0.5, 2.0});
  TensorPtr y_hat = Tensor::vector({0.0, 0.0});
  TensorPtr loss = huber_loss(tape, y, y_hat, HuberDelta(1.0));
  EXPECT_EQ(loss->value(), 0.8125);  // mean of 0.125 and 1.5, exact in binary
}

TEST(HuberTest, SymmetricInArguments) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    TensorPtr y = testutil::random_tensor(rng, {6}, false, -3.0, 3.0);
    TensorPtr y_hat = testutil::random_tensor(rng, {6}, false, -3.0, 3.0);
    Tape t1, t2;
    EXPECT_EQ(huber_loss(t1, y, y_hat, HuberDelta(0.9))->value(),
              huber_loss(t2, y_hat, y, HuberDelta(0.9))->value());
  }
}

TEST(HuberTest, BoundedByHalfSquaredResidual) {
  const double delta = 1.2;
  Rng rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    double r = rng.uniform(-5.0, 5.0);
    double h = huber_value(r, delta);
    EXPECT_LE(h, 0.5 * r * r + 1e-15);
    if (std::fabs(r) <= delta) {
      EXPECT_EQ(h, 0.5 * r * r);
    } else {
      EXPECT_LT(h, 0.5 * r * r);
    }
  }
}

TEST(HuberTest, GradientMatchesFiniteDifferencesAcrossSeam) {
  const double delta = 1.0;
  // Residuals inside, outside, and exactly on the |r| = delta seam.
  TensorPtr y = Tensor::vector({0.0, 0.0, 0.0, 0.0, 0.0});
  TensorPtr y_hat = Tensor::vector({0.3, -0.7, 1.0, -1.0, 2.5}, true);
  Tape tape;
  TensorPtr loss = huber_loss(tape, y, y_hat, HuberDelta(delta));
  backward(tape, loss);
  const auto grad = y_hat->grad();

  const double eps = 1e-7;
  for (std::size_t i = 0; i < 5; ++i) {
    auto eval = [&](double bump) {
      double total = 0.0;
      for (std::size_t j = 0; j < 5; ++j) {
        double pred = y_hat->data()[j] + (i == j ? bump : 0.0);
        total += huber_value(y->data()[j] - pred, delta);
      }
      return total / 5.0;
    };
    double numeric = (eval(eps) - eval(-eps)) / (2.0 * eps);
    EXPECT_NEAR(grad[i], numeric, 1e-6) << "element " << i;
  }
}

TEST(HuberTest, ErrorsOnBadInput) {
  Tape tape;
  EXPECT_THROW(HuberDelta(0.0), std::invalid_argument);
  EXPECT_THROW(HuberDelta(-1.0), std::invalid_argument);
  EXPECT_THROW(huber_loss(tape, Tensor::vector({1.0}), Tensor::vector({1.0, 2.0}),
                          HuberDelta(1.0)),
               std::invalid_argument);
}

TEST(MetricsTest, ZeroResidual) {
  std::vector<double> y = {1.0, 2.0, 3.0};
  EXPECT_EQ(mse(y, y), 0.0);
  EXPECT_EQ(rmse(y, y), 0.0);
}

TEST(MetricsTest, UnitResiduals) {
  std::vector<double> y = {1.0, 2.0, 3.0};
  std::vector<double> y_hat = {0.0, 1.0, 2.0};
  EXPECT_EQ(mse(y, y_hat), 1.0);
  EXPECT_EQ(rmse(y, y_hat), 1.0);
}

TEST(MetricsTest, RmseSquaredIsMse) {
  Rng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> y(12), y_hat(12);
    for (double& v : y) v = rng.uniform(-4.0, 4.0);
    for (double& v : y_hat) v = rng.uniform(-4.0, 4.0);
    double m = mse(y, y_hat);
    double r = rmse(y, y_hat);
    EXPECT_NEAR(r * r, m, 1e-12 * std::max(1.0, m));
  }
}

TEST(MetricsTest, ReportedPairIsConsistent) {
  // mse = 1.51 implies rmse = 1.2288..., which rounds to the reported 1.23.
  EXPECT_NEAR(std::sqrt(1.51), 1.23, 0.005);
  EXPECT_NEAR(1.23 * 1.23, 1.51, 0.005);
}

TEST(MetricsTest, ErrorsOnBadInput) {
  std::vector<double> y = {1.0};
  std::vector<double> two = {1.0, 2.0};
  std::vector<double> empty;
  EXPECT_THROW(mse(y, two), std::invalid_argument);
  EXPECT_THROW(mse(empty, empty), std::invalid_argument);
  EXPECT_THROW(rmse(empty, empty), std::invalid_argument);
}
