#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "ctfb/errors.hpp"
#include "ctfb/filter.hpp"
#include "ctfb/gain.hpp"
#include "ctfb/sim.hpp"
#include "test_util.hpp"

using namespace ctfb;
using ctfb::testing::Gen;

namespace {

// Exact solution of delta a' = mu(t)(alpha - a) for constant alpha on [0, T].
double closed_form(double t, double alpha, double a0, double delta, double T,
                   double eps) {
  const double p = (T + eps) / delta;
  return alpha + (a0 - alpha) * std::pow((T + eps - t) / (T + eps), p);
}

// Max deviation of RK4 from the closed form on the grid over [0, T].
// With frozen_gain the gain is held at its value at the start of each step.
double max_deviation(double delta, double T, double eps, double alpha,
                     double a0, double h, bool frozen_gain) {
  GainSchedule g(T, eps);
  FilterBank bank({delta});
  Rk4 rk(1);
  double frozen = 1.0;
  OdeRhs rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    const double m = frozen_gain ? frozen : g.mu(t);
    dy[0] = bank.derivative(0, alpha, y[0], m);
  };
  std::vector<double> y{a0};
  const long steps = std::lround(T / h);
  double worst = 0.0;
  for (long k = 0; k < steps; ++k) {
    const double t = k * h;
    frozen = g.mu(t);
    rk.step(rhs, t, y, h);
    worst = std::max(worst, std::abs(y[0] - closed_form((k + 1) * h, alpha, a0,
                                                        delta, T, eps)));
  }
  return worst;
}

}  // namespace

TEST(FilterBank, KnownDerivatives) {
  FilterBank b({0.01, 0.1});
  EXPECT_DOUBLE_EQ(b.derivative(0, 1.0, 0.0, 1.0), 100.0);
  EXPECT_DOUBLE_EQ(b.derivative(1, 1.0, 0.0, 1.0), 10.0);
  EXPECT_DOUBLE_EQ(b.derivative(0, 2.0, 2.0, 5.0), 0.0);
  EXPECT_NEAR(b.derivative(0, 0.02, 0.0, 5.0), 10.0, 1e-12);
  auto v = b.derivative(std::vector<double>{1.0, 1.0},
                        std::vector<double>{0.0, 0.5}, 2.0);
  EXPECT_EQ(v, (std::vector<double>{200.0, 10.0}));
  EXPECT_THROW(b.derivative(2, 0.0, 0.0, 1.0), std::out_of_range);
}

TEST(FilterBank, RejectsInvalid) {
  EXPECT_THROW(FilterBank(std::vector<double>{}), ValidationError);
  try {
    FilterBank({0.1, 0.0});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "delta_2 must be > 0");
  }
}

// The closed form itself, validated against a very fine explicit Euler run
// that shares nothing with the library integrator.
TEST(FilterBank, ClosedFormAgainstFineEuler) {
  const double T = 2.0, eps = 0.5, delta = 0.5, alpha = 1.0, a0 = -2.0;
  const long n = 2000000;
  const double h = T / n;
  double a = a0;
  for (long k = 0; k < n; ++k) {
    const double t = k * h;
    a += h * (T + eps) / (T + eps - t) * (alpha - a) / delta;
  }
  EXPECT_NEAR(a, closed_form(T, alpha, a0, delta, T, eps), 1e-5);
}

TEST(FilterBank, Rk4MatchesClosedForm) {
  EXPECT_LE(max_deviation(0.01, 2.0, 0.5, 1.0, 0.0, 1e-4, false), 1e-6);
  EXPECT_LE(max_deviation(0.5, 2.0, 0.5, 1.0, -2.0, 1e-4, false), 1e-6);
}

// Holding mu over a step is only first-order accurate and must be caught.
TEST(FilterBank, FrozenGainDetectedByClosedForm) {
  EXPECT_GT(max_deviation(0.5, 2.0, 0.5, 1.0, -2.0, 1e-4, true), 1e-6);
}

TEST(FilterBank, ClosedFormProperty) {
  Gen gen(21);
  for (int trial = 0; trial < 25; ++trial) {
    const double T = gen.uniform(0.5, 3.0);
    const double eps = gen.uniform(0.1, 0.9) * T;
    const double delta = gen.uniform(0.05, 1.0);
    const double alpha = gen.uniform(-5.0, 5.0);
    const double a0 = gen.uniform(-5.0, 5.0);
    EXPECT_LE(max_deviation(delta, T, eps, alpha, a0, 1e-4, false), 1e-6)
        << "T=" << T << " eps=" << eps << " delta=" << delta;
  }
}

TEST(FilterBank, ContractionProperty) {
  Gen gen(3);
  FilterBank b({0.02});
  for (int trial = 0; trial < 1000; ++trial) {
    const double alpha = gen.uniform(-10, 10);
    const double a = gen.uniform(-10, 10);
    const double mu = gen.uniform(1.0, 10.0);
    const double d = b.derivative(0, alpha, a, mu);
    // The derivative always points toward alpha.
    ASSERT_GE(d * (alpha - a), 0.0);
  }
}
