#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ctfb/errors.hpp"
#include "ctfb/plant.hpp"

using namespace ctfb;

TEST(Electromechanical, RightHandSideAtRest) {
  auto p = electromechanical_model();
  std::vector<double> x{0.0, 0.0, 0.0};
  auto dx = plant_rhs(p, x, 0.0, 0.0);
  EXPECT_EQ(dx, (std::vector<double>{0.0, 0.0, 0.0}));
  dx = plant_rhs(p, x, 2.5, 0.0);
  EXPECT_DOUBLE_EQ(dx[2], 2.5);
}

TEST(Electromechanical, RightHandSideAtBenchmarkStart) {
  auto p = electromechanical_model();
  std::vector<double> x{0.5, 0.5, 0.5};
  auto dx = plant_rhs(p, x, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(dx[0], 0.5);
  EXPECT_NEAR(dx[1], 0.5 - (3.12 / 0.064) * std::sin(0.5) - (0.02 / 0.064) * 0.5,
              1e-13);
  EXPECT_NEAR(dx[2], -(0.9 / (0.064 * 15)) * 0.5 - (5.0 / (0.064 * 15)) * 0.5,
              1e-13);
}

TEST(Electromechanical, DriftCoefficients) {
  auto p = electromechanical_model();
  const double half_pi = std::numbers::pi / 2;
  std::vector<double> x{half_pi, 0.0, 0.0};
  EXPECT_NEAR(p.f(1, x, 0.0), -48.75, 1e-12);
  x = {0.0, 1.0, 0.0};
  EXPECT_NEAR(p.f(1, x, 0.0), -0.3125, 1e-12);
  EXPECT_NEAR(p.f(2, x, 0.0), -0.9375, 1e-12);
  x = {0.0, 0.0, 1.0};
  EXPECT_NEAR(p.f(2, x, 0.0), -5.0 / (0.064 * 15.0), 1e-12);
  EXPECT_DOUBLE_EQ(p.g(0, x, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(p.g(2, x, 0.0), 1.0);
}

TEST(Electromechanical, DegeneratesToTripleIntegrator) {
  auto p = electromechanical_model({1.0, 0.0, 0.0, 0.0, 0.0, 1.0});
  std::vector<double> x{0.3, -1.2, 4.0};
  auto dx = plant_rhs(p, x, 7.0, 1.0);
  EXPECT_EQ(dx, (std::vector<double>{-1.2, 4.0, 7.0}));
}

TEST(Electromechanical, RejectsInvalidParameters) {
  EXPECT_THROW(electromechanical_model({0.0, 1, 1, 1, 1, 1}), ValidationError);
  EXPECT_THROW(electromechanical_model({1, 1, 1, 1, 1, 0.0}), ValidationError);
  EXPECT_THROW(electromechanical_model({1, -1, 1, 1, 1, 1}), ValidationError);
}

TEST(IntegratorChain, RightHandSide) {
  EXPECT_EQ(plant_rhs(integrator_chain(2), std::vector<double>{0, 0}, 0.0, 0.0),
            (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(plant_rhs(integrator_chain(3), std::vector<double>{1, 2, 3}, 4.0, 0.0),
            (std::vector<double>{2.0, 3.0, 4.0}));
  auto p = integrator_chain(4);
  std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  EXPECT_EQ(plant_rhs(p, x, -1.0, 0.0),
            (std::vector<double>{2.0, 3.0, 4.0, -1.0}));
  EXPECT_THROW(integrator_chain(1), ValidationError);
}

TEST(PlantModel, ControllabilityLoss) {
  std::vector<StateFunction> g{
      [](std::span<const double>, double) { return 1.0; },
      [](std::span<const double> x, double) { return x[0]; }};
  std::vector<StateFunction> f(2, [](std::span<const double>, double) {
    return 0.0;
  });
  PlantModel p("degenerate", g, f, 1e-3);
  std::vector<double> x{1e-4, 0.0}, go(2), fo(2);
  try {
    p.evaluate(x, 0.5, go, fo);
    FAIL();
  } catch (const ControllabilityLoss& e) {
    EXPECT_DOUBLE_EQ(e.time(), 0.5);
    EXPECT_NE(std::string(e.what()).find("controllability lost"),
              std::string::npos);
  }
  x[0] = 2.0;
  EXPECT_NO_THROW(p.evaluate(x, 0.5, go, fo));
  EXPECT_DOUBLE_EQ(go[1], 2.0);
}

TEST(Reference, SinusoidValues) {
  auto r = sinusoid_reference();
  EXPECT_DOUBLE_EQ(r.xd(0.0), 0.0);
  EXPECT_DOUBLE_EQ(r.xd_dot(0.0), 0.75);
  EXPECT_NEAR(r.xd(std::numbers::pi), 0.5, 1e-15);
}

TEST(Reference, DerivativeMatchesFiniteDifference) {
  auto r = sinusoid_reference();
  const double h = 1e-5;
  for (double t = 0.1; t < 20.0; t += 0.37) {
    const double fd = (r.xd(t + h) - r.xd(t - h)) / (2 * h);
    EXPECT_NEAR(fd, r.xd_dot(t), 1e-9) << "t=" << t;
  }
  auto c = constant_reference(1.5);
  EXPECT_DOUBLE_EQ(c.xd(3.0), 1.5);
  EXPECT_DOUBLE_EQ(c.xd_dot(3.0), 0.0);
}
