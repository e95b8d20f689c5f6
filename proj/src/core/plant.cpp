#include "ctfb/plant.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ctfb/errors.hpp"

namespace ctfb {

PlantModel::PlantModel(std::string name, std::vector<StateFunction> g,
                       std::vector<StateFunction> f, double g_min)
    : name_(std::move(name)), g_(std::move(g)), f_(std::move(f)), g_min_(g_min) {
  if (g_.size() < 2) {
    throw ValidationError("plant order must be >= 2");
  }
  if (g_.size() != f_.size()) {
    throw ValidationError("plant needs one g and one f per channel");
  }
  for (std::size_t i = 0; i < g_.size(); ++i) {
    if (!g_[i] || !f_[i]) {
      throw ValidationError("plant evaluator " + std::to_string(i + 1) +
                            " is empty");
    }
  }
  if (!(g_min_ > 0.0)) {
    throw ValidationError("g_min must be > 0");
  }
}

double PlantModel::g(std::size_t i, std::span<const double> x, double t) const {
  return g_.at(i)(x, t);
}

double PlantModel::f(std::size_t i, std::span<const double> x, double t) const {
  return f_.at(i)(x, t);
}

void PlantModel::evaluate(std::span<const double> x, double t,
                          std::span<double> g_out,
                          std::span<double> f_out) const {
  const std::size_t n = order();
  if (x.size() != n || g_out.size() != n || f_out.size() != n) {
    throw std::invalid_argument("PlantModel::evaluate: dimension mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    g_out[i] = g_[i](x, t);
    if (!(std::abs(g_out[i]) >= g_min_)) {
      std::ostringstream msg;
      msg << "controllability lost: |g_" << i + 1 << "| = "
          << std::abs(g_out[i]) << " < g_min = " << g_min_ << " at t = " << t;
      throw ControllabilityLoss(msg.str(), t);
    }
    f_out[i] = f_[i](x, t);
  }
}

std::vector<double> plant_rhs(const PlantModel& model,
                              std::span<const double> x, double u, double t) {
  const std::size_t n = model.order();
  if (x.size() != n) {
    throw std::invalid_argument("plant_rhs: state has wrong dimension");
  }
  std::vector<double> g(n), f(n), dx(n);
  model.evaluate(x, t, g, f);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    dx[i] = g[i] * x[i + 1] + f[i];
  }
  dx[n - 1] = g[n - 1] * u + f[n - 1];
  return dx;
}

namespace {

double one(std::span<const double>, double) { return 1.0; }
double zero(std::span<const double>, double) { return 0.0; }

}  // namespace

PlantModel electromechanical_model(const ElectromechanicalParams& p,
                                   double g_min) {
  if (!(p.M > 0.0)) throw ValidationError("M must be > 0");
  if (!(p.L > 0.0)) throw ValidationError("L must be > 0");
  if (!(p.N >= 0.0)) throw ValidationError("N must be >= 0");
  if (!(p.B >= 0.0)) throw ValidationError("B must be >= 0");
  if (!(p.Km >= 0.0)) throw ValidationError("Km must be >= 0");
  if (!(p.H >= 0.0)) throw ValidationError("H must be >= 0");

  const double n_m = p.N / p.M;
  const double b_m = p.B / p.M;
  const double km_ml = p.Km / (p.M * p.L);
  const double h_ml = p.H / (p.M * p.L);

  std::vector<StateFunction> g{one, one, one};
  std::vector<StateFunction> f{
      zero,
      [n_m, b_m](std::span<const double> x, double) {
        return -n_m * std::sin(x[0]) - b_m * x[1];
      },
      [km_ml, h_ml](std::span<const double> x, double) {
        return -km_ml * x[1] - h_ml * x[2];
      }};
  return PlantModel("electromechanical", std::move(g), std::move(f), g_min);
}

PlantModel integrator_chain(std::size_t n, double g_min) {
  return PlantModel("chain", std::vector<StateFunction>(n, one),
                    std::vector<StateFunction>(n, zero), g_min);
}

Reference sinusoid_reference() {
  return Reference{
      "sinusoid",
      [](double t) { return 0.5 * std::sin(t) + 0.5 * std::sin(0.5 * t); },
      [](double t) { return 0.5 * std::cos(t) + 0.25 * std::cos(0.5 * t); }};
}

Reference constant_reference(double value) {
  return Reference{"constant", [value](double) { return value; },
                   [](double) { return 0.0; }};
}

}  // namespace ctfb
