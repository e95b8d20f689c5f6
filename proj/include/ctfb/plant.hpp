#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ctfb {

/// g_i(x, t) or f_i(x, t). Must be reentrant.
using StateFunction = std::function<double(std::span<const double> x, double t)>;

/// Strict-feedback-like plant
///
///   x_i' = g_i(x,t) x_{i+1} + f_i(x,t),   i < n
///   x_n' = g_n(x,t) u       + f_n(x,t)
///
/// Immutable after construction. Channels are zero-based.
class PlantModel {
 public:
  static constexpr double kDefaultGMin = 1e-6;

  PlantModel(std::string name, std::vector<StateFunction> g,
             std::vector<StateFunction> f, double g_min = kDefaultGMin);

  const std::string& name() const { return name_; }
  std::size_t order() const { return g_.size(); }
  double g_min() const { return g_min_; }

  double g(std::size_t i, std::span<const double> x, double t) const;
  double f(std::size_t i, std::span<const double> x, double t) const;

  /// Fills g_out and f_out (length n each). Throws ControllabilityLoss if
  /// any |g_i| < g_min.
  void evaluate(std::span<const double> x, double t, std::span<double> g_out,
                std::span<double> f_out) const;

 private:
  std::string name_;
  std::vector<StateFunction> g_;
  std::vector<StateFunction> f_;
  double g_min_;
};

/// x' for the given control input.
std::vector<double> plant_rhs(const PlantModel& model,
                              std::span<const double> x, double u, double t);

struct ElectromechanicalParams {
  double M = 0.064;
  double N = 3.12;
  double B = 0.02;
  double Km = 0.9;
  double H = 5.0;
  double L = 15.0;
};

/// Third-order electromechanical benchmark:
///   x1' = x2
///   x2' = x3 - (N/M) sin(x1) - (B/M) x2
///   x3' = u  - (Km/(M L)) x2 - (H/(M L)) x3
/// M and L must be > 0; N, B, Km, H must be >= 0.
PlantModel electromechanical_model(const ElectromechanicalParams& p = {},
                                   double g_min = PlantModel::kDefaultGMin);

/// Pure integrator chain of order n >= 2 (g = 1, f = 0).
PlantModel integrator_chain(std::size_t n,
                            double g_min = PlantModel::kDefaultGMin);

/// Desired trajectory and its derivative.
struct Reference {
  std::string name;
  std::function<double(double)> xd;
  std::function<double(double)> xd_dot;
};

/// x_d = 0.5 sin t + 0.5 sin 0.5t
Reference sinusoid_reference();
/// x_d = c
Reference constant_reference(double value);

}  // namespace ctfb
