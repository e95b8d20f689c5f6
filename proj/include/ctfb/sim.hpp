#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ctfb/controller.hpp"
#include "ctfb/gain.hpp"
#include "ctfb/plant.hpp"

namespace ctfb {

enum class Variant {
  proposed,       // time-varying gain + compensator
  dsc,            // zeta frozen at zero, plain control laws
  constant_gain,  // mu(t) replaced by a constant
};

std::string_view variant_name(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

struct SimConfig {
  PlantModel plant;
  Reference reference;
  ControllerConfig controller;
  GainSchedule schedule;
  std::vector<double> x0;
  double step = 1e-3;
  double horizon = 10.0;
  Variant variant = Variant::proposed;
  // Used by Variant::constant_gain; defaults to schedule.mu_bar().
  std::optional<double> mu_const;

  /// Throws ValidationError naming the first violated constraint.
  void validate() const;
};

/// Offsets of the flat closed-loop state [x | alpha_hat | zeta].
struct StateLayout {
  std::size_t n;
  std::size_t x() const { return 0; }
  std::size_t alpha_hat() const { return n; }
  std::size_t zeta() const { return 2 * n - 1; }
  std::size_t size() const { return 3 * n - 1; }
};

/// One grid point of a simulated trajectory.
struct TraceRow {
  double t = 0.0;
  std::vector<double> x;
  double u = 0.0;
  std::vector<double> alpha;
  std::vector<double> alpha_hat;
  std::vector<double> zeta;
  std::vector<double> z;
  std::vector<double> s;
  double mu = 1.0;
  std::vector<double> sigma;
  double v0 = 0.0;
  double vn = 0.0;
};

struct SimTrace {
  std::size_t order = 0;
  double step = 0.0;
  std::vector<TraceRow> rows;

  bool empty() const { return rows.empty(); }
};

/// Plant, filter bank and compensator coupled through the control laws.
class ClosedLoop {
 public:
  explicit ClosedLoop(SimConfig cfg);

  const SimConfig& config() const { return cfg_; }
  StateLayout layout() const { return layout_; }
  std::size_t dimension() const { return layout_.size(); }

  /// mu(t), or the constant gain for Variant::constant_gain.
  double gain(double t) const;

  /// x0, zeta = 0 and alpha_hat_i(0) = alpha_i(0), resolved channel by
  /// channel up the chain.
  std::vector<double> initial_state() const;

  /// Throws ControllabilityLoss or NonFinite.
  void derivative(double t, std::span<const double> y,
                  std::span<double> dy) const;

  /// All recorded signals at (t, y).
  TraceRow observe(double t, std::span<const double> y) const;

 private:
  struct Evaluation;
  Evaluation evaluate(double t, std::span<const double> y) const;

  SimConfig cfg_;
  StateLayout layout_;
  FilterBank filters_;
  Compensator compensator_;
};

using OdeRhs =
    std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

/// Classical four-stage Runge-Kutta with reusable stage buffers.
class Rk4 {
 public:
  explicit Rk4(std::size_t dimension);
  /// Advances y in place from t to t + h. Throws std::invalid_argument
  /// unless h > 0.
  void step(const OdeRhs& rhs, double t, std::span<double> y, double h);

 private:
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

std::vector<double> rk4_step(const OdeRhs& rhs, double t,
                             std::span<const double> y, double h);

/// Integrates the closed loop over [0, horizon] on the uniform grid
/// t_k = k h and records every grid point. Deterministic.
SimTrace run(const SimConfig& cfg);

}  // namespace ctfb
