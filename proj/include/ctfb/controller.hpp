#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ctfb/compensator.hpp"
#include "ctfb/filter.hpp"
#include "ctfb/gain.hpp"

namespace ctfb {

/// Gains shared by the controller, the compensator and the filter bank.
struct ControllerConfig {
  std::vector<double> k;      // n feedback gains
  std::vector<double> l;      // n compensator magnitudes
  std::vector<double> delta;  // n-1 filter time constants
  SigmaSchedule sigma;        // n margins

  std::size_t order() const { return k.size(); }

  /// Throws ValidationError naming the first violated constraint.
  void validate(std::size_t n) const;

  Compensator compensator() const { return Compensator(k, l); }
  FilterBank filters() const { return FilterBank(delta); }
};

/// z_1 = x_1 - x_d, z_i = x_i - alpha_hat_{i-1}, s = z - zeta.
struct ErrorCoordinates {
  std::vector<double> z;
  std::vector<double> s;
};

ErrorCoordinates error_coordinates(std::span<const double> x,
                                   std::span<const double> alpha_hat,
                                   double xd, std::span<const double> zeta);

/// Which terms the control laws carry.
enum class LawForm {
  // zeta-compensation and s-softening terms present.
  compensated,
  // Plain dynamic-surface form: both softening terms dropped.
  plain,
};

/// Inputs of one channel of the control law. `feedforward` is x_d' for the
/// first channel and alpha_hat_{i-1}' otherwise; `coupling` is
/// g_{i-1} z_{i-1} (zero for the first channel).
struct ChannelInputs {
  double z = 0.0;
  double s = 0.0;
  double zeta = 0.0;
  double g = 1.0;
  double f = 0.0;
  double feedforward = 0.0;
  double coupling = 0.0;
  double mu = 1.0;
  double sigma = 1.0;
};

/// (1/g)(-k mu z + feedforward - f - coupling - l ss(zeta) - ss(s)).
double channel_law(double k, double l, const ChannelInputs& in,
                   LawForm form = LawForm::compensated);

struct ControlSignals {
  std::vector<double> alpha;          // alpha_1 .. alpha_{n-1}
  std::vector<double> alpha_hat_dot;  // filter derivatives, same length
  double u = 0.0;
};

struct ControlLawInputs {
  const ErrorCoordinates* coords = nullptr;
  std::span<const double> zeta;
  std::span<const double> alpha_hat;
  std::span<const double> g;
  std::span<const double> f;
  std::span<const double> sigma;
  double xd_dot = 0.0;
  double mu = 1.0;
  double g_min = 1e-6;
};

/// Evaluates alpha_1, alpha_hat_1', alpha_2, ... , u in dependency order.
/// Each alpha_hat_{i-1}' comes from the filter right-hand side, never from
/// differencing. Throws ControllabilityLoss when some |g_i| < g_min.
ControlSignals control_laws(const ControllerConfig& cfg,
                            const FilterBank& filters,
                            const ControlLawInputs& in,
                            LawForm form = LawForm::compensated);

}  // namespace ctfb
