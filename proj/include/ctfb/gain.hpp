#pragma once

#include <cstddef>
#include <vector>

namespace ctfb {

/// Bounded prescribed-time gain
///
///   mu(t) = (T + eps) / (T + eps - t)   for 0 <= t < T
///   mu(t) = 1 + T / eps                 for t >= T
///
/// mu(0) = 1, mu is nondecreasing and continuous, and saturates at mu_bar
/// once the prescribed time T has elapsed.
class GainSchedule {
 public:
  /// Throws ValidationError unless 0 < epsilon < prescribed_time.
  GainSchedule(double prescribed_time, double epsilon);

  double prescribed_time() const { return T_; }
  double epsilon() const { return eps_; }
  double mu_bar() const { return mu_bar_; }

  /// Throws std::domain_error for t < 0.
  double mu(double t) const;

  /// Closed form of the integral of mu over [0, t].
  double integral(double t) const;

 private:
  double T_;
  double eps_;
  double mu_bar_;
};

/// Per-channel integrable margins sigma_i(t) = a_i exp(-b_i t).
class SigmaSchedule {
 public:
  SigmaSchedule() = default;
  /// Throws ValidationError on size mismatch or a non-positive entry.
  SigmaSchedule(std::vector<double> amplitude, std::vector<double> decay);

  /// Same (a, b) on every one of `channels` channels.
  static SigmaSchedule uniform(std::size_t channels, double amplitude,
                               double decay);

  std::size_t channels() const { return a_.size(); }
  const std::vector<double>& amplitude() const { return a_; }
  const std::vector<double>& decay() const { return b_; }

  /// Zero-based channel. Throws std::out_of_range / std::domain_error.
  double sigma(std::size_t channel, double t) const;
  std::vector<double> values(double t) const;
  void values(double t, double* out) const;

  /// Integral of sigma_i over [0, inf): a_i / b_i.
  double integral_bound(std::size_t channel) const;

 private:
  std::vector<double> a_;
  std::vector<double> b_;
};

}  // namespace ctfb
