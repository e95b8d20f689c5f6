#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ctfb {

/// Bank of n-1 first-order command filters with a time-varying gain:
///
///   delta_i * alpha_hat_i' = mu(t) * (alpha_i - alpha_hat_i)
///
/// Only the time constants live here; the filter outputs are part of the
/// closed-loop state vector.
class FilterBank {
 public:
  FilterBank() = default;
  /// Throws ValidationError if delta is empty or has a non-positive entry.
  explicit FilterBank(std::vector<double> delta);

  std::size_t size() const { return delta_.size(); }
  const std::vector<double>& delta() const { return delta_; }

  /// out_i = mu * (alpha_i - alpha_hat_i) / delta_i.
  void derivative(std::span<const double> alpha,
                  std::span<const double> alpha_hat, double mu,
                  std::span<double> out) const;
  std::vector<double> derivative(std::span<const double> alpha,
                                 std::span<const double> alpha_hat,
                                 double mu) const;

  /// Single component of derivative(), zero-based.
  double derivative(std::size_t i, double alpha_i, double alpha_hat_i,
                    double mu) const;

 private:
  std::vector<double> delta_;
};

}  // namespace ctfb
