#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ctfb {

/// Smooth surrogate for sign(v): v / sqrt(v^2 + sigma^2), in (-1, 1).
/// Throws std::domain_error unless sigma > 0.
double soft_sign(double v, double sigma);

/// Error compensator driven by the filter errors alpha_hat_i - alpha_i:
///
///   zeta_1' = -k_1 mu zeta_1 + g_1 e_1 + g_1 zeta_2 - l_1 ss(zeta_1)
///   zeta_i' = -k_i mu zeta_i + g_i e_i + g_i zeta_{i+1} - g_{i-1} zeta_{i-1}
///             - l_i ss(zeta_i)
///   zeta_n' = -k_n mu zeta_n - g_{n-1} zeta_{n-1} - l_n ss(zeta_n)
///
/// with ss(v) = soft_sign(v, sigma_i). Starts from zeta(0) = 0.
class Compensator {
 public:
  Compensator() = default;
  /// Throws ValidationError on size mismatch, n < 2, or non-positive gains.
  Compensator(std::vector<double> k, std::vector<double> l);

  std::size_t size() const { return k_.size(); }
  const std::vector<double>& k() const { return k_; }
  const std::vector<double>& l() const { return l_; }

  /// filter_err has n-1 entries; zeta, g, sigma, out have n.
  void derivative(std::span<const double> zeta,
                  std::span<const double> filter_err,
                  std::span<const double> g, double mu,
                  std::span<const double> sigma, std::span<double> out) const;
  std::vector<double> derivative(std::span<const double> zeta,
                                 std::span<const double> filter_err,
                                 std::span<const double> g, double mu,
                                 std::span<const double> sigma) const;

 private:
  std::vector<double> k_;
  std::vector<double> l_;
};

}  // namespace ctfb
