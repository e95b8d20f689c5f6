#include "ctfb/filter.hpp"

#include <stdexcept>
#include <string>

#include "ctfb/errors.hpp"

namespace ctfb {

FilterBank::FilterBank(std::vector<double> delta) : delta_(std::move(delta)) {
  if (delta_.empty()) {
    throw ValidationError("filter bank needs at least one time constant");
  }
  for (std::size_t i = 0; i < delta_.size(); ++i) {
    if (!(delta_[i] > 0.0)) {
      throw ValidationError("delta_" + std::to_string(i + 1) + " must be > 0");
    }
  }
}

void FilterBank::derivative(std::span<const double> alpha,
                            std::span<const double> alpha_hat, double mu,
                            std::span<double> out) const {
  if (alpha.size() != size() || alpha_hat.size() != size() ||
      out.size() != size()) {
    throw std::invalid_argument("FilterBank::derivative: dimension mismatch");
  }
  for (std::size_t i = 0; i < size(); ++i) {
    out[i] = mu * (alpha[i] - alpha_hat[i]) / delta_[i];
  }
}

std::vector<double> FilterBank::derivative(std::span<const double> alpha,
                                           std::span<const double> alpha_hat,
                                           double mu) const {
  std::vector<double> out(size());
  derivative(alpha, alpha_hat, mu, out);
  return out;
}

double FilterBank::derivative(std::size_t i, double alpha_i,
                              double alpha_hat_i, double mu) const {
  if (i >= size()) {
    throw std::out_of_range("FilterBank::derivative: index out of range");
  }
  return mu * (alpha_i - alpha_hat_i) / delta_[i];
}

}  // namespace ctfb
