#include "ctfb/compensator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ctfb/errors.hpp"

namespace ctfb {

double soft_sign(double v, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("soft_sign: sigma must be > 0");
  }
  // hypot avoids overflow of v*v for |v| near DBL_MAX.
  return v / std::hypot(v, sigma);
}

Compensator::Compensator(std::vector<double> k, std::vector<double> l)
    : k_(std::move(k)), l_(std::move(l)) {
  if (k_.size() != l_.size()) {
    throw ValidationError("k and l must have the same length");
  }
  if (k_.size() < 2) {
    throw ValidationError("compensator needs at least two channels");
  }
  for (std::size_t i = 0; i < k_.size(); ++i) {
    if (!(k_[i] > 0.0)) {
      throw ValidationError("k_" + std::to_string(i + 1) + " must be > 0");
    }
    if (!(l_[i] > 0.0)) {
      throw ValidationError("l_" + std::to_string(i + 1) + " must be > 0");
    }
  }
}

void Compensator::derivative(std::span<const double> zeta,
                             std::span<const double> filter_err,
                             std::span<const double> g, double mu,
                             std::span<const double> sigma,
                             std::span<double> out) const {
  const std::size_t n = size();
  if (zeta.size() != n || filter_err.size() + 1 != n || g.size() != n ||
      sigma.size() != n || out.size() != n) {
    throw std::invalid_argument("Compensator::derivative: dimension mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    double d = -k_[i] * mu * zeta[i] - l_[i] * soft_sign(zeta[i], sigma[i]);
    if (i + 1 < n) {
      d += g[i] * filter_err[i] + g[i] * zeta[i + 1];
    }
    if (i > 0) {
      d -= g[i - 1] * zeta[i - 1];
    }
    out[i] = d;
  }
}

std::vector<double> Compensator::derivative(std::span<const double> zeta,
                                            std::span<const double> filter_err,
                                            std::span<const double> g,
                                            double mu,
                                            std::span<const double> sigma) const {
  std::vector<double> out(size());
  derivative(zeta, filter_err, g, mu, sigma, out);
  return out;
}

}  // namespace ctfb
