#include "ctfb/gain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ctfb/errors.hpp"

namespace ctfb {

GainSchedule::GainSchedule(double prescribed_time, double epsilon)
    : T_(prescribed_time), eps_(epsilon) {
  if (!(T_ > 0.0) || !std::isfinite(T_)) {
    throw ValidationError("T must be > 0");
  }
  if (!(eps_ > 0.0)) {
    throw ValidationError("epsilon must be > 0");
  }
  if (!(eps_ < T_)) {
    throw ValidationError("epsilon must be < T");
  }
  mu_bar_ = 1.0 + T_ / eps_;
}

double GainSchedule::mu(double t) const {
  if (!(t >= 0.0)) {
    throw std::domain_error("mu: t must be >= 0, got " + std::to_string(t));
  }
  if (t < T_) {
    return (T_ + eps_) / (T_ + eps_ - t);
  }
  return mu_bar_;
}

double GainSchedule::integral(double t) const {
  if (!(t >= 0.0)) {
    throw std::domain_error("integral: t must be >= 0");
  }
  const double a = T_ + eps_;
  const double head = std::min(t, T_);
  double value = a * std::log(a / (a - head));
  if (t > T_) {
    value += mu_bar_ * (t - T_);
  }
  return value;
}

SigmaSchedule::SigmaSchedule(std::vector<double> amplitude,
                             std::vector<double> decay)
    : a_(std::move(amplitude)), b_(std::move(decay)) {
  if (a_.size() != b_.size()) {
    throw ValidationError("sigma amplitude and decay must have equal length");
  }
  for (std::size_t i = 0; i < a_.size(); ++i) {
    if (!(a_[i] > 0.0)) {
      throw ValidationError("sigma amplitude_" + std::to_string(i + 1) +
                            " must be > 0");
    }
    if (!(b_[i] > 0.0)) {
      throw ValidationError("sigma decay_" + std::to_string(i + 1) +
                            " must be > 0");
    }
  }
}

SigmaSchedule SigmaSchedule::uniform(std::size_t channels, double amplitude,
                                     double decay) {
  return SigmaSchedule(std::vector<double>(channels, amplitude),
                       std::vector<double>(channels, decay));
}

double SigmaSchedule::sigma(std::size_t channel, double t) const {
  if (channel >= a_.size()) {
    throw std::out_of_range("sigma: channel out of range");
  }
  if (!(t >= 0.0)) {
    throw std::domain_error("sigma: t must be >= 0");
  }
  return a_[channel] * std::exp(-b_[channel] * t);
}

std::vector<double> SigmaSchedule::values(double t) const {
  std::vector<double> out(a_.size());
  values(t, out.data());
  return out;
}

void SigmaSchedule::values(double t, double* out) const {
  for (std::size_t i = 0; i < a_.size(); ++i) {
    out[i] = a_[i] * std::exp(-b_[i] * t);
  }
}

double SigmaSchedule::integral_bound(std::size_t channel) const {
  if (channel >= a_.size()) {
    throw std::out_of_range("integral_bound: channel out of range");
  }
  return a_[channel] / b_[channel];
}

}  // namespace ctfb
