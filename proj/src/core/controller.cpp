#include "ctfb/controller.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ctfb/errors.hpp"

namespace ctfb {

void ControllerConfig::validate(std::size_t n) const {
  auto positive = [](const std::vector<double>& v, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
        throw ValidationError(std::string(name) + "_" + std::to_string(i + 1) +
                              " must be > 0");
      }
    }
  };
  if (k.size() != n) {
    throw ValidationError("k must have " + std::to_string(n) + " entries");
  }
  if (l.size() != n) {
    throw ValidationError("l must have " + std::to_string(n) + " entries");
  }
  if (delta.size() + 1 != n) {
    throw ValidationError("delta must have " + std::to_string(n - 1) +
                          " entries");
  }
  if (sigma.channels() != n) {
    throw ValidationError("sigma must have " + std::to_string(n) +
                          " channels");
  }
  positive(k, "k");
  positive(l, "l");
  positive(delta, "delta");
}

ErrorCoordinates error_coordinates(std::span<const double> x,
                                   std::span<const double> alpha_hat,
                                   double xd, std::span<const double> zeta) {
  const std::size_t n = x.size();
  if (n < 2 || alpha_hat.size() + 1 != n || zeta.size() != n) {
    throw std::invalid_argument("error_coordinates: dimension mismatch");
  }
  ErrorCoordinates c{std::vector<double>(n), std::vector<double>(n)};
  c.z[0] = x[0] - xd;
  for (std::size_t i = 1; i < n; ++i) {
    c.z[i] = x[i] - alpha_hat[i - 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    c.s[i] = c.z[i] - zeta[i];
  }
  return c;
}

double channel_law(double k, double l, const ChannelInputs& in, LawForm form) {
  double v = -k * in.mu * in.z + in.feedforward - in.f - in.coupling;
  if (form == LawForm::compensated) {
    v -= l * soft_sign(in.zeta, in.sigma) + soft_sign(in.s, in.sigma);
  }
  return v / in.g;
}

ControlSignals control_laws(const ControllerConfig& cfg,
                            const FilterBank& filters,
                            const ControlLawInputs& in, LawForm form) {
  const std::size_t n = cfg.order();
  if (in.coords == nullptr || in.coords->z.size() != n ||
      in.coords->s.size() != n || in.zeta.size() != n ||
      in.alpha_hat.size() + 1 != n || in.g.size() != n || in.f.size() != n ||
      in.sigma.size() != n || filters.size() + 1 != n) {
    throw std::invalid_argument("control_laws: dimension mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::abs(in.g[i]) >= in.g_min)) {
      std::ostringstream msg;
      msg << "controllability lost: |g_" << i + 1 << "| = " << std::abs(in.g[i])
          << " < g_min = " << in.g_min;
      throw ControllabilityLoss(msg.str(), std::nan(""));
    }
  }

  ControlSignals out;
  out.alpha.resize(n - 1);
  out.alpha_hat_dot.resize(n - 1);

  const auto& z = in.coords->z;
  const auto& s = in.coords->s;
  for (std::size_t i = 0; i < n; ++i) {
    ChannelInputs ch;
    ch.z = z[i];
    ch.s = s[i];
    ch.zeta = in.zeta[i];
    ch.g = in.g[i];
    ch.f = in.f[i];
    ch.mu = in.mu;
    ch.sigma = in.sigma[i];
    if (i == 0) {
      ch.feedforward = in.xd_dot;
    } else {
      ch.feedforward = out.alpha_hat_dot[i - 1];
      ch.coupling = in.g[i - 1] * z[i - 1];
    }
    const double value = channel_law(cfg.k[i], cfg.l[i], ch, form);
    if (i + 1 < n) {
      out.alpha[i] = value;
      out.alpha_hat_dot[i] =
          filters.derivative(i, value, in.alpha_hat[i], in.mu);
    } else {
      out.u = value;
    }
  }
  return out;
}

}  // namespace ctfb
