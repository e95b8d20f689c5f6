#include "ctfb/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ctfb/errors.hpp"

namespace ctfb {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::proposed:
      return "proposed";
    case Variant::dsc:
      return "dsc";
    case Variant::constant_gain:
      return "constant_gain_cfb";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  if (name == "proposed") return Variant::proposed;
  if (name == "dsc") return Variant::dsc;
  if (name == "constant_gain_cfb") return Variant::constant_gain;
  return std::nullopt;
}

namespace {

bool divides(double h, double span) {
  const double ratio = span / h;
  const double nearest = std::round(ratio);
  return nearest >= 1.0 && std::abs(ratio - nearest) <= 1e-9 * nearest;
}

}  // namespace

void SimConfig::validate() const {
  const std::size_t n = plant.order();
  if (x0.size() != n) {
    throw ValidationError("x0 must have " + std::to_string(n) + " entries");
  }
  for (double v : x0) {
    if (!std::isfinite(v)) throw ValidationError("x0 entries must be finite");
  }
  controller.validate(n);
  if (!reference.xd || !reference.xd_dot) {
    throw ValidationError("reference is empty");
  }
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw ValidationError("h must be > 0");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ValidationError("horizon must be > 0");
  }
  if (!divides(step, schedule.prescribed_time())) {
    throw ValidationError("h must divide T");
  }
  if (!divides(step, horizon)) {
    throw ValidationError("h must divide horizon");
  }
  if (mu_const && !(*mu_const >= 1.0)) {
    throw ValidationError("mu_const must be >= 1");
  }
}

struct ClosedLoop::Evaluation {
  double mu = 1.0;
  double xd = 0.0;
  std::vector<double> sigma;
  std::vector<double> g;
  std::vector<double> f;
  ErrorCoordinates coords;
  ControlSignals control;
};

ClosedLoop::ClosedLoop(SimConfig cfg)
    : cfg_(std::move(cfg)), layout_{cfg_.plant.order()} {
  cfg_.validate();
  filters_ = cfg_.controller.filters();
  compensator_ = cfg_.controller.compensator();
}

double ClosedLoop::gain(double t) const {
  if (cfg_.variant == Variant::constant_gain) {
    return cfg_.mu_const.value_or(cfg_.schedule.mu_bar());
  }
  return cfg_.schedule.mu(t);
}

ClosedLoop::Evaluation ClosedLoop::evaluate(double t,
                                            std::span<const double> y) const {
  const std::size_t n = layout_.n;
  const auto x = y.subspan(layout_.x(), n);
  const auto alpha_hat = y.subspan(layout_.alpha_hat(), n - 1);
  const auto zeta = y.subspan(layout_.zeta(), n);

  Evaluation e;
  e.mu = gain(t);
  e.sigma = cfg_.controller.sigma.values(t);
  e.g.resize(n);
  e.f.resize(n);
  cfg_.plant.evaluate(x, t, e.g, e.f);
  e.xd = cfg_.reference.xd(t);
  e.coords = error_coordinates(x, alpha_hat, e.xd, zeta);

  ControlLawInputs in;
  in.coords = &e.coords;
  in.zeta = zeta;
  in.alpha_hat = alpha_hat;
  in.g = e.g;
  in.f = e.f;
  in.sigma = e.sigma;
  in.xd_dot = cfg_.reference.xd_dot(t);
  in.mu = e.mu;
  in.g_min = cfg_.plant.g_min();
  const LawForm form =
      cfg_.variant == Variant::dsc ? LawForm::plain : LawForm::compensated;
  try {
    e.control = control_laws(cfg_.controller, filters_, in, form);
  } catch (const ControllabilityLoss& err) {
    throw ControllabilityLoss(err.what() + std::string(" at t = ") +
                                  std::to_string(t),
                              t);
  }
  return e;
}

std::vector<double> ClosedLoop::initial_state() const {
  const std::size_t n = layout_.n;
  std::vector<double> y(layout_.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) y[layout_.x() + i] = cfg_.x0[i];
  // alpha_i depends only on alpha_hat_1..alpha_hat_{i-1}.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Evaluation e = evaluate(0.0, y);
    y[layout_.alpha_hat() + i] = e.control.alpha[i];
  }
  return y;
}

void ClosedLoop::derivative(double t, std::span<const double> y,
                            std::span<double> dy) const {
  const std::size_t n = layout_.n;
  if (y.size() != layout_.size() || dy.size() != layout_.size()) {
    throw std::invalid_argument("ClosedLoop::derivative: dimension mismatch");
  }
  const Evaluation e = evaluate(t, y);
  const auto x = y.subspan(layout_.x(), n);
  const auto alpha_hat = y.subspan(layout_.alpha_hat(), n - 1);
  const auto zeta = y.subspan(layout_.zeta(), n);

  for (std::size_t i = 0; i + 1 < n; ++i) {
    dy[layout_.x() + i] = e.g[i] * x[i + 1] + e.f[i];
  }
  dy[layout_.x() + n - 1] = e.g[n - 1] * e.control.u + e.f[n - 1];

  for (std::size_t i = 0; i + 1 < n; ++i) {
    dy[layout_.alpha_hat() + i] = e.control.alpha_hat_dot[i];
  }

  auto dzeta = dy.subspan(layout_.zeta(), n);
  if (cfg_.variant == Variant::dsc) {
    std::fill(dzeta.begin(), dzeta.end(), 0.0);
  } else {
    std::vector<double> filter_err(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      filter_err[i] = alpha_hat[i] - e.control.alpha[i];
    }
    compensator_.derivative(zeta, filter_err, e.g, e.mu, e.sigma, dzeta);
  }

  for (std::size_t i = 0; i < dy.size(); ++i) {
    if (!std::isfinite(dy[i])) {
      std::ostringstream msg;
      msg << "non-finite derivative component " << i << " at t = " << t;
      throw NonFinite(msg.str(), t);
    }
  }
}

TraceRow ClosedLoop::observe(double t, std::span<const double> y) const {
  const std::size_t n = layout_.n;
  const Evaluation e = evaluate(t, y);
  TraceRow r;
  r.t = t;
  r.x.assign(y.begin(), y.begin() + n);
  r.u = e.control.u;
  r.alpha = e.control.alpha;
  r.alpha_hat.assign(y.begin() + layout_.alpha_hat(),
                     y.begin() + layout_.alpha_hat() + (n - 1));
  r.zeta.assign(y.begin() + layout_.zeta(), y.begin() + layout_.zeta() + n);
  r.z = e.coords.z;
  r.s = e.coords.s;
  r.mu = e.mu;
  r.sigma = e.sigma;
  for (std::size_t i = 0; i < n; ++i) {
    r.v0 += 0.5 * r.zeta[i] * r.zeta[i];
    r.vn += 0.5 * r.s[i] * r.s[i];
  }
  return r;
}

Rk4::Rk4(std::size_t dimension)
    : k1_(dimension), k2_(dimension), k3_(dimension), k4_(dimension),
      tmp_(dimension) {}

void Rk4::step(const OdeRhs& rhs, double t, std::span<double> y, double h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("rk4 step size must be > 0");
  }
  const std::size_t d = y.size();
  if (d != k1_.size()) {
    throw std::invalid_argument("Rk4::step: dimension mismatch");
  }
  rhs(t, y, k1_);
  for (std::size_t i = 0; i < d; ++i) tmp_[i] = y[i] + 0.5 * h * k1_[i];
  rhs(t + 0.5 * h, tmp_, k2_);
  for (std::size_t i = 0; i < d; ++i) tmp_[i] = y[i] + 0.5 * h * k2_[i];
  rhs(t + 0.5 * h, tmp_, k3_);
  for (std::size_t i = 0; i < d; ++i) tmp_[i] = y[i] + h * k3_[i];
  rhs(t + h, tmp_, k4_);
  for (std::size_t i = 0; i < d; ++i) {
    y[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }
}

std::vector<double> rk4_step(const OdeRhs& rhs, double t,
                             std::span<const double> y, double h) {
  std::vector<double> next(y.begin(), y.end());
  Rk4 stepper(next.size());
  stepper.step(rhs, t, next, h);
  return next;
}

SimTrace run(const SimConfig& cfg) {
  const ClosedLoop loop(cfg);
  const auto steps =
      static_cast<std::size_t>(std::llround(cfg.horizon / cfg.step));
  const double h = cfg.step;

  SimTrace trace;
  trace.order = cfg.plant.order();
  trace.step = h;
  trace.rows.reserve(steps + 1);

  const OdeRhs rhs = [&loop](double t, std::span<const double> y,
                             std::span<double> dy) {
    loop.derivative(t, y, dy);
  };

  std::vector<double> y = loop.initial_state();
  Rk4 stepper(y.size());
  trace.rows.push_back(loop.observe(0.0, y));
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * h;
    stepper.step(rhs, t, y, h);
    const double t_next = static_cast<double>(k + 1) * h;
    for (double v : y) {
      if (!std::isfinite(v)) {
        throw NonFinite("non-finite state at t = " + std::to_string(t_next),
                        t_next);
      }
    }
    trace.rows.push_back(loop.observe(t_next, y));
  }
  return trace;
}

}  // namespace ctfb
