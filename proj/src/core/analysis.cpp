#include "ctfb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ctfb/compensator.hpp"

namespace ctfb {

void InequalityCheck::record(double t, double lhs, double rhs) {
  ++checked;
  const double excess = lhs - rhs;
  if (excess > worst_excess || std::isnan(excess)) {
    worst_excess = excess;
    worst_time = t;
  }
  if (!(excess <= tolerance)) {
    ++violations;
  }
}

bool CertificateReport::passed() const {
  return consistency.passed() && lyapunov_identity.passed() &&
         decay_before_T.passed() && bound_after_T.passed() &&
         vn_nonincreasing.passed() && compensator_bound.passed();
}

namespace {

double half_sum_squares(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += 0.5 * x * x;
  return acc;
}

std::vector<double> finite_difference(const std::vector<double>& t,
                                      const std::vector<double>& v) {
  const std::size_t m = v.size();
  std::vector<double> d(m, 0.0);
  if (m < 2) return d;
  d.front() = (v[1] - v[0]) / (t[1] - t[0]);
  d.back() = (v[m - 1] - v[m - 2]) / (t[m - 1] - t[m - 2]);
  for (std::size_t k = 1; k + 1 < m; ++k) {
    d[k] = (v[k + 1] - v[k - 1]) / (t[k + 1] - t[k - 1]);
  }
  return d;
}

double trace_step(const SimTrace& trace) {
  if (trace.step > 0.0) return trace.step;
  if (trace.rows.size() >= 2) return trace.rows[1].t - trace.rows[0].t;
  return 0.0;
}

void check_row_shape(const TraceRow& r, std::size_t n) {
  if (r.x.size() != n || r.alpha.size() + 1 != n ||
      r.alpha_hat.size() + 1 != n || r.zeta.size() != n || r.z.size() != n ||
      r.s.size() != n || r.sigma.size() != n) {
    throw std::invalid_argument("trace row has inconsistent dimensions");
  }
}

}  // namespace

LyapunovSeries lyapunov_series(const SimTrace& trace) {
  LyapunovSeries ls;
  const std::size_t m = trace.rows.size();
  ls.t.reserve(m);
  ls.v0.reserve(m);
  ls.vn.reserve(m);
  for (const auto& r : trace.rows) {
    ls.t.push_back(r.t);
    ls.v0.push_back(half_sum_squares(r.zeta));
    ls.vn.push_back(half_sum_squares(r.s));
  }
  ls.v0_dot = finite_difference(ls.t, ls.v0);
  ls.vn_dot = finite_difference(ls.t, ls.vn);
  return ls;
}

CertificateReport certify_trace(const SimTrace& trace, const SimConfig& cfg) {
  const ClosedLoop loop(cfg);
  const std::size_t n = cfg.plant.order();
  if (trace.order != n) {
    throw std::invalid_argument("trace order " + std::to_string(trace.order) +
                                " does not match plant order " +
                                std::to_string(n));
  }
  for (const auto& r : trace.rows) check_row_shape(r, n);

  const auto& k = cfg.controller.k;
  const auto& l = cfg.controller.l;
  const auto& sched = cfg.schedule;
  const double T = sched.prescribed_time();
  const double k_min = *std::min_element(k.begin(), k.end());

  CertificateReport rep;
  rep.order = n;
  rep.rows = trace.rows.size();
  rep.step = trace_step(trace);
  rep.prescribed_time = T;
  rep.epsilon = sched.epsilon();
  rep.mu_bar = sched.mu_bar();
  rep.K1 = 2.0 * k_min;
  rep.K0 = 2.0 * sched.mu_bar() * k_min;
  const auto sigma0 = cfg.controller.sigma.values(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    rep.Gamma0 += l[i] * sigma0[i];
    rep.Gamma2_at_0 += sigma0[i];
  }

  rep.consistency.name = "trace consistency";
  rep.lyapunov_identity.name = "V_n' matches sum(-k mu s^2 - s ss(s))";
  rep.decay_before_T.name = "V_n' <= -K1 mu V_n on [0,T)";
  rep.bound_after_T.name = "V_n' <= -K1 mu_bar V_n + Gamma2 on [T,inf)";
  rep.vn_nonincreasing.name = "V_n' <= 0";
  rep.compensator_bound.name = "V_0' <= -sum k mu zeta^2 + sum l sigma";

  rep.side_condition.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) rep.side_condition[i].l = l[i];

  const LyapunovSeries ls = lyapunov_series(trace);
  const std::size_t m = trace.rows.size();
  const Compensator comp = cfg.controller.compensator();

  std::vector<double> mu(m), gamma2(m), vn_dot(m), v0_dot(m);
  std::vector<char> pointwise_ok(m, 1);
  std::vector<double> g(n), f(n), sigma(n), e(n - 1), zeta_dot(n);

  for (std::size_t idx = 0; idx < m; ++idx) {
    const TraceRow& r = trace.rows[idx];
    const double t = r.t;
    mu[idx] = loop.gain(t);
    cfg.controller.sigma.values(t, sigma.data());
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = cfg.plant.g(i, r.x, t);
      gamma2[idx] += sigma[i];
    }

    // Recorded columns must agree with what the scenario implies.
    auto agree = [&](double recorded, double expected) {
      rep.consistency.record(t, std::abs(recorded - expected),
                             1e-9 * (1.0 + std::abs(expected)));
    };
    if (rep.step > 0.0) {
      agree(t, static_cast<double>(idx) * rep.step);
    }
    agree(r.mu, mu[idx]);
    agree(r.z[0], r.x[0] - cfg.reference.xd(t));
    for (std::size_t i = 0; i < n; ++i) {
      agree(r.sigma[i], sigma[i]);
      if (i > 0) agree(r.z[i], r.x[i] - r.alpha_hat[i - 1]);
      agree(r.s[i], r.z[i] - r.zeta[i]);
    }
    agree(r.v0, ls.v0[idx]);
    agree(r.vn, ls.vn[idx]);

    double vd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      vd += -k[i] * mu[idx] * r.s[i] * r.s[i] - r.s[i] * soft_sign(r.s[i], sigma[i]);
    }
    vn_dot[idx] = vd;

    for (std::size_t i = 0; i + 1 < n; ++i) {
      e[i] = r.alpha_hat[i] - r.alpha[i];
      auto& audit = rep.side_condition[i];
      audit.tau = std::max(audit.tau, std::abs(e[i]));
      audit.g_max = std::max(audit.g_max, std::abs(g[i]));
      if (!(l[i] >= std::abs(g[i]) * std::abs(e[i]))) pointwise_ok[idx] = 0;
    }
    comp.derivative(r.zeta, e, g, mu[idx], sigma, zeta_dot);
    double v0d = 0.0;
    for (std::size_t i = 0; i < n; ++i) v0d += r.zeta[i] * zeta_dot[i];
    v0_dot[idx] = v0d;
  }

  rep.side_condition_holds = true;
  for (auto& audit : rep.side_condition) {
    audit.holds = audit.l >= audit.g_max * audit.tau;
    rep.side_condition_holds = rep.side_condition_holds && audit.holds;
  }

  // O(h) envelope scaled by the analytic derivative magnitude, plus a
  // floor for cancellation error in the difference quotient.
  auto envelope = [&](const std::vector<double>& dot,
                      const std::vector<double>& value) {
    double d = 0.0;
    double vmax = 0.0;
    for (double x : dot) d = std::max(d, std::abs(x));
    for (double x : value) vmax = std::max(vmax, std::abs(x));
    const double h = rep.step > 0.0 ? rep.step : 1.0;
    return 10.0 * h * d + 64.0 * std::numeric_limits<double>::epsilon() * vmax / h;
  };
  const double tol_n = envelope(vn_dot, ls.vn);
  const double tol_0 = envelope(v0_dot, ls.v0);
  rep.lyapunov_identity.tolerance = tol_n;
  rep.decay_before_T.tolerance = tol_n;
  rep.bound_after_T.tolerance = tol_n;
  rep.vn_nonincreasing.tolerance = tol_n;
  rep.compensator_bound.tolerance = tol_0;

  // Central differences only: the one-sided endpoint quotients carry an
  // O(h) bias the envelope is not sized for.
  for (std::size_t idx = 1; idx + 1 < m; ++idx) {
    const double t = ls.t[idx];
    const double fd = ls.vn_dot[idx];
    rep.lyapunov_identity.record(t, std::abs(fd - vn_dot[idx]), 0.0);
    rep.vn_nonincreasing.record(t, fd, 0.0);
    if (t < T) {
      rep.decay_before_T.record(t, fd, -rep.K1 * mu[idx] * ls.vn[idx]);
    } else {
      rep.bound_after_T.record(t, fd,
                               -rep.K1 * mu[idx] * ls.vn[idx] + gamma2[idx]);
    }
    if (pointwise_ok[idx]) {
      double rhs = 0.0;
      const TraceRow& r = trace.rows[idx];
      cfg.controller.sigma.values(t, sigma.data());
      for (std::size_t i = 0; i < n; ++i) {
        rhs += -k[i] * mu[idx] * r.zeta[i] * r.zeta[i] + l[i] * sigma[i];
      }
      rep.compensator_bound.record(t, ls.v0_dot[idx], rhs);
    } else {
      ++rep.compensator_points_skipped;
    }
  }

  if (m > 0) {
    rep.vn0 = ls.vn.front();
    rep.v00 = ls.v0.front();
    const double closed = residual_factor_closed_form(sched, rep.K1);
    const double integral = residual_factor_integral(sched, rep.K1);
    rep.omega_s = closed * rep.vn0;
    rep.omega_s_integral = integral * rep.vn0;
    const double decay0 = std::exp(-rep.K0 * T);
    rep.omega_zeta = decay0 * rep.v00 + (1.0 - decay0) * rep.Gamma0 / rep.K0;
    rep.omega_z = rep.omega_zeta + rep.omega_s;

    if (ls.t.back() >= T) {
      const auto it = std::lower_bound(ls.t.begin(), ls.t.end(),
                                       T - 0.5 * rep.step);
      const auto at = static_cast<std::size_t>(it - ls.t.begin());
      rep.vn_at_T = ls.vn[at];
      rep.v0_at_T = ls.v0[at];
      for (double s : trace.rows[at].s) {
        rep.max_abs_s_at_T = std::max(rep.max_abs_s_at_T, std::abs(s));
      }
      rep.s_within_omega_s = rep.max_abs_s_at_T <= rep.omega_s;
      rep.vn_within_omega_s_integral = rep.vn_at_T <= rep.omega_s_integral;
      rep.v0_within_omega_zeta = rep.v0_at_T <= rep.omega_zeta;
    }
  }
  return rep;
}

TrackingMetrics tracking_metrics(const SimTrace& trace, double prescribed_time,
                                 double window_start) {
  TrackingMetrics m;
  if (trace.rows.empty()) return m;
  double peak = 0.0;
  for (const auto& r : trace.rows) {
    const double a = std::abs(r.z.at(0));
    peak = std::max(peak, a);
    if (r.t >= prescribed_time) {
      m.max_abs_z1_after_T = std::max(m.max_abs_z1_after_T, a);
    }
    if (r.t >= window_start) {
      m.window_max_abs_z1 = std::max(m.window_max_abs_z1, a);
    }
  }
  m.terminal_abs_z1 = std::abs(trace.rows.back().z.at(0));

  const double band = 0.02 * peak;
  m.settling_time = 0.0;
  for (std::size_t idx = trace.rows.size(); idx-- > 0;) {
    if (std::abs(trace.rows[idx].z[0]) > band) {
      m.settling_time = idx + 1 < trace.rows.size() ? trace.rows[idx + 1].t
                                                    : trace.rows[idx].t;
      break;
    }
  }
  return m;
}

SimTrace run_baseline(SimConfig cfg, Variant variant,
                      std::optional<double> mu_const) {
  cfg.variant = variant;
  if (mu_const) cfg.mu_const = mu_const;
  return run(cfg);
}

double residual_factor_closed_form(const GainSchedule& schedule, double k) {
  const double T = schedule.prescribed_time();
  return std::exp(-k * (T + T * T / schedule.epsilon()));
}

double residual_factor_integral(const GainSchedule& schedule, double k) {
  return std::exp(-k * schedule.integral(schedule.prescribed_time()));
}

double scalar_decay_ratio(const GainSchedule& schedule, double k, double h) {
  const double T = schedule.prescribed_time();
  const auto steps = static_cast<std::size_t>(std::llround(T / h));
  const OdeRhs rhs = [&](double t, std::span<const double> y,
                         std::span<double> dy) {
    dy[0] = -k * schedule.mu(t) * y[0];
  };
  std::vector<double> v{1.0};
  Rk4 stepper(1);
  for (std::size_t i = 0; i < steps; ++i) {
    stepper.step(rhs, static_cast<double>(i) * h, v, h);
  }
  return v[0];
}

}  // namespace ctfb
