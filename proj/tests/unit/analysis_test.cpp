#include <gtest/gtest.h>

#include <cmath>

#include "ctfb/analysis.hpp"
#include "test_util.hpp"

using namespace ctfb;
using ctfb::testing::benchmark_config;

namespace {

SimTrace synthetic_z1(const std::vector<double>& z1, double h) {
  SimTrace tr;
  tr.order = 2;
  tr.step = h;
  for (std::size_t k = 0; k < z1.size(); ++k) {
    TraceRow r;
    r.t = k * h;
    r.z = {z1[k], 0.0};
    tr.rows.push_back(r);
  }
  return tr;
}

const SimTrace& benchmark_trace() {
  static const SimTrace tr = run(benchmark_config());
  return tr;
}

}  // namespace

TEST(LyapunovSeries, KnownValues) {
  SimTrace tr;
  tr.order = 2;
  for (int k = 0; k < 3; ++k) {
    TraceRow r;
    r.t = k;
    r.s = {3.0 * (k + 1), 4.0 * (k + 1)};
    r.zeta = {1.0, 0.0};
    tr.rows.push_back(r);
  }
  auto ls = lyapunov_series(tr);
  EXPECT_DOUBLE_EQ(ls.vn[0], 12.5);
  EXPECT_DOUBLE_EQ(ls.vn[1], 50.0);
  EXPECT_DOUBLE_EQ(ls.v0[2], 0.5);
  EXPECT_DOUBLE_EQ(ls.vn_dot[1], (112.5 - 12.5) / 2.0);
  EXPECT_DOUBLE_EQ(ls.v0_dot[1], 0.0);
}

TEST(LyapunovSeries, AllZeroTrace) {
  SimTrace tr;
  tr.order = 2;
  for (int k = 0; k < 4; ++k) {
    TraceRow r;
    r.t = k;
    r.s = {0.0, 0.0};
    r.zeta = {0.0, 0.0};
    tr.rows.push_back(r);
  }
  auto ls = lyapunov_series(tr);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(ls.v0[k], 0.0);
    EXPECT_EQ(ls.vn[k], 0.0);
    EXPECT_EQ(ls.vn_dot[k], 0.0);
  }
}

TEST(LyapunovSeries, BenchmarkDecreasesAfterTransient) {
  const auto ls = lyapunov_series(benchmark_trace());
  // s is a difference of O(1) states, so V_n carries round-off near 1e-27.
  for (std::size_t k = 100; k + 1 < ls.vn.size(); ++k) {
    ASSERT_LE(ls.vn[k + 1], ls.vn[k] + 1e-24) << "t=" << ls.t[k];
  }
}

TEST(Certificate, ZeroInitialErrorGivesZeroResidualSet) {
  auto cfg = ctfb::testing::chain_config(3, {0, 0, 0}, 5e-4, 2.0);
  const auto tr = run(cfg);
  for (const auto& r : tr.rows)
    for (double s : r.s) ASSERT_EQ(s, 0.0);
  const auto rep = certify_trace(tr, cfg);
  EXPECT_EQ(rep.vn0, 0.0);
  EXPECT_EQ(rep.omega_s, 0.0);
  EXPECT_EQ(rep.omega_s_integral, 0.0);
  EXPECT_TRUE(rep.passed());
}

TEST(Certificate, ConstantsRecomputed) {
  const auto rep = certify_trace(benchmark_trace(), benchmark_config());
  EXPECT_DOUBLE_EQ(rep.K1, 2.0);
  EXPECT_DOUBLE_EQ(rep.K0, 2.0 * 5.0 * 1.0);
  EXPECT_DOUBLE_EQ(rep.Gamma0, 0.1 * 5 + 0.4 * 5 + 20.0 * 5);
  EXPECT_DOUBLE_EQ(rep.Gamma2_at_0, 15.0);
  EXPECT_DOUBLE_EQ(rep.omega_s, std::exp(-2.0 * (2.0 + 8.0)) * rep.vn0);
  EXPECT_NEAR(rep.omega_s_integral,
              std::exp(-2.0 * 2.5 * std::log(5.0)) * rep.vn0, 1e-15);
}

TEST(Certificate, BenchmarkPasses) {
  const auto rep = certify_trace(benchmark_trace(), benchmark_config());
  EXPECT_TRUE(rep.passed()) << "identity worst " << rep.lyapunov_identity.worst_excess;
  EXPECT_EQ(rep.consistency.violations, 0u);
  EXPECT_GT(rep.lyapunov_identity.checked, 9000u);
  EXPECT_GT(rep.decay_before_T.checked, 1000u);
  EXPECT_GT(rep.bound_after_T.checked, 7000u);
  EXPECT_GT(rep.compensator_bound.checked, 0u);
  EXPECT_TRUE(rep.vn_within_omega_s_integral);
}

TEST(Certificate, SideConditionAuditReportsBenchmarkGains) {
  const auto rep = certify_trace(benchmark_trace(), benchmark_config());
  ASSERT_EQ(rep.side_condition.size(), 2u);
  // The benchmark gains l_1 = 0.1, l_2 = 0.4 are below the observed filter
  // error peaks, so the global condition does not hold.
  EXPECT_FALSE(rep.side_condition_holds);
  EXPECT_GT(rep.side_condition[0].tau, 0.1);
  EXPECT_DOUBLE_EQ(rep.side_condition[0].g_max, 1.0);
  EXPECT_GT(rep.compensator_points_skipped, 0u);
}

TEST(Certificate, TamperedTraceFails) {
  SimTrace tr = benchmark_trace();
  for (auto& r : tr.rows) {
    if (r.t >= 2.0) {
      for (double& s : r.s) s *= 10.0;
    }
  }
  const auto rep = certify_trace(tr, benchmark_config());
  EXPECT_FALSE(rep.passed());
  EXPECT_GT(rep.consistency.violations, 0u);
}

// Even with consistent columns, a jump in s larger than the O(h) envelope
// breaks the identity.
TEST(Certificate, ConsistentTamperStillFails) {
  SimTrace tr = benchmark_trace();
  for (auto& r : tr.rows) {
    if (r.t >= 5.0) {
      for (std::size_t i = 0; i < r.s.size(); ++i) {
        r.zeta[i] -= 0.5;
        r.s[i] = r.z[i] - r.zeta[i];
      }
      double v0 = 0, vn = 0;
      for (std::size_t i = 0; i < r.s.size(); ++i) {
        v0 += 0.5 * r.zeta[i] * r.zeta[i];
        vn += 0.5 * r.s[i] * r.s[i];
      }
      r.v0 = v0;
      r.vn = vn;
    }
  }
  const auto rep = certify_trace(tr, benchmark_config());
  EXPECT_EQ(rep.consistency.violations, 0u);
  EXPECT_GT(rep.lyapunov_identity.violations, 0u);
  EXPECT_FALSE(rep.passed());
}

TEST(Certificate, EmptyTraceIsNotAPass) {
  SimTrace tr;
  tr.order = 3;
  const auto rep = certify_trace(tr, benchmark_config());
  EXPECT_FALSE(rep.passed());
  EXPECT_EQ(rep.lyapunov_identity.checked, 0u);
}

TEST(Certificate, OrderMismatchThrows) {
  SimTrace tr;
  tr.order = 2;
  EXPECT_THROW(certify_trace(tr, benchmark_config()), std::invalid_argument);
}

TEST(InequalityCheck, RecordsWorstAndNaN) {
  InequalityCheck c;
  c.tolerance = 0.1;
  c.record(0.0, 1.0, 1.05);
  c.record(1.0, 1.0, 0.95);
  EXPECT_EQ(c.violations, 0u);
  EXPECT_DOUBLE_EQ(c.worst_time, 1.0);
  c.record(2.0, std::nan(""), 0.0);
  EXPECT_EQ(c.violations, 1u);
  EXPECT_FALSE(c.passed());
}

TEST(ResidualFactor, ScalarDecayMatchesIntegral) {
  GainSchedule g(2.0, 0.5);
  const double exact = residual_factor_integral(g, 1.0);
  EXPECT_NEAR(exact, std::exp(-2.5 * std::log(5.0)), 1e-15);
  EXPECT_NEAR(scalar_decay_ratio(g, 1.0, 1e-4), exact, 1e-6 * exact);
}

TEST(ResidualFactor, ClosedFormUnderstatesExactDecay) {
  GainSchedule g(2.0, 0.5);
  EXPECT_DOUBLE_EQ(residual_factor_closed_form(g, 1.0), std::exp(-10.0));
  // T + T^2/eps overstates the integral of mu, so the closed form is smaller
  // than the true decay factor.
  EXPECT_GT(scalar_decay_ratio(g, 1.0, 1e-4),
            100.0 * residual_factor_closed_form(g, 1.0));
}

TEST(ResidualFactor, IntegralProperty) {
  ctfb::testing::Gen gen(13);
  for (int trial = 0; trial < 20; ++trial) {
    const double T = gen.uniform(0.5, 3.0);
    const double eps = gen.uniform(0.1, 0.9) * T;
    const double k = gen.uniform(0.1, 2.0);
    GainSchedule g(T, eps);
    const double exact = residual_factor_integral(g, k);
    EXPECT_NEAR(scalar_decay_ratio(g, k, T / 20000), exact, 1e-6 * exact);
  }
}

TEST(TrackingMetrics, PerfectTracking) {
  auto m = tracking_metrics(synthetic_z1(std::vector<double>(101, 0.0), 0.1),
                            2.0, 8.0);
  EXPECT_EQ(m.max_abs_z1_after_T, 0.0);
  EXPECT_EQ(m.terminal_abs_z1, 0.0);
  EXPECT_EQ(m.window_max_abs_z1, 0.0);
  EXPECT_EQ(m.settling_time, 0.0);
}

TEST(TrackingMetrics, ConstantError) {
  auto m = tracking_metrics(synthetic_z1(std::vector<double>(101, -0.3), 0.1),
                            2.0, 8.0);
  EXPECT_DOUBLE_EQ(m.max_abs_z1_after_T, 0.3);
  EXPECT_DOUBLE_EQ(m.terminal_abs_z1, 0.3);
  EXPECT_DOUBLE_EQ(m.window_max_abs_z1, 0.3);
  EXPECT_NEAR(m.settling_time, 10.0, 1e-12);
}

TEST(TrackingMetrics, SettlingAfterLastExcursion) {
  std::vector<double> z(101, 0.0);
  z[0] = 1.0;
  z[30] = 0.5;
  auto m = tracking_metrics(synthetic_z1(z, 0.1), 2.0, 8.0);
  EXPECT_NEAR(m.settling_time, 3.1, 1e-12);
  EXPECT_DOUBLE_EQ(m.max_abs_z1_after_T, 0.5);
  EXPECT_EQ(m.window_max_abs_z1, 0.0);
}

TEST(Baselines, MatchOracle) {
  const auto& prop = benchmark_trace();
  const auto dsc = run_baseline(benchmark_config(), Variant::dsc);
  const auto cg = run_baseline(benchmark_config(), Variant::constant_gain);
  const auto mp = tracking_metrics(prop, 2.0, 8.0);
  const auto md = tracking_metrics(dsc, 2.0, 8.0);
  const auto mc = tracking_metrics(cg, 2.0, 8.0);
  const double rel = 1e-6;
  EXPECT_NEAR(mp.window_max_abs_z1, 2.1965024681863676e-4, rel * 2.2e-4);
  EXPECT_NEAR(mp.terminal_abs_z1, 1.2822673409962349e-4, rel * 1.3e-4);
  EXPECT_NEAR(mp.max_abs_z1_after_T, 7.052648882853729e-3, rel * 7e-3);
  EXPECT_NEAR(md.window_max_abs_z1, 2.2015533481561933e-4, rel * 2.2e-4);
  EXPECT_NEAR(md.terminal_abs_z1, 1.2765549734861104e-4, rel * 1.3e-4);
  EXPECT_NEAR(md.max_abs_z1_after_T, 9.71564944462433e-3, rel * 1e-2);
  EXPECT_NEAR(mc.window_max_abs_z1, 2.1965024681863676e-4, rel * 2.2e-4);
  EXPECT_NEAR(mc.max_abs_z1_after_T, 2.1965024681863676e-4, rel * 2.2e-4);
  EXPECT_LE(mp.window_max_abs_z1, md.window_max_abs_z1);
}

TEST(Baselines, ProposedBeatsDscOverTerminalWindow) {
  const auto mp = tracking_metrics(benchmark_trace(), 2.0, 8.0);
  const auto md =
      tracking_metrics(run_baseline(benchmark_config(), Variant::dsc), 2.0, 8.0);
  EXPECT_LT(mp.window_max_abs_z1, md.window_max_abs_z1);
  EXPECT_LT(mp.max_abs_z1_after_T, md.max_abs_z1_after_T);
}

TEST(Baselines, DscZeroErrorStartStaysZero) {
  auto cfg = ctfb::testing::chain_config(3, {0, 0, 0});
  const auto tr = run_baseline(cfg, Variant::dsc);
  for (const auto& r : tr.rows) ASSERT_EQ(r.z[0], 0.0);
}

// Once mu has saturated the proposed and constant-gain vector fields agree.
TEST(Baselines, ConstantGainSharesRhsAfterT) {
  auto prop_cfg = benchmark_config();
  auto cg_cfg = benchmark_config();
  cg_cfg.variant = Variant::constant_gain;
  const ClosedLoop prop(prop_cfg), cg(cg_cfg);
  ctfb::testing::Gen gen(31);
  std::vector<double> a(8), b(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto y = gen.vector(8, -2, 2);
    const double t = gen.uniform(2.0, 10.0);
    prop.derivative(t, y, a);
    cg.derivative(t, y, b);
    ASSERT_EQ(a, b) << "t=" << t;
  }
  const auto y = gen.vector(8, -1, 1);
  prop.derivative(1.0, y, a);
  cg.derivative(1.0, y, b);
  EXPECT_NE(a, b);
}

TEST(Baselines, DscKeepsCompensatorAtZero) {
  const auto dsc = run_baseline(benchmark_config(1e-3, 3.0), Variant::dsc);
  for (const auto& r : dsc.rows) {
    for (double z : r.zeta) ASSERT_EQ(z, 0.0);
    for (std::size_t i = 0; i < r.s.size(); ++i) ASSERT_EQ(r.s[i], r.z[i]);
  }
}

TEST(Baselines, ConstantGainHoldsMu) {
  const auto cg =
      run_baseline(benchmark_config(1e-3, 3.0), Variant::constant_gain, 5.0);
  for (const auto& r : cg.rows) ASSERT_DOUBLE_EQ(r.mu, 5.0);
}
