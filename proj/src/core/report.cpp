#include "ctfb/report.hpp"

#include <charconv>
#include <sstream>

namespace ctfb {

namespace {

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

std::string check_line(const InequalityCheck& c) {
  std::ostringstream out;
  out << "  [" << verdict(c.passed()) << "] " << c.name << ": " << c.checked
      << " points, " << c.violations << " violations, worst excess "
      << c.worst_excess;
  if (c.checked > 0) out << " at t=" << c.worst_time;
  out << ", tolerance " << c.tolerance << "\n";
  return out.str();
}

}  // namespace

std::string report_text(const CertificateReport& r) {
  std::ostringstream out;
  out << "certificate: " << verdict(r.passed()) << "\n";
  out << "order n=" << r.order << ", rows=" << r.rows << ", h=" << r.step
      << ", T=" << r.prescribed_time << ", eps=" << r.epsilon
      << ", mu_bar=" << r.mu_bar << "\n";
  out << "constants: K1=" << r.K1 << " K0=" << r.K0 << " Gamma0=" << r.Gamma0
      << " Gamma2(0)=" << r.Gamma2_at_0 << "\n";
  out << "checks:\n";
  for (const auto* c : {&r.consistency, &r.lyapunov_identity,
                        &r.decay_before_T, &r.bound_after_T,
                        &r.vn_nonincreasing, &r.compensator_bound}) {
    out << check_line(*c);
  }
  out << "  compensator bound skipped at " << r.compensator_points_skipped
      << " points where l_i < |g_i||alpha_hat_i - alpha_i|\n";
  out << "side condition l_i >= max|g_i| * tau_i: "
      << (r.side_condition_holds ? "holds" : "does not hold") << "\n";
  for (std::size_t i = 0; i < r.side_condition.size(); ++i) {
    const auto& a = r.side_condition[i];
    out << "  channel " << i + 1 << ": l=" << a.l << " tau=" << a.tau
        << " max|g|=" << a.g_max << " -> " << (a.holds ? "holds" : "fails")
        << "\n";
  }
  out << "residual sets at t=T:\n";
  out << "  V_n(0)=" << r.vn0 << " V_n(T)=" << r.vn_at_T
      << " max|s_i(T)|=" << r.max_abs_s_at_T << "\n";
  out << "  Omega_s (closed-form exponent)=" << r.omega_s
      << (r.s_within_omega_s ? " contains" : " does not contain")
      << " max|s_i(T)|\n";
  out << "  Omega_s (integral of mu)=" << r.omega_s_integral
      << (r.vn_within_omega_s_integral ? " bounds" : " does not bound")
      << " V_n(T)\n";
  out << "  V_0(0)=" << r.v00 << " V_0(T)=" << r.v0_at_T
      << " Omega_zeta=" << r.omega_zeta
      << (r.v0_within_omega_zeta ? " bounds" : " does not bound") << " V_0(T)\n";
  out << "  Omega_z=" << r.omega_z << "\n";
  return out.str();
}

std::string report_csv(const CertificateReport& r) {
  std::ostringstream out;
  out << "kind,name,value,checked,violations,tolerance,status\n";
  auto constant = [&out](const char* name, double v) {
    out << "constant," << name << "," << num(v) << ",,,,\n";
  };
  constant("K1", r.K1);
  constant("K0", r.K0);
  constant("Gamma0", r.Gamma0);
  constant("Gamma2_at_0", r.Gamma2_at_0);
  constant("Vn_0", r.vn0);
  constant("V0_0", r.v00);
  constant("Vn_T", r.vn_at_T);
  constant("V0_T", r.v0_at_T);
  constant("Omega_s", r.omega_s);
  constant("Omega_s_integral", r.omega_s_integral);
  constant("Omega_zeta", r.omega_zeta);
  constant("Omega_z", r.omega_z);
  for (std::size_t i = 0; i < r.side_condition.size(); ++i) {
    const auto& a = r.side_condition[i];
    out << "side_condition,channel_" << i + 1 << "," << num(a.tau) << ",,,"
        << num(a.l / (a.g_max > 0.0 ? a.g_max : 1.0)) << ","
        << (a.holds ? "holds" : "fails") << "\n";
  }
  for (const auto* c : {&r.consistency, &r.lyapunov_identity,
                        &r.decay_before_T, &r.bound_after_T,
                        &r.vn_nonincreasing, &r.compensator_bound}) {
    out << "check,\"" << c->name << "\"," << num(c->worst_excess) << ","
        << c->checked << "," << c->violations << "," << num(c->tolerance) << ","
        << verdict(c->passed()) << "\n";
  }
  out << "certificate,overall,,,,," << verdict(r.passed()) << "\n";
  return out.str();
}

}  // namespace ctfb
