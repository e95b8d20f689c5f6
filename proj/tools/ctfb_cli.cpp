// ctfb: run, compare and certify command-filtered backstepping simulations.
//
//   ctfb run --scenario electromech_paper.toml --out trace.csv
//   ctfb compare --scenario electromech_paper.toml
//   ctfb certify trace.csv
//   ctfb list-scenarios
//
// Exit codes: 0 success, 1 violated certificate, 2 usage or parse error,
// 3 simulation or i/o failure.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctfb/ctfb.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCertificate = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

// CTFB_LOG: "quiet" (errors only), "info" (default) or "debug".
int verbosity() {
  static const int level = [] {
    const char* env = std::getenv("CTFB_LOG");
    if (env == nullptr) return 1;
    const std::string v(env);
    if (v == "quiet" || v == "0") return 0;
    if (v == "debug" || v == "2") return 2;
    return 1;
  }();
  return level;
}

void info(const std::string& msg) {
  if (verbosity() >= 1) std::cerr << "ctfb: " << msg << "\n";
}

void debug(const std::string& msg) {
  if (verbosity() >= 2) std::cerr << "ctfb: " << msg << "\n";
}

int report_failure(ctfb_status status, const std::string& context) {
  std::cerr << "ctfb: " << context << ": " << ctfb_status_string(status)
            << ": " << ctfb_last_error() << "\n";
  switch (status) {
    case CTFB_ERR_PARSE:
    case CTFB_ERR_VALIDATION:
    case CTFB_ERR_INVALID_ARGUMENT:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

struct ScenarioDeleter {
  void operator()(ctfb_scenario* s) const { ctfb_scenario_free(s); }
};
struct TraceDeleter {
  void operator()(ctfb_trace* t) const { ctfb_trace_free(t); }
};
struct ReportDeleter {
  void operator()(ctfb_report* r) const { ctfb_report_free(r); }
};
using ScenarioPtr = std::unique_ptr<ctfb_scenario, ScenarioDeleter>;
using TracePtr = std::unique_ptr<ctfb_trace, TraceDeleter>;
using ReportPtr = std::unique_ptr<ctfb_report, ReportDeleter>;

fs::path scenario_dir() {
  if (const char* env = std::getenv("CTFB_SCENARIO_DIR")) return env;
  return CTFB_SCENARIO_DIR;
}

// A path that exists is used as is; otherwise the bundled directory is
// searched by file name.
fs::path resolve_scenario(const std::string& arg) {
  const fs::path direct(arg);
  if (fs::exists(direct)) return direct;
  const fs::path bundled = scenario_dir() / direct.filename();
  if (fs::exists(bundled)) return bundled;
  return direct;
}

// trace.csv -> trace.report.txt etc.
fs::path sidecar(const fs::path& trace, const std::string& suffix) {
  fs::path p = trace;
  p.replace_extension(suffix);
  return p;
}

struct Overrides {
  std::optional<double> step;
  std::optional<double> horizon;
  std::optional<std::string> variant;
};

int load_scenario(const std::string& arg, const Overrides& ov,
                  ScenarioPtr& out) {
  const fs::path path = resolve_scenario(arg);
  debug("loading scenario " + path.string());
  ctfb_scenario* raw = nullptr;
  if (auto st = ctfb_scenario_load(path.string().c_str(), &raw); st != CTFB_OK) {
    return report_failure(st, "loading " + path.string());
  }
  out.reset(raw);
  if (ov.step) {
    if (auto st = ctfb_scenario_set_step(out.get(), *ov.step); st != CTFB_OK) {
      return report_failure(st, "--step");
    }
  }
  if (ov.horizon) {
    if (auto st = ctfb_scenario_set_horizon(out.get(), *ov.horizon);
        st != CTFB_OK) {
      return report_failure(st, "--horizon");
    }
  }
  if (ov.variant) {
    ctfb_variant v{};
    if (auto st = ctfb_variant_parse(ov.variant->c_str(), &v); st != CTFB_OK) {
      return report_failure(st, "--variant");
    }
    if (auto st = ctfb_scenario_set_variant(out.get(), v); st != CTFB_OK) {
      return report_failure(st, "--variant");
    }
  }
  return kExitOk;
}

int cmd_run(const std::string& scenario_arg, std::string out_arg,
            const Overrides& ov) {
  ScenarioPtr scenario;
  if (int rc = load_scenario(scenario_arg, ov, scenario); rc != kExitOk) {
    return rc;
  }
  if (out_arg.empty()) out_arg = ctfb_scenario_output_path(scenario.get());
  if (out_arg.empty()) out_arg = "trace.csv";
  const fs::path out(out_arg);

  ctfb_variant variant{};
  ctfb_scenario_get_variant(scenario.get(), &variant);
  info(std::string("running variant ") + ctfb_variant_name(variant));

  ctfb_trace* raw_trace = nullptr;
  if (auto st = ctfb_run(scenario.get(), &raw_trace); st != CTFB_OK) {
    return report_failure(st, "simulation");
  }
  TracePtr trace(raw_trace);
  debug(std::to_string(ctfb_trace_rows(trace.get())) + " rows");

  if (auto st = ctfb_trace_write_csv(trace.get(), out.string().c_str());
      st != CTFB_OK) {
    return report_failure(st, "writing trace");
  }
  const fs::path scenario_copy = sidecar(out, ".scenario.toml");
  if (auto st = ctfb_scenario_save(scenario.get(), scenario_copy.string().c_str());
      st != CTFB_OK) {
    return report_failure(st, "writing scenario sidecar");
  }

  ctfb_report* raw_report = nullptr;
  if (auto st = ctfb_certify(scenario.get(), trace.get(), &raw_report);
      st != CTFB_OK) {
    return report_failure(st, "certification");
  }
  ReportPtr report(raw_report);
  const fs::path text = sidecar(out, ".report.txt");
  const fs::path csv = sidecar(out, ".report.csv");
  if (auto st = ctfb_report_write(report.get(), text.string().c_str(),
                                  csv.string().c_str());
      st != CTFB_OK) {
    return report_failure(st, "writing report");
  }
  info("wrote " + out.string() + ", " + text.string() + ", " + csv.string());
  std::cout << ctfb_report_text(report.get());
  return ctfb_report_passed(report.get()) ? kExitOk : kExitCertificate;
}

int cmd_certify(const std::string& trace_arg, std::string scenario_arg) {
  const fs::path trace_path(trace_arg);
  if (scenario_arg.empty()) {
    scenario_arg = sidecar(trace_path, ".scenario.toml").string();
    if (!fs::exists(scenario_arg)) {
      std::cerr << "ctfb: no --scenario given and no sidecar " << scenario_arg
                << "\n";
      return kExitUsage;
    }
  }
  ScenarioPtr scenario;
  if (int rc = load_scenario(scenario_arg, {}, scenario); rc != kExitOk) {
    return rc;
  }
  ctfb_trace* raw_trace = nullptr;
  if (auto st = ctfb_trace_read_csv(trace_path.string().c_str(), &raw_trace);
      st != CTFB_OK) {
    return report_failure(st, "reading " + trace_path.string());
  }
  TracePtr trace(raw_trace);
  ctfb_report* raw_report = nullptr;
  if (auto st = ctfb_certify(scenario.get(), trace.get(), &raw_report);
      st != CTFB_OK) {
    return report_failure(st, "certification");
  }
  ReportPtr report(raw_report);
  std::cout << ctfb_report_text(report.get());
  return ctfb_report_passed(report.get()) ? kExitOk : kExitCertificate;
}

struct CompareRow {
  std::string variant;
  ctfb_metrics metrics{};
  int certified = 0;
  ctfb_status status = CTFB_OK;
  std::string error;
};

int cmd_compare(const std::string& scenario_arg, const std::string& out_stem,
                const Overrides& ov, double window_start) {
  ScenarioPtr base;
  if (int rc = load_scenario(scenario_arg, ov, base); rc != kExitOk) return rc;

  const ctfb_variant variants[] = {CTFB_VARIANT_PROPOSED, CTFB_VARIANT_DSC,
                                   CTFB_VARIANT_CONSTANT_GAIN};
  std::vector<std::future<CompareRow>> jobs;
  for (ctfb_variant v : variants) {
    ctfb_scenario* copy = nullptr;
    if (auto st = ctfb_scenario_clone(base.get(), &copy); st != CTFB_OK) {
      return report_failure(st, "clone");
    }
    ScenarioPtr owned(copy);
    if (auto st = ctfb_scenario_set_variant(owned.get(), v); st != CTFB_OK) {
      return report_failure(st, "variant");
    }
    jobs.push_back(std::async(
        std::launch::async,
        [v, window_start, out_stem, sc = std::move(owned)]() {
          CompareRow row;
          row.variant = ctfb_variant_name(v);
          auto bail = [&row](ctfb_status st) {
            row.status = st;
            row.error = ctfb_last_error();
            return row;
          };
          ctfb_trace* raw = nullptr;
          if (auto st = ctfb_run(sc.get(), &raw); st != CTFB_OK) return bail(st);
          TracePtr trace(raw);
          if (auto st = ctfb_tracking_metrics(sc.get(), trace.get(),
                                              window_start, &row.metrics);
              st != CTFB_OK) {
            return bail(st);
          }
          ctfb_report* rep = nullptr;
          if (auto st = ctfb_certify(sc.get(), trace.get(), &rep);
              st != CTFB_OK) {
            return bail(st);
          }
          row.certified = ctfb_report_passed(rep);
          ctfb_report_free(rep);
          if (!out_stem.empty()) {
            const std::string path = out_stem + "_" + row.variant + ".csv";
            if (auto st = ctfb_trace_write_csv(trace.get(), path.c_str());
                st != CTFB_OK) {
              return bail(st);
            }
            const std::string sc_path =
                out_stem + "_" + row.variant + ".scenario.toml";
            if (auto st = ctfb_scenario_save(sc.get(), sc_path.c_str());
                st != CTFB_OK) {
              return bail(st);
            }
          }
          return row;
        }));
  }

  std::vector<CompareRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  for (const auto& r : rows) {
    if (r.status != CTFB_OK) {
      std::cerr << "ctfb: " << r.variant << ": "
                << ctfb_status_string(r.status) << ": " << r.error << "\n";
      return kExitRuntime;
    }
  }

  std::printf("%-18s %16s %16s %16s %12s %11s\n", "variant", "max|z1| t>=T",
              "terminal |z1|", "window max|z1|", "settling[s]", "certificate");
  for (const auto& r : rows) {
    std::printf("%-18s %16.9e %16.9e %16.9e %12.4f %11s\n", r.variant.c_str(),
                r.metrics.max_abs_z1_after_T, r.metrics.terminal_abs_z1,
                r.metrics.window_max_abs_z1, r.metrics.settling_time,
                r.certified ? "pass" : "fail");
  }
  return kExitOk;
}

int cmd_list() {
  const fs::path dir = scenario_dir();
  std::error_code ec;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".toml") files.push_back(entry.path());
  }
  if (ec) {
    std::cerr << "ctfb: cannot list " << dir << ": " << ec.message() << "\n";
    return kExitRuntime;
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::ifstream in(f);
    std::string first;
    std::getline(in, first);
    if (first.rfind("#", 0) == 0) {
      first = first.substr(first.find_first_not_of("# "));
    } else {
      first.clear();
    }
    std::printf("%-28s %s\n", f.filename().string().c_str(), first.c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Command-filtered backstepping simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ctfb_version()));

  Overrides ov;
  std::string scenario_arg;
  std::string out_arg;
  double window_start = -1.0;

  auto add_overrides = [&ov](CLI::App* cmd) {
    cmd->add_option("--step", ov.step, "Integrator step h [s]");
    cmd->add_option("--horizon", ov.horizon, "Simulated horizon [s]");
  };

  auto* run = app.add_subcommand("run", "Simulate a scenario, write trace and report");
  run->add_option("--scenario", scenario_arg, "Scenario TOML (path or bundled name)")
      ->required();
  run->add_option("--out", out_arg, "Trace CSV path");
  add_overrides(run);
  run->add_option("--variant", ov.variant, "proposed | dsc | constant_gain_cfb");

  auto* compare = app.add_subcommand(
      "compare", "Run proposed and both baselines, print a metrics table");
  compare->add_option("--scenario", scenario_arg, "Scenario TOML")->required();
  compare->add_option("--out", out_arg, "Write <out>_<variant>.csv per variant");
  compare->add_option("--window-start", window_start,
                      "Start of the terminal window [s] (default: horizon - 2)");
  add_overrides(compare);

  std::string trace_arg;
  auto* certify = app.add_subcommand("certify", "Re-check an existing trace CSV");
  certify->add_option("trace", trace_arg, "Trace CSV")->required();
  certify->add_option("--scenario", scenario_arg,
                      "Scenario TOML (default: <trace>.scenario.toml)");

  auto* list = app.add_subcommand("list-scenarios", "List bundled scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (run->parsed()) return cmd_run(scenario_arg, out_arg, ov);
  if (compare->parsed()) {
    return cmd_compare(scenario_arg, out_arg, ov, window_start);
  }
  if (certify->parsed()) return cmd_certify(trace_arg, scenario_arg);
  if (list->parsed()) return cmd_list();
  return kExitUsage;
}
