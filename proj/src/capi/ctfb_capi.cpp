#include "ctfb/ctfb.h"

#include <exception>
#include <fstream>
#include <new>
#include <string>

#include "ctfb/analysis.hpp"
#include "ctfb/errors.hpp"
#include "ctfb/report.hpp"
#include "ctfb/scenario.hpp"
#include "ctfb/trace_io.hpp"

struct ctfb_scenario {
  ctfb::Scenario value;
};

struct ctfb_trace {
  ctfb::SimTrace value;
};

struct ctfb_report {
  ctfb::CertificateReport value;
  std::string text;
  std::string csv;
};

namespace {

thread_local std::string g_last_error;

ctfb_status fail(ctfb_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Maps the exception in flight to a status code.
ctfb_status translate() {
  try {
    throw;
  } catch (const ctfb::ParseError& e) {
    return fail(CTFB_ERR_PARSE, e.what());
  } catch (const ctfb::ValidationError& e) {
    return fail(CTFB_ERR_VALIDATION, e.what());
  } catch (const ctfb::ControllabilityLoss& e) {
    return fail(CTFB_ERR_CONTROLLABILITY, e.what());
  } catch (const ctfb::NonFinite& e) {
    return fail(CTFB_ERR_NON_FINITE, e.what());
  } catch (const ctfb::Error& e) {
    return fail(CTFB_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(CTFB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(CTFB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CTFB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CTFB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CTFB_ERR_INTERNAL, "unknown error");
  }
}

template <typename Fn>
ctfb_status guarded(Fn&& fn) {
  try {
    fn();
    return CTFB_OK;
  } catch (...) {
    return translate();
  }
}

ctfb_status null_argument(const char* what) {
  return fail(CTFB_ERR_INVALID_ARGUMENT, std::string(what) + " is NULL");
}

ctfb::Variant to_cpp(ctfb_variant v) {
  switch (v) {
    case CTFB_VARIANT_PROPOSED:
      return ctfb::Variant::proposed;
    case CTFB_VARIANT_DSC:
      return ctfb::Variant::dsc;
    case CTFB_VARIANT_CONSTANT_GAIN:
      return ctfb::Variant::constant_gain;
  }
  throw std::invalid_argument("unknown variant");
}

ctfb_variant to_c(ctfb::Variant v) {
  switch (v) {
    case ctfb::Variant::proposed:
      return CTFB_VARIANT_PROPOSED;
    case ctfb::Variant::dsc:
      return CTFB_VARIANT_DSC;
    case ctfb::Variant::constant_gain:
      return CTFB_VARIANT_CONSTANT_GAIN;
  }
  return CTFB_VARIANT_PROPOSED;
}

// Applies `edit` to a copy and commits only if the copy validates.
template <typename Edit>
ctfb_status edit_scenario(ctfb_scenario* scenario, Edit&& edit) {
  if (scenario == nullptr) return null_argument("scenario");
  return guarded([&] {
    ctfb::Scenario copy = scenario->value;
    edit(copy);
    copy.validate();
    scenario->value = std::move(copy);
  });
}

void write_file(const char* path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ctfb::Error(std::string("cannot open '") + path + "'");
  out << content;
  if (!out) throw ctfb::Error(std::string("failed writing '") + path + "'");
}

}  // namespace

extern "C" {

const char* ctfb_version(void) { return "0.1.0"; }

const char* ctfb_last_error(void) { return g_last_error.c_str(); }

const char* ctfb_status_string(ctfb_status status) {
  switch (status) {
    case CTFB_OK:
      return "ok";
    case CTFB_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case CTFB_ERR_PARSE:
      return "parse error";
    case CTFB_ERR_VALIDATION:
      return "validation error";
    case CTFB_ERR_CONTROLLABILITY:
      return "controllability loss";
    case CTFB_ERR_NON_FINITE:
      return "non-finite value";
    case CTFB_ERR_IO:
      return "i/o error";
    case CTFB_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* ctfb_variant_name(ctfb_variant variant) {
  try {
    return ctfb::variant_name(to_cpp(variant)).data();
  } catch (...) {
    return "unknown";
  }
}

ctfb_status ctfb_variant_parse(const char* name, ctfb_variant* out) {
  if (name == nullptr) return null_argument("name");
  if (out == nullptr) return null_argument("out");
  const auto v = ctfb::parse_variant(name);
  if (!v) {
    return fail(CTFB_ERR_INVALID_ARGUMENT,
                std::string("unknown variant '") + name +
                    "' (expected proposed, dsc or constant_gain_cfb)");
  }
  *out = to_c(*v);
  return CTFB_OK;
}

ctfb_status ctfb_scenario_load(const char* path, ctfb_scenario** out) {
  if (path == nullptr) return null_argument("path");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ctfb_scenario{ctfb::parse_scenario(path)};
  });
}

ctfb_status ctfb_scenario_parse(const char* toml_text, ctfb_scenario** out) {
  if (toml_text == nullptr) return null_argument("toml_text");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ctfb_scenario{ctfb::parse_scenario_string(toml_text)};
  });
}

ctfb_status ctfb_scenario_clone(const ctfb_scenario* scenario,
                                ctfb_scenario** out) {
  if (scenario == nullptr) return null_argument("scenario");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new ctfb_scenario{scenario->value}; });
}

void ctfb_scenario_free(ctfb_scenario* scenario) { delete scenario; }

ctfb_status ctfb_scenario_save(const ctfb_scenario* scenario,
                               const char* path) {
  if (scenario == nullptr) return null_argument("scenario");
  if (path == nullptr) return null_argument("path");
  return guarded(
      [&] { write_file(path, ctfb::serialize_scenario(scenario->value)); });
}

ctfb_status ctfb_scenario_set_step(ctfb_scenario* scenario, double h) {
  return edit_scenario(scenario, [h](ctfb::Scenario& s) { s.step = h; });
}

ctfb_status ctfb_scenario_set_horizon(ctfb_scenario* scenario,
                                      double horizon) {
  return edit_scenario(scenario,
                       [horizon](ctfb::Scenario& s) { s.horizon = horizon; });
}

ctfb_status ctfb_scenario_set_variant(ctfb_scenario* scenario,
                                      ctfb_variant variant) {
  return edit_scenario(scenario, [variant](ctfb::Scenario& s) {
    s.variant = to_cpp(variant);
  });
}

ctfb_status ctfb_scenario_get_variant(const ctfb_scenario* scenario,
                                      ctfb_variant* out) {
  if (scenario == nullptr) return null_argument("scenario");
  if (out == nullptr) return null_argument("out");
  *out = to_c(scenario->value.variant);
  return CTFB_OK;
}

size_t ctfb_scenario_order(const ctfb_scenario* scenario) {
  return scenario == nullptr ? 0 : scenario->value.order();
}

double ctfb_scenario_prescribed_time(const ctfb_scenario* scenario) {
  return scenario == nullptr ? 0.0 : scenario->value.prescribed_time;
}

double ctfb_scenario_horizon(const ctfb_scenario* scenario) {
  return scenario == nullptr ? 0.0 : scenario->value.horizon;
}

const char* ctfb_scenario_output_path(const ctfb_scenario* scenario) {
  return scenario == nullptr ? "" : scenario->value.output_path.c_str();
}

ctfb_status ctfb_run(const ctfb_scenario* scenario, ctfb_trace** out) {
  if (scenario == nullptr) return null_argument("scenario");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ctfb_trace{ctfb::run(scenario->value.to_sim_config())};
  });
}

void ctfb_trace_free(ctfb_trace* trace) { delete trace; }

size_t ctfb_trace_rows(const ctfb_trace* trace) {
  return trace == nullptr ? 0 : trace->value.rows.size();
}

size_t ctfb_trace_order(const ctfb_trace* trace) {
  return trace == nullptr ? 0 : trace->value.order;
}

ctfb_status ctfb_trace_value(const ctfb_trace* trace, size_t row,
                             const char* column, double* out) {
  if (trace == nullptr) return null_argument("trace");
  if (column == nullptr) return null_argument("column");
  if (out == nullptr) return null_argument("out");
  if (row >= trace->value.rows.size()) {
    return fail(CTFB_ERR_INVALID_ARGUMENT, "row index out of range");
  }
  return guarded([&] {
    *out = ctfb::column_value(trace->value.rows[row], trace->value.order,
                              column);
  });
}

ctfb_status ctfb_trace_write_csv(const ctfb_trace* trace, const char* path) {
  if (trace == nullptr) return null_argument("trace");
  if (path == nullptr) return null_argument("path");
  return guarded([&] {
    ctfb::write_trace_csv(trace->value, std::filesystem::path(path));
  });
}

ctfb_status ctfb_trace_read_csv(const char* path, ctfb_trace** out) {
  if (path == nullptr) return null_argument("path");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ctfb_trace{ctfb::read_trace_csv(std::filesystem::path(path))};
  });
}

ctfb_status ctfb_tracking_metrics(const ctfb_scenario* scenario,
                                  const ctfb_trace* trace, double window_start,
                                  ctfb_metrics* out) {
  if (scenario == nullptr) return null_argument("scenario");
  if (trace == nullptr) return null_argument("trace");
  if (out == nullptr) return null_argument("out");
  if (trace->value.rows.empty()) {
    return fail(CTFB_ERR_INVALID_ARGUMENT, "trace is empty");
  }
  return guarded([&] {
    const double end = trace->value.rows.back().t;
    const double start = window_start < 0.0 ? end - 2.0 : window_start;
    const auto m = ctfb::tracking_metrics(
        trace->value, scenario->value.prescribed_time, start);
    *out = ctfb_metrics{m.max_abs_z1_after_T, m.terminal_abs_z1,
                        m.window_max_abs_z1, m.settling_time};
  });
}

ctfb_status ctfb_certify(const ctfb_scenario* scenario,
                         const ctfb_trace* trace, ctfb_report** out) {
  if (scenario == nullptr) return null_argument("scenario");
  if (trace == nullptr) return null_argument("trace");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto rep = ctfb::certify_trace(trace->value,
                                   scenario->value.to_sim_config());
    auto text = ctfb::report_text(rep);
    auto csv = ctfb::report_csv(rep);
    *out = new ctfb_report{std::move(rep), std::move(text), std::move(csv)};
  });
}

void ctfb_report_free(ctfb_report* report) { delete report; }

int ctfb_report_passed(const ctfb_report* report) {
  return report != nullptr && report->value.passed() ? 1 : 0;
}

int ctfb_report_side_condition_holds(const ctfb_report* report) {
  return report != nullptr && report->value.side_condition_holds ? 1 : 0;
}

const char* ctfb_report_text(const ctfb_report* report) {
  return report == nullptr ? "" : report->text.c_str();
}

const char* ctfb_report_csv(const ctfb_report* report) {
  return report == nullptr ? "" : report->csv.c_str();
}

ctfb_status ctfb_report_write(const ctfb_report* report, const char* text_path,
                              const char* csv_path) {
  if (report == nullptr) return null_argument("report");
  return guarded([&] {
    if (text_path != nullptr) write_file(text_path, report->text);
    if (csv_path != nullptr) write_file(csv_path, report->csv);
  });
}

}  // extern "C"
