#include "ctfb/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "ctfb/errors.hpp"

namespace ctfb {

namespace {

void append_indexed(std::vector<std::string>& cols, std::string_view stem,
                    std::size_t count) {
  for (std::size_t i = 1; i <= count; ++i) {
    cols.push_back(std::string(stem) + std::to_string(i));
  }
}

// Row values in column order.
std::vector<double> flatten(const TraceRow& r) {
  std::vector<double> v;
  v.push_back(r.t);
  v.insert(v.end(), r.x.begin(), r.x.end());
  v.push_back(r.u);
  v.insert(v.end(), r.alpha.begin(), r.alpha.end());
  v.insert(v.end(), r.alpha_hat.begin(), r.alpha_hat.end());
  v.insert(v.end(), r.zeta.begin(), r.zeta.end());
  v.insert(v.end(), r.z.begin(), r.z.end());
  v.insert(v.end(), r.s.begin(), r.s.end());
  v.push_back(r.mu);
  v.insert(v.end(), r.sigma.begin(), r.sigma.end());
  v.push_back(r.v0);
  v.push_back(r.vn);
  return v;
}

TraceRow unflatten(const std::vector<double>& v, std::size_t n) {
  TraceRow r;
  auto it = v.begin();
  auto take = [&it](std::size_t count) {
    std::vector<double> out(it, it + static_cast<std::ptrdiff_t>(count));
    it += static_cast<std::ptrdiff_t>(count);
    return out;
  };
  r.t = *it++;
  r.x = take(n);
  r.u = *it++;
  r.alpha = take(n - 1);
  r.alpha_hat = take(n - 1);
  r.zeta = take(n);
  r.z = take(n);
  r.s = take(n);
  r.mu = *it++;
  r.sigma = take(n);
  r.v0 = *it++;
  r.vn = *it++;
  return r;
}

void write_double(std::ostream& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

}  // namespace

std::vector<std::string> trace_columns(std::size_t n) {
  std::vector<std::string> cols{"t"};
  append_indexed(cols, "x", n);
  cols.emplace_back("u");
  append_indexed(cols, "alpha_", n - 1);
  append_indexed(cols, "alpha_hat_", n - 1);
  append_indexed(cols, "zeta_", n);
  append_indexed(cols, "z", n);
  append_indexed(cols, "s", n);
  cols.emplace_back("mu");
  append_indexed(cols, "sigma_", n);
  cols.emplace_back("V0");
  cols.emplace_back("Vn");
  return cols;
}

void write_trace_csv(const SimTrace& trace, std::ostream& out) {
  const auto cols = trace_columns(trace.order);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i > 0) out << ',';
    out << cols[i];
  }
  out << '\n';
  for (const auto& r : trace.rows) {
    const auto v = flatten(r);
    if (v.size() != cols.size()) {
      throw std::invalid_argument("trace row does not match the trace order");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) out << ',';
      write_double(out, v[i]);
    }
    out << '\n';
  }
}

void write_trace_csv(const SimTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  write_trace_csv(trace, out);
  if (!out) {
    throw Error("failed writing '" + path.string() + "'");
  }
}

SimTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("trace is empty: missing header", 1);
  }
  const auto header = split(trim(line));
  std::size_t n = 0;
  for (auto h : header) {
    const std::string_view name = trim(h);
    if (name.size() > 1 && name[0] == 'x') ++n;
  }
  if (n < 2) {
    throw ParseError("trace header has fewer than two state columns", 1);
  }
  const auto expected = trace_columns(n);
  if (header.size() != expected.size()) {
    throw ParseError("trace header has " + std::to_string(header.size()) +
                         " columns, expected " + std::to_string(expected.size()),
                     1);
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (trim(header[i]) != expected[i]) {
      throw ParseError("trace header column " + std::to_string(i + 1) +
                           " is '" + std::string(trim(header[i])) +
                           "', expected '" + expected[i] + "'",
                       1);
    }
  }

  SimTrace trace;
  trace.order = n;
  std::size_t line_no = 1;
  std::vector<double> values(expected.size());
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto fields = split(body);
    if (fields.size() != expected.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(expected.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const std::string_view f = trim(fields[i]);
      const auto res = std::from_chars(f.data(), f.data() + f.size(), values[i]);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": column '" +
                             expected[i] + "' is not a number: '" +
                             std::string(f) + "'",
                         line_no);
      }
    }
    trace.rows.push_back(unflatten(values, n));
  }
  if (trace.rows.empty()) {
    throw ParseError("trace has a header but no rows", line_no);
  }
  if (trace.rows.size() >= 2) {
    const double span = trace.rows.back().t - trace.rows.front().t;
    trace.step = span / static_cast<double>(trace.rows.size() - 1);
  }
  return trace;
}

SimTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open trace '" + path.string() + "'");
  }
  return read_trace_csv(in);
}

double column_value(const TraceRow& row, std::size_t n, std::string_view name) {
  const auto cols = trace_columns(n);
  const auto v = flatten(row);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] == name) return v.at(i);
  }
  throw std::out_of_range("unknown trace column '" + std::string(name) + "'");
}

}  // namespace ctfb
