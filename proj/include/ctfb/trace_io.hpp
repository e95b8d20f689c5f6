#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ctfb/sim.hpp"

namespace ctfb {

/// Fixed column order of the trace CSV for a plant of order n:
///   t, x1..xn, u, alpha_1..alpha_{n-1}, alpha_hat_1..alpha_hat_{n-1},
///   zeta_1..zeta_n, z1..zn, s1..sn, mu, sigma_1..sigma_n, V0, Vn
std::vector<std::string> trace_columns(std::size_t n);

/// Shortest round-trip decimal for every value, one row per grid point.
void write_trace_csv(const SimTrace& trace, std::ostream& out);
void write_trace_csv(const SimTrace& trace, const std::filesystem::path& path);

/// Infers n from the header and requires the exact column order above.
/// Throws ParseError with the offending line, or Error if the file cannot be
/// opened.
SimTrace read_trace_csv(std::istream& in);
SimTrace read_trace_csv(const std::filesystem::path& path);

/// Value of a named column in one row. Throws std::out_of_range for
/// unknown names.
double column_value(const TraceRow& row, std::size_t n, std::string_view name);

}  // namespace ctfb
