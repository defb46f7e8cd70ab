#pragma once

#include <filesystem>
#include <iosfwd>

#include "hypbo/engine.hpp"

namespace hypbo {

/// Columns: trial,iteration,source,hypothesis,x_0..x_{d-1},y,incumbent,acq_value,l,u.
/// Reals are written with 17 significant digits so a read-back is exact;
/// an absent hypothesis or acquisition value is an empty field.
void write_trace_csv(const Trace& trace, int trial, std::ostream& out);
void write_trace_csv(const Trace& trace, int trial, const std::filesystem::path& path);

struct TrialTrace {
  int trial = 0;
  Trace trace;
};

/// Inverse of write_trace_csv. Hypothesis labels are not stored in the CSV
/// and come back empty. Throws SchemaError or ParseError.
[[nodiscard]] TrialTrace read_trace_csv(std::istream& in);
[[nodiscard]] TrialTrace read_trace_csv(const std::filesystem::path& path);

}  // namespace hypbo
