#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sqnls/triangular.hpp"

namespace sqnls {

struct StepRecord {
  std::int64_t k = 0;
  double f = 0.0;
  double alpha = 0.0;
  bool accepted = false;
  double elapsed_s = 0.0;
};

/// Per-iteration log of one optimizer or baseline run.
struct RunTrace {
  std::vector<StepRecord> records;
  /// Iterate after each step, when the run stores them.
  std::vector<Vector> iterates;
  /// Set when a wall-clock budget stopped the run early.
  bool truncated = false;
};

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_float(double value);

/// Writes `k,f,alpha,accepted,elapsed_s` rows. With `with_timing` off the
/// elapsed column is written as 0, which keeps reruns byte-identical.
void write_trace_csv(const RunTrace& trace, std::ostream& os, bool with_timing = false);
void write_trace_csv(const RunTrace& trace, const std::string& path, bool with_timing = false);

/// Writes `k,x0,...,x{d-1}` rows for the stored iterates.
void write_iterates_csv(const RunTrace& trace, std::ostream& os);
void write_iterates_csv(const RunTrace& trace, const std::string& path);

/// Reads iterates back from the CSV written above.
std::vector<Vector> read_iterates_csv(const std::string& path);

/// Mean of the final ceil(tail_fraction * M) stored iterates.
Vector extract_estimate(const RunTrace& trace, double tail_fraction = 0.2);
Vector extract_estimate(const std::vector<Vector>& iterates, double tail_fraction = 0.2);

}  // namespace sqnls
