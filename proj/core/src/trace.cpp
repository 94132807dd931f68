#include "sqnls/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sqnls/errors.hpp"

namespace sqnls {

std::string format_float(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_trace_csv(const RunTrace& trace, std::ostream& os, bool with_timing) {
  os << "k,f,alpha,accepted,elapsed_s\n";
  for (const StepRecord& r : trace.records) {
    os << r.k << ',' << format_float(r.f) << ',' << format_float(r.alpha) << ','
       << (r.accepted ? 1 : 0) << ','
       << (with_timing ? format_float(r.elapsed_s) : "0") << '\n';
  }
}

void write_trace_csv(const RunTrace& trace, const std::string& path, bool with_timing) {
  std::ofstream os(path);
  if (!os) {
    throw Error("write_trace_csv: cannot open " + path);
  }
  write_trace_csv(trace, os, with_timing);
}

void write_iterates_csv(const RunTrace& trace, std::ostream& os) {
  const int d = trace.iterates.empty() ? 0 : static_cast<int>(trace.iterates[0].size());
  os << "k";
  for (int j = 0; j < d; ++j) {
    os << ",x" << j;
  }
  os << '\n';
  for (std::size_t i = 0; i < trace.iterates.size(); ++i) {
    os << trace.records.at(i).k;
    for (int j = 0; j < d; ++j) {
      os << ',' << format_float(trace.iterates[i](j));
    }
    os << '\n';
  }
}

void write_iterates_csv(const RunTrace& trace, const std::string& path) {
  std::ofstream os(path);
  if (!os) {
    throw Error("write_iterates_csv: cannot open " + path);
  }
  write_iterates_csv(trace, os);
}

std::vector<Vector> read_iterates_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    throw Error("read_iterates_csv: cannot open " + path);
  }
  std::vector<Vector> iterates;
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> values;
    bool first = true;
    while (std::getline(ss, cell, ',')) {
      if (first) {
        first = false;  // k column
        continue;
      }
      values.push_back(std::stod(cell));
    }
    Vector x(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
      x(j) = values[j];
    }
    iterates.push_back(std::move(x));
  }
  return iterates;
}

Vector extract_estimate(const std::vector<Vector>& iterates, double tail_fraction) {
  if (!(tail_fraction > 0.0) || tail_fraction > 1.0) {
    throw std::invalid_argument("extract_estimate: tail fraction must lie in (0,1]");
  }
  if (iterates.empty()) {
    throw EmptyTrace("extract_estimate: no stored iterates");
  }
  const std::size_t m = iterates.size();
  // Guard the ceil against 0.2*10 = 2.0000000000000004-style roundoff.
  std::size_t window = static_cast<std::size_t>(
      std::ceil(tail_fraction * static_cast<double>(m) * (1.0 - 1e-12)));
  window = std::min(std::max<std::size_t>(window, 1), m);

  Vector mean = Vector::Zero(iterates[0].size());
  for (std::size_t i = m - window; i < m; ++i) {
    mean += iterates[i];
  }
  return mean / static_cast<double>(window);
}

Vector extract_estimate(const RunTrace& trace, double tail_fraction) {
  return extract_estimate(trace.iterates, tail_fraction);
}

}  // namespace sqnls
