#include "hypbo/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hypbo/errors.hpp"

namespace hypbo {

namespace {

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse(const std::string& text, std::size_t line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("trace csv line " + std::to_string(line) + ": cannot parse '" + text + "'");
  }
  return v;
}

}  // namespace

void write_trace_csv(const Trace& trace, int trial, std::ostream& out) {
  out << "trial,iteration,source,hypothesis";
  for (int k = 0; k < trace.dim; ++k) out << ",x_" << k;
  out << ",y,incumbent,acq_value,l,u\n";
  for (const auto& r : trace.records) {
    out << trial << ',' << r.iteration << ',' << source_name(r.source) << ',';
    if (r.hypothesis >= 0) out << r.hypothesis;
    for (int k = 0; k < trace.dim; ++k) out << ',' << real(r.x(k));
    out << ',' << real(r.y) << ',' << real(r.incumbent_after) << ',';
    if (r.acq_value) out << real(*r.acq_value);
    out << ',' << r.l << ',' << r.u << '\n';
  }
}

void write_trace_csv(const Trace& trace, int trial, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_trace_csv(trace, trial, out);
}

TrialTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("trace csv: empty file");
  const std::vector<std::string> header = split(line);
  if (header.size() < 9 || header[0] != "trial" || header[1] != "iteration" || header[2] != "source" ||
      header[3] != "hypothesis") {
    throw SchemaError("trace csv: unexpected header");
  }
  const int dim = static_cast<int>(header.size()) - 9;
  for (int k = 0; k < dim; ++k) {
    if (header[static_cast<std::size_t>(4 + k)] != "x_" + std::to_string(k)) {
      throw SchemaError("trace csv: unexpected column '" + header[static_cast<std::size_t>(4 + k)] + "'");
    }
  }
  const std::size_t tail = static_cast<std::size_t>(4 + dim);
  if (header[tail] != "y" || header[tail + 1] != "incumbent" || header[tail + 2] != "acq_value" ||
      header[tail + 3] != "l" || header[tail + 4] != "u") {
    throw SchemaError("trace csv: unexpected trailing columns");
  }

  TrialTrace out;
  out.trace.dim = dim;
  std::size_t line_no = 1;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line);
    if (f.size() != header.size()) {
      throw SchemaError("trace csv line " + std::to_string(line_no) + ": wrong field count");
    }
    const int trial = parse<int>(f[0], line_no);
    if (first) out.trial = trial;
    if (trial != out.trial) throw SchemaError("trace csv: mixed trial ids");
    first = false;
    TraceRecord r;
    r.iteration = parse<int>(f[1], line_no);
    r.source = parse_source(f[2]);
    r.hypothesis = f[3].empty() ? -1 : parse<int>(f[3], line_no);
    r.x.resize(dim);
    for (int k = 0; k < dim; ++k) r.x(k) = parse<double>(f[static_cast<std::size_t>(4 + k)], line_no);
    r.y = parse<double>(f[tail], line_no);
    r.incumbent_after = parse<double>(f[tail + 1], line_no);
    if (!f[tail + 2].empty()) r.acq_value = parse<double>(f[tail + 2], line_no);
    r.l = parse<int>(f[tail + 3], line_no);
    r.u = parse<int>(f[tail + 4], line_no);
    out.trace.records.push_back(std::move(r));
  }
  return out;
}

TrialTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open trace " + path.string());
  return read_trace_csv(in);
}

}  // namespace hypbo
