#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hypbo/errors.hpp"
#include "hypbo/trace_io.hpp"

namespace hypbo {
namespace {

Trace sample_trace() {
  Trace t;
  t.dim = 2;
  auto add = [&](int it, Source s, int h, double x0, double x1, double y, std::optional<double> acq, int l, int u) {
    TraceRecord r;
    r.iteration = it;
    r.source = s;
    r.hypothesis = h;
    r.x = Eigen::Vector2d(x0, x1);
    r.y = y;
    r.incumbent_after = t.records.empty() ? y : std::max(y, t.records.back().incumbent_after);
    r.acq_value = acq;
    r.l = l;
    r.u = u;
    t.records.push_back(r);
  };
  add(0, Source::init_hypothesis, 0, 0.1, 1.0 / 3.0, -2.0 / 7.0, std::nullopt, 0, 0);
  add(0, Source::init_global, -1, -4.2, 3.3e-17, -17.5, std::nullopt, 0, 0);
  add(1, Source::lower, 0, 0.125, std::nextafter(0.2, 1.0), -0.06, 1.234567890123e-9, 1, 0);
  add(2, Source::upper, -1, std::ldexp(1.0, -40), 5.0, -25.0, 0.0, 2, 1);
  return t;
}

TEST(TraceCsv, RoundTripIsExact) {
  const Trace t = sample_trace();
  std::ostringstream out;
  write_trace_csv(t, 7, out);
  std::istringstream in(out.str());
  const TrialTrace back = read_trace_csv(in);
  EXPECT_EQ(back.trial, 7);
  EXPECT_EQ(back.trace.dim, 2);
  ASSERT_EQ(back.trace.records.size(), t.records.size());
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const auto& a = t.records[i];
    const auto& b = back.trace.records[i];
    EXPECT_EQ(a.iteration, b.iteration);
    EXPECT_EQ(a.source, b.source);
    EXPECT_EQ(a.hypothesis, b.hypothesis);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.y, b.y);
    EXPECT_EQ(a.incumbent_after, b.incumbent_after);
    EXPECT_EQ(a.acq_value, b.acq_value);
    EXPECT_EQ(a.l, b.l);
    EXPECT_EQ(a.u, b.u);
  }
  std::ostringstream again;
  write_trace_csv(back.trace, 7, again);
  EXPECT_EQ(out.str(), again.str());
}

TEST(TraceCsv, HeaderLayout) {
  std::ostringstream out;
  write_trace_csv(sample_trace(), 0, out);
  const std::string first = out.str().substr(0, out.str().find('\n'));
  EXPECT_EQ(first, "trial,iteration,source,hypothesis,x_0,x_1,y,incumbent,acq_value,l,u");
}

TEST(TraceCsv, RejectsMalformedInput) {
  std::istringstream bad_header("trial,iteration,kind\n");
  EXPECT_THROW((void)read_trace_csv(bad_header), SchemaError);
  std::istringstream bad_number(
      "trial,iteration,source,hypothesis,x_0,y,incumbent,acq_value,l,u\n0,1,upper,,abc,1,1,,0,1\n");
  EXPECT_THROW((void)read_trace_csv(bad_number), ParseError);
  std::istringstream bad_source(
      "trial,iteration,source,hypothesis,x_0,y,incumbent,acq_value,l,u\n0,1,middle,,0.5,1,1,,0,1\n");
  EXPECT_THROW((void)read_trace_csv(bad_source), std::exception);
}

}  // namespace
}  // namespace hypbo
