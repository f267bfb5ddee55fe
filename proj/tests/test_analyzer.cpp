// Log parsing and derived run metrics. Numeric anchors: 10 s steady-state
// iterations at batch 512 x 2048 tokens give 104 857.6 tokens/s, a 4000 ms
// run against a 1000 ms run is a 4x speedup and a 75% reduction, and a flat
// 400 W trace over 100 s at 1M tokens costs 0.04 J/token.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "trainkit/analyzer.hpp"
#include "trainkit/model_config.hpp"

using namespace trainkit;
using doctest::Approx;

namespace {

ParsedLog parse(const std::string& text) {
  std::istringstream stream(text);
  return parse_log(stream);
}

std::vector<LogRecord> flat_run(std::size_t n, double elapsed_ms) {
  std::vector<LogRecord> records(n);
  for (std::size_t i = 0; i < n; ++i) {
    records[i].iteration = i + 1;
    records[i].elapsed_ms = elapsed_ms;
  }
  return records;
}

}  // namespace

TEST_CASE("parse_log reads the two- and three-field forms") {
  ParsedLog log = parse(
      "iter 1 | elapsed_ms 12000 | loss 11.2\n"
      "\n"
      "iter 2 | elapsed_ms 10500.5\n"
      "  iter 3 | elapsed_ms 10000 | loss 9.875  \n");
  CHECK(log.diagnostics.empty());
  REQUIRE(log.records.size() == 3);
  CHECK(log.records[0].iteration == 1);
  CHECK(log.records[0].elapsed_ms == 12000.0);
  REQUIRE(log.records[0].loss);
  CHECK(*log.records[0].loss == 11.2);
  CHECK_FALSE(log.records[1].loss);
  CHECK(log.records[1].elapsed_ms == 10500.5);
  CHECK(log.records[2].iteration == 3);
}

TEST_CASE("malformed lines become diagnostics, not failures") {
  ParsedLog log = parse(
      "iter 1 | elapsed_ms 1000\n"
      "starting data loader\n"                      // not a record
      "iter x | elapsed_ms 1000\n"                  // bad iteration
      "iter 2 | elapsed_ms -5\n"                    // nonpositive time
      "iter 2 | elapsed 1000\n"                     // wrong key
      "iter 3 | elapsed_ms 1000 | loss\n"           // loss without value
      "iter 3 | elapsed_ms 1000 | loss 1 | x 2\n"   // too many fields
      "iter 4 | elapsed_ms 1000\n");
  REQUIRE(log.records.size() == 2);
  CHECK(log.records[0].iteration == 1);
  CHECK(log.records[1].iteration == 4);
  CHECK(log.diagnostics.size() == 6);
  CHECK(log.diagnostics[0].line == 2);
  CHECK(log.diagnostics[1].line == 3);
}

TEST_CASE("non-advancing iterations are dropped with a note") {
  ParsedLog log = parse(
      "iter 5 | elapsed_ms 1000\n"
      "iter 5 | elapsed_ms 1000\n"
      "iter 4 | elapsed_ms 1000\n"
      "iter 6 | elapsed_ms 1000\n");
  REQUIRE(log.records.size() == 2);
  CHECK(log.records[0].iteration == 5);
  CHECK(log.records[1].iteration == 6);
  REQUIRE(log.diagnostics.size() == 2);
  CHECK(log.diagnostics[0].message.find("does not advance") !=
        std::string::npos);
  CHECK(log.diagnostics[0].line == 2);
  CHECK(log.diagnostics[1].line == 3);
}

TEST_CASE("a log with no usable records is an error") {
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_log(empty), AnalyzeError);
  std::istringstream noise("hello\nworld\n");
  CHECK_THROWS_AS(parse_log(noise), AnalyzeError);
}

TEST_CASE("throughput discards the warmup and averages the tail") {
  // Three slow warmup iterations, then four at 10 s: the tail mean is 10 s,
  // so 512 * 2048 tokens per step / 10 s = 104 857.6 tokens/s.
  std::vector<LogRecord> records = flat_run(7, 10000.0);
  records[0].elapsed_ms = 12000.0;
  records[1].elapsed_ms = 11000.0;
  records[2].elapsed_ms = 10500.0;

  CHECK(throughput(records, 512, 2048) == Approx(104857.6).epsilon(1e-12));
  // Warmup zero averages everything.
  CHECK(throughput(records, 512, 2048, 0) ==
        Approx(512.0 * 2048.0 / (73500.0 / 7.0 / 1000.0)));

  CHECK_THROWS_AS(throughput(records, 0, 2048), std::invalid_argument);
  CHECK_THROWS_AS(throughput(records, 512, 0), std::invalid_argument);
  CHECK_THROWS_AS(throughput(flat_run(3, 1000.0), 512, 2048), AnalyzeError);
  CHECK_THROWS_AS(throughput({}, 512, 2048, 0), AnalyzeError);
}

TEST_CASE("flops_rate is six FLOPs per parameter per token") {
  ModelSpec model;  // 908_662_784 parameters
  CHECK(flops_rate(model, 104857.6) ==
        Approx(6.0 * 908662784.0 * 104857.6));
  CHECK(flops_rate(model, 0.0) == 0.0);
  CHECK_THROWS_AS(flops_rate(model, -1.0), std::invalid_argument);
}

TEST_CASE("compare reports speedup and time reduction") {
  CompareResult r = compare(flat_run(5, 4000.0), flat_run(3, 1000.0));
  CHECK(r.speedup == Approx(4.0).epsilon(1e-12));
  CHECK(r.reduction_percent == Approx(75.0).epsilon(1e-12));

  // Comparing a run against itself is a no-op.
  CompareResult same = compare(flat_run(4, 2500.0), flat_run(4, 2500.0));
  CHECK(same.speedup == Approx(1.0));
  CHECK(same.reduction_percent == Approx(0.0));

  CHECK_THROWS_AS(compare({}, flat_run(3, 1000.0)), AnalyzeError);
  CHECK_THROWS_AS(compare(flat_run(3, 1000.0), {}), AnalyzeError);
}

TEST_CASE("swapping compare sides inverts the speedup") {
  std::vector<LogRecord> a = flat_run(6, 3321.5);
  std::vector<LogRecord> b = flat_run(9, 1234.25);
  CompareResult ab = compare(a, b);
  CompareResult ba = compare(b, a);
  CHECK(ab.speedup * ba.speedup == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("energy_per_token integrates the power trace") {
  // Flat 400 W for 100 s = 40 kJ; at 1M tokens that is 0.04 J/token.
  std::vector<PowerSample> flat = {{0, 400}, {50, 400}, {100, 400}};
  CHECK(energy_per_token(flat, 1000000) == Approx(0.04).epsilon(1e-12));

  // Triangle: 0 W ramping to 100 W over 10 s = 500 J.
  std::vector<PowerSample> ramp = {{0, 0}, {10, 100}};
  CHECK(energy_per_token(ramp, 500) == Approx(1.0));

  // Trapezoids add up: splitting an interval changes nothing.
  std::vector<PowerSample> seg = {{0, 0}, {4, 40}, {10, 100}};
  CHECK(energy_per_token(seg, 500) == Approx(1.0));

  CHECK_THROWS_AS(energy_per_token(flat, 0), std::invalid_argument);
  CHECK_THROWS_AS(energy_per_token({{0, 400}}, 10), AnalyzeError);
  CHECK_THROWS_AS(energy_per_token({}, 10), AnalyzeError);
  std::vector<PowerSample> unordered = {{10, 400}, {0, 400}};
  CHECK_THROWS_AS(energy_per_token(unordered, 10), AnalyzeError);
}

TEST_CASE("scaling_efficiency normalizes against the smallest run") {
  std::vector<ScalingPoint> points = {
      {4, 320000}, {1, 100000}, {2, 180000}};
  auto result = scaling_efficiency(points);
  REQUIRE(result.size() == 3);
  CHECK(result[0].nodes == 1);
  CHECK(result[0].efficiency == Approx(1.0));
  CHECK(result[1].nodes == 2);
  CHECK(result[1].efficiency == Approx(0.9).epsilon(1e-12));
  CHECK(result[2].nodes == 4);
  CHECK(result[2].efficiency == Approx(0.8).epsilon(1e-12));

  // Superlinear scaling is reported as > 1, not clamped.
  auto super = scaling_efficiency({{1, 100.0}, {2, 250.0}});
  CHECK(super[1].efficiency == Approx(1.25));

  CHECK_THROWS_AS(scaling_efficiency({}), AnalyzeError);
  CHECK_THROWS_AS(scaling_efficiency({{2, 100.0}, {2, 120.0}}), AnalyzeError);
  CHECK_THROWS_AS(scaling_efficiency({{0, 100.0}}), AnalyzeError);
  CHECK_THROWS_AS(scaling_efficiency({{1, 0.0}, {2, 100.0}}), AnalyzeError);
}
