// Training-log and power-trace analysis: throughput, model FLOP rate,
// run-to-run comparison, energy per token, scaling efficiency.
#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trainkit/model_config.hpp"

namespace trainkit {

struct LogRecord {
  std::uint64_t iteration = 0;
  double elapsed_ms = 0;
  std::optional<double> loss;
  std::optional<double> timestamp;  // reserved; the line grammar has none
};

struct ParseDiagnostic {
  std::size_t line = 0;
  std::string message;
};

struct ParsedLog {
  std::vector<LogRecord> records;
  std::vector<ParseDiagnostic> diagnostics;
};

class AnalyzeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Line grammar: `iter <u64> | elapsed_ms <f64> [| loss <f64>]`, fields
// separated by " | ". Malformed lines become diagnostics, not failures;
// blank lines are skipped. Iterations must increase: a record that does not
// advance past its predecessor is dropped with a diagnostic. Throws
// AnalyzeError when no line parses at all.
ParsedLog parse_log(std::istream& input);

// Tokens per second over the steady-state tail: the first `warmup` records
// are discarded (compilation, cache warm-up and allocator churn dominate
// them), the rest contribute their mean iteration time. Throws AnalyzeError
// when nothing remains after warmup; std::invalid_argument on a zero batch.
double throughput(const std::vector<LogRecord>& records,
                  std::uint64_t global_batch, std::uint64_t seq_len,
                  std::size_t warmup = 3);

// Model FLOP/s at a given token rate: 6 * P * tokens_per_second (forward +
// backward for one dense decoder pass).
double flops_rate(const ModelSpec& model, double tokens_per_second);

struct CompareResult {
  double speedup = 1.0;            // mean_a / mean_b: how much faster b is
  double reduction_percent = 0.0;  // (1 - mean_b / mean_a) * 100
};

// Mean iteration time of `a` against `b`, no warmup exclusion. Throws
// AnalyzeError when either run is empty.
CompareResult compare(const std::vector<LogRecord>& a,
                      const std::vector<LogRecord>& b);

struct PowerSample {
  double t_seconds = 0;
  double watts = 0;
};

// Joules per token: trapezoidal integral of the power trace divided by the
// token count. Samples must be in time order. Throws AnalyzeError with
// fewer than two samples or unordered time; std::invalid_argument when
// tokens == 0.
double energy_per_token(const std::vector<PowerSample>& samples,
                        std::uint64_t tokens);

struct ScalingPoint {
  std::uint64_t nodes = 0;
  double tokens_per_second = 0;
};

struct ScalingEfficiency {
  std::uint64_t nodes = 0;
  double efficiency = 0;  // 1.0 = linear scaling from the baseline
};

// Efficiency of each point against the smallest-node-count baseline:
// (rate_n / rate_base) / (n / base). Output sorted by node count; the
// baseline itself reports 1.0. Throws AnalyzeError on duplicates or an empty
// input.
std::vector<ScalingEfficiency> scaling_efficiency(
    const std::vector<ScalingPoint>& points);

}  // namespace trainkit
