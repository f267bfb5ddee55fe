#include "trainkit/analyzer.hpp"

#include <algorithm>
#include <map>

#include "trainkit/text.hpp"

namespace trainkit {

namespace {

// One field: "<key> <value>", single space.
std::optional<std::string> field_value(std::string_view field,
                                       std::string_view key) {
  if (!field.starts_with(key)) return std::nullopt;
  field.remove_prefix(key.size());
  if (!field.starts_with(" ")) return std::nullopt;
  field.remove_prefix(1);
  if (field.empty() || field.find(' ') != std::string_view::npos)
    return std::nullopt;
  return std::string(field);
}

}  // namespace

ParsedLog parse_log(std::istream& input) {
  ParsedLog parsed;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    std::string_view text = trim(line);
    if (text.empty()) continue;

    auto malformed = [&](const char* why) {
      parsed.diagnostics.push_back({line_no, why});
    };

    // " | " is the field separator; a bare '|' inside a field is malformed
    // anyway, so splitting on '|' and trimming is equivalent.
    std::vector<std::string> fields = split(text, '|');
    if (fields.size() != 2 && fields.size() != 3) {
      malformed("expected 'iter <n> | elapsed_ms <x> [| loss <y>]'");
      continue;
    }

    auto iter_text = field_value(trim(fields[0]), "iter");
    auto elapsed_text = field_value(trim(fields[1]), "elapsed_ms");
    if (!iter_text || !elapsed_text) {
      malformed("expected 'iter <n> | elapsed_ms <x> [| loss <y>]'");
      continue;
    }
    auto iter = parse_u64(*iter_text);
    auto elapsed = parse_f64(*elapsed_text);
    if (!iter || !elapsed) {
      malformed("unparseable iter or elapsed_ms value");
      continue;
    }
    if (!(*elapsed > 0)) {
      malformed("elapsed_ms must be > 0");
      continue;
    }

    LogRecord record;
    record.iteration = *iter;
    record.elapsed_ms = *elapsed;
    if (fields.size() == 3) {
      auto loss_text = field_value(trim(fields[2]), "loss");
      auto loss = loss_text ? parse_f64(*loss_text) : std::nullopt;
      if (!loss) {
        malformed("unparseable loss field");
        continue;
      }
      record.loss = *loss;
    }

    if (!parsed.records.empty() &&
        record.iteration <= parsed.records.back().iteration) {
      parsed.diagnostics.push_back(
          {line_no, "iteration " + std::to_string(record.iteration) +
                        " does not advance past " +
                        std::to_string(parsed.records.back().iteration) +
                        "; record dropped"});
      continue;
    }
    parsed.records.push_back(record);
  }
  if (parsed.records.empty())
    throw AnalyzeError("no parseable log records in input");
  return parsed;
}

double throughput(const std::vector<LogRecord>& records,
                  std::uint64_t global_batch, std::uint64_t seq_len,
                  std::size_t warmup) {
  if (global_batch == 0 || seq_len == 0)
    throw std::invalid_argument("global_batch and seq_len must be >= 1");
  if (records.size() <= warmup)
    throw AnalyzeError("need more than " + std::to_string(warmup) +
                       " records to measure steady-state throughput");
  double total_ms = 0;
  for (std::size_t i = warmup; i < records.size(); ++i)
    total_ms += records[i].elapsed_ms;
  const double mean_seconds =
      total_ms / static_cast<double>(records.size() - warmup) / 1000.0;
  return static_cast<double>(global_batch) * static_cast<double>(seq_len) /
         mean_seconds;
}

double flops_rate(const ModelSpec& model, double tokens_per_second) {
  if (tokens_per_second < 0)
    throw std::invalid_argument("tokens_per_second must be >= 0");
  return 6.0 * static_cast<double>(param_count(model).total) *
         tokens_per_second;
}

namespace {

double mean_elapsed_ms(const std::vector<LogRecord>& records) {
  double total = 0;
  for (const LogRecord& record : records) total += record.elapsed_ms;
  return total / static_cast<double>(records.size());
}

}  // namespace

CompareResult compare(const std::vector<LogRecord>& a,
                      const std::vector<LogRecord>& b) {
  if (a.empty() || b.empty())
    throw AnalyzeError("compare needs records on both sides");
  const double mean_a = mean_elapsed_ms(a);
  const double mean_b = mean_elapsed_ms(b);
  CompareResult result;
  result.speedup = mean_a / mean_b;
  result.reduction_percent = (1.0 - mean_b / mean_a) * 100.0;
  return result;
}

double energy_per_token(const std::vector<PowerSample>& samples,
                        std::uint64_t tokens) {
  if (tokens == 0) throw std::invalid_argument("tokens must be >= 1");
  if (samples.size() < 2)
    throw AnalyzeError("energy integration needs at least two power samples");
  double joules = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double dt = samples[i].t_seconds - samples[i - 1].t_seconds;
    if (dt < 0)
      throw AnalyzeError("power samples must be ordered by time");
    joules += 0.5 * (samples[i].watts + samples[i - 1].watts) * dt;
  }
  return joules / static_cast<double>(tokens);
}

std::vector<ScalingEfficiency> scaling_efficiency(
    const std::vector<ScalingPoint>& points) {
  if (points.empty()) throw AnalyzeError("no scaling points");
  std::map<std::uint64_t, double> by_nodes;
  for (const ScalingPoint& point : points) {
    if (point.nodes == 0)
      throw AnalyzeError("scaling point with zero nodes");
    if (!by_nodes.emplace(point.nodes, point.tokens_per_second).second)
      throw AnalyzeError("duplicate scaling point for " +
                         std::to_string(point.nodes) + " nodes");
  }
  const auto& [base_nodes, base_rate] = *by_nodes.begin();
  if (!(base_rate > 0))
    throw AnalyzeError("baseline throughput must be > 0");
  std::vector<ScalingEfficiency> result;
  result.reserve(by_nodes.size());
  for (const auto& [nodes, rate] : by_nodes)
    result.push_back(
        {nodes, (rate / base_rate) /
                    (static_cast<double>(nodes) /
                     static_cast<double>(base_nodes))});
  return result;
}

}  // namespace trainkit
