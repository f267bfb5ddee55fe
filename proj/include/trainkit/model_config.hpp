// Transformer shape and training schedule, plus exact parameter counting.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace trainkit {

// Decoder-only transformer shape. Plain aggregate: construct freely, gate
// with check_model at trust boundaries (config load, CLI).
struct ModelSpec {
  std::uint64_t num_layers = 16;
  std::uint64_t hidden_size = 2048;
  std::uint64_t num_heads = 8;
  std::uint64_t seq_len = 2048;
  std::uint64_t vocab_size = 50257;
};

// Throws std::invalid_argument unless all fields >= 1 and hidden_size is
// divisible by num_heads.
void check_model(const ModelSpec& model);

struct ParamCount {
  std::uint64_t embedding = 0;  // vocab * hidden (tied input/output, rotary
                                // position encoding adds no table)
  std::uint64_t block = 0;      // all decoder blocks together
  std::uint64_t total = 0;      // embedding + blocks + final layer norm
};

// Exact count with biases and layer norms included:
//   embedding = V*H
//   block     = L * (12*H^2 + 13*H)
//   total     = embedding + block + 2*H
// num_layers = 0 is legal (degenerate no-block model).
ParamCount param_count(const ModelSpec& model);

// global_batch * seq_len. Throws std::invalid_argument if global_batch == 0.
std::uint64_t tokens_per_step(const ModelSpec& model,
                              std::uint64_t global_batch);

// Learning-rate schedule and run-control knobs, in optimizer-step and sample
// units. walltime_limit is the scheduler limit in seconds. train_tokens is
// carried alongside train_samples; both are emitted verbatim and neither is
// interpreted.
struct ScheduleSpec {
  std::uint64_t save_interval = 3000;
  std::uint64_t log_interval = 10;
  std::uint64_t eval_interval = 40000;
  std::uint64_t train_samples = 244140;
  std::uint64_t train_tokens = 500000000;
  double lr = 0.00025;
  double min_lr = 0.000025;
  std::uint64_t lr_decay_samples = 126953125;
  std::uint64_t lr_warmup_samples = 183105;
  std::uint64_t walltime_limit = 1200;       // seconds
  std::uint64_t exit_duration_minutes = 60;  // graceful-exit window
};

// Hard errors only: save_interval >= 1, lr >= min_lr > 0, warmup < decay,
// walltime >= 1. Throws std::invalid_argument.
void check_schedule(const ScheduleSpec& schedule);

// Non-fatal oddities worth surfacing, e.g. a decay horizon longer than the
// run itself (legitimate for short test runs of a production schedule).
std::vector<std::string> schedule_warnings(const ScheduleSpec& schedule);

}  // namespace trainkit
