#include "trainkit/model_config.hpp"

#include <stdexcept>

namespace trainkit {

void check_model(const ModelSpec& model) {
  if (model.num_layers < 1 || model.hidden_size < 1 || model.num_heads < 1 ||
      model.seq_len < 1 || model.vocab_size < 1)
    throw std::invalid_argument("model dimensions must all be >= 1");
  if (model.hidden_size % model.num_heads != 0)
    throw std::invalid_argument("hidden_size must be divisible by num_heads");
}

ParamCount param_count(const ModelSpec& model) {
  const std::uint64_t h = model.hidden_size;
  ParamCount count;
  count.embedding = model.vocab_size * h;
  // Per block: attention QKV (3H^2 + 3H) and output projection (H^2 + H),
  // MLP up 4H (4H^2 + 4H) and down (4H^2 + H), two layer norms (2H each).
  // Weights sum to 12H^2, biases and norms to 13H.
  count.block = model.num_layers * (12 * h * h + 13 * h);
  // 2H: the final layer norm after the block stack.
  count.total = count.embedding + count.block + 2 * h;
  return count;
}

std::uint64_t tokens_per_step(const ModelSpec& model,
                              std::uint64_t global_batch) {
  if (global_batch == 0)
    throw std::invalid_argument("global_batch must be >= 1");
  return global_batch * model.seq_len;
}

void check_schedule(const ScheduleSpec& schedule) {
  if (schedule.save_interval < 1)
    throw std::invalid_argument("save_interval must be >= 1");
  if (!(schedule.min_lr > 0.0))
    throw std::invalid_argument("min_lr must be > 0");
  if (!(schedule.lr >= schedule.min_lr))
    throw std::invalid_argument("lr must be >= min_lr");
  if (schedule.lr_warmup_samples >= schedule.lr_decay_samples)
    throw std::invalid_argument(
        "lr_warmup_samples must be < lr_decay_samples");
  if (schedule.walltime_limit < 1)
    throw std::invalid_argument("walltime_limit must be >= 1 second");
}

std::vector<std::string> schedule_warnings(const ScheduleSpec& schedule) {
  std::vector<std::string> warnings;
  if (schedule.lr_decay_samples > schedule.train_samples)
    warnings.push_back(
        "lr_decay_samples (" + std::to_string(schedule.lr_decay_samples) +
        ") exceeds train_samples (" + std::to_string(schedule.train_samples) +
        "); the run ends before the schedule decays fully");
  return warnings;
}

}  // namespace trainkit
