// Randomized well-formed plans for renderer round-trip and validation
// properties. Every draw comes from a caller-supplied SplitMix64, so a failing
// case reproduces from the test's seed alone.
//
// Generated plans satisfy the renderer's contract by construction: the degree
// products are exact, layer count is a multiple of pp, the schedule passes
// check_schedule, the port is in range, and every free-text field sticks to a
// shell-safe character set.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trainkit/rng.hpp"
#include "trainkit/script.hpp"

namespace trainkit::testing {

inline std::uint64_t pick(SplitMix64& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + rng.next_u64() % (hi - lo + 1);
}

inline std::uint64_t pick_from(SplitMix64& rng,
                               const std::vector<std::uint64_t>& values) {
  return values[rng.next_u64() % values.size()];
}

inline std::string random_token(SplitMix64& rng, const std::string& prefix) {
  static const char alphabet[] =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";
  std::string out = prefix;
  const std::uint64_t len = pick(rng, 3, 12);
  for (std::uint64_t i = 0; i < len; ++i)
    out.push_back(alphabet[rng.next_u64() % (sizeof alphabet - 1)]);
  return out;
}

inline std::vector<std::uint64_t> divisors_of(std::uint64_t n) {
  std::vector<std::uint64_t> divisors;
  for (std::uint64_t d = 1; d <= n; ++d)
    if (n % d == 0) divisors.push_back(d);
  return divisors;
}

inline ScriptPlan random_plan(SplitMix64& rng) {
  ScriptPlan plan;
  plan.job_name = random_token(rng, "job_");
  plan.account = random_token(rng, "acct_");
  plan.partition = random_token(rng, "part_");
  plan.cpus_per_task = pick(rng, 1, 256);

  plan.layout.gpus_per_node = pick_from(rng, {1, 2, 4, 8});
  plan.layout.nodes = pick(rng, 1, 64);
  const std::uint64_t ngpus = plan.layout.nodes * plan.layout.gpus_per_node;
  plan.layout.tp = pick_from(rng, divisors_of(ngpus));
  plan.layout.pp = pick_from(rng, divisors_of(ngpus / plan.layout.tp));
  plan.layout.dp = ngpus / (plan.layout.tp * plan.layout.pp);
  plan.layout.micro_batch = pick(rng, 1, 8);
  plan.layout.gas = pick(rng, 1, 32);
  plan.layout.global_batch =
      plan.layout.micro_batch * plan.layout.gas * plan.layout.dp;

  plan.model.num_layers = plan.layout.pp * pick(rng, 1, 4);
  plan.model.num_heads = pick_from(rng, {4, 8, 16, 32});
  plan.model.hidden_size = plan.model.num_heads * pick(rng, 8, 256);
  plan.model.seq_len = pick_from(rng, {512, 1024, 2048, 4096});
  plan.model.vocab_size = pick(rng, 1000, 200000);

  plan.schedule.save_interval = pick(rng, 1, 10000);
  plan.schedule.log_interval = pick(rng, 1, 1000);
  plan.schedule.eval_interval = pick(rng, 1, 100000);
  plan.schedule.train_samples = pick(rng, 1, 1000000000);
  plan.schedule.train_tokens = pick(rng, 1, 1000000000000ULL);
  const std::uint64_t lr_millionths = pick(rng, 2, 1000000);
  plan.schedule.lr = static_cast<double>(lr_millionths) * 1e-6;
  plan.schedule.min_lr =
      static_cast<double>(pick(rng, 1, lr_millionths)) * 1e-6;
  plan.schedule.lr_decay_samples = pick(rng, 2, 1000000000);
  plan.schedule.lr_warmup_samples =
      pick(rng, 0, plan.schedule.lr_decay_samples - 1);
  plan.schedule.walltime_limit = pick(rng, 60, 359999);
  plan.schedule.exit_duration_minutes = pick(rng, 1, 600);

  plan.master_port = pick(rng, 1024, 65535);
  plan.container_image = random_token(rng, "image_") + ".sif";
  plan.paths.vocab = random_token(rng, "data/vocab_") + ".json";
  plan.paths.merges = random_token(rng, "data/merges_") + ".txt";
  plan.paths.dataset = random_token(rng, "data/corpus_") + "_text_document";
  plan.paths.output_root = random_token(rng, "runs/");
  plan.load_checkpoints = (rng.next_u64() & 1) != 0;

  plan.env = EnvProfile::defaults();
  // Values round-trip generically; names must stay the defaults. The debug
  // group is only written when enabled, so its values stay stock otherwise.
  auto shuffle_values = [&](std::vector<EnvVar>& group) {
    for (EnvVar& var : group)
      if ((rng.next_u64() & 3) == 0) var.value = random_token(rng, "v");
  };
  shuffle_values(plan.env.error_handling);
  shuffle_values(plan.env.timeout_mitigation);
  shuffle_values(plan.env.interface_selection);
  plan.env.debug_enabled = (rng.next_u64() & 1) != 0;
  if (plan.env.debug_enabled) shuffle_values(plan.env.debug);

  return plan;
}

}  // namespace trainkit::testing
