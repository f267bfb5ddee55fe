// Model shape checks, exact parameter counting against an independently
// assembled per-tensor sum, and schedule gating.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <stdexcept>

#include "trainkit/model_config.hpp"
#include "trainkit/rng.hpp"

using namespace trainkit;

namespace {

// Tensor-by-tensor reference count for one decoder block, written as the
// tensors actually appear in the module: fused QKV projection, attention
// output projection, the two MLP linears (4x expansion), and two layer norms
// with weight and bias each.
std::uint64_t block_params(std::uint64_t h) {
  std::uint64_t qkv = 3 * h * h + 3 * h;
  std::uint64_t attn_out = h * h + h;
  std::uint64_t mlp_up = 4 * h * h + 4 * h;
  std::uint64_t mlp_down = 4 * h * h + h;
  std::uint64_t layer_norms = 2 * (h + h);
  return qkv + attn_out + mlp_up + mlp_down + layer_norms;
}

}  // namespace

TEST_CASE("param_count matches the per-tensor sum") {
  SplitMix64 rng(11);
  for (int i = 0; i < 200; ++i) {
    ModelSpec m;
    m.num_heads = 1 + rng.next_u64() % 64;
    m.hidden_size = m.num_heads * (1 + rng.next_u64() % 128);
    m.num_layers = rng.next_u64() % 100;
    m.vocab_size = 1 + rng.next_u64() % 300000;
    ParamCount count = param_count(m);
    CHECK(count.embedding == m.vocab_size * m.hidden_size);
    CHECK(count.block == m.num_layers * block_params(m.hidden_size));
    CHECK(count.total ==
          count.embedding + count.block + 2 * m.hidden_size);
  }
}

TEST_CASE("reference model parameter counts") {
  ModelSpec m;  // defaults are the 800M reference shape
  CHECK(m.num_layers == 16);
  CHECK(m.hidden_size == 2048);
  CHECK(m.num_heads == 8);
  CHECK(m.seq_len == 2048);
  CHECK(m.vocab_size == 50257);

  ParamCount count = param_count(m);
  CHECK(count.embedding == 102926336);
  CHECK(count.block == 805732352);
  CHECK(count.total == 908662784);
}

TEST_CASE("a zero-layer model still counts its embedding and final norm") {
  ModelSpec m;
  m.num_layers = 0;
  ParamCount count = param_count(m);
  CHECK(count.block == 0);
  CHECK(count.total == count.embedding + 2 * m.hidden_size);
}

TEST_CASE("check_model gates dimensions") {
  ModelSpec ok;
  CHECK_NOTHROW(check_model(ok));

  auto broken = [](auto mutate) {
    ModelSpec m;
    mutate(m);
    CHECK_THROWS_AS(check_model(m), std::invalid_argument);
  };
  broken([](ModelSpec& m) { m.num_layers = 0; });
  broken([](ModelSpec& m) { m.hidden_size = 0; });
  broken([](ModelSpec& m) { m.num_heads = 0; });
  broken([](ModelSpec& m) { m.seq_len = 0; });
  broken([](ModelSpec& m) { m.vocab_size = 0; });
  broken([](ModelSpec& m) { m.hidden_size = 2047; });  // not head-divisible
}

TEST_CASE("tokens_per_step") {
  ModelSpec m;
  CHECK(tokens_per_step(m, 512) == 512 * 2048);
  CHECK(tokens_per_step(m, 1) == 2048);
  CHECK_THROWS_AS(tokens_per_step(m, 0), std::invalid_argument);
}

TEST_CASE("check_schedule enforces the hard constraints only") {
  ScheduleSpec ok;  // reference schedule
  CHECK_NOTHROW(check_schedule(ok));

  auto broken = [](auto mutate) {
    ScheduleSpec s;
    mutate(s);
    CHECK_THROWS_AS(check_schedule(s), std::invalid_argument);
  };
  broken([](ScheduleSpec& s) { s.save_interval = 0; });
  broken([](ScheduleSpec& s) { s.min_lr = 0.0; });
  broken([](ScheduleSpec& s) { s.min_lr = -1e-5; });
  broken([](ScheduleSpec& s) { s.lr = s.min_lr / 2; });
  broken([](ScheduleSpec& s) { s.lr_warmup_samples = s.lr_decay_samples; });
  broken([](ScheduleSpec& s) { s.lr_warmup_samples = s.lr_decay_samples + 1; });
  broken([](ScheduleSpec& s) { s.walltime_limit = 0; });

  // lr == min_lr is a flat schedule, not an error.
  ScheduleSpec flat;
  flat.lr = flat.min_lr;
  CHECK_NOTHROW(check_schedule(flat));
}

TEST_CASE("schedule_warnings flags a decay horizon past the run length") {
  ScheduleSpec s;  // reference: decays over 126_953_125 but trains 244_140
  REQUIRE(s.lr_decay_samples > s.train_samples);
  auto warnings = schedule_warnings(s);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("lr_decay_samples") != std::string::npos);

  s.train_samples = s.lr_decay_samples;
  CHECK(schedule_warnings(s).empty());
}
