// 3D-parallel layout arithmetic: degree derivation, constraint checking,
// per-GPU memory estimation and layout enumeration.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "trainkit/machine.hpp"
#include "trainkit/model_config.hpp"

namespace trainkit {

// tensor * pipeline * data parallel degrees; gas is the number of
// gradient-accumulation microsteps per optimizer step. Invalid combinations
// are representable on purpose: validate() reports them as data.
struct ParallelLayout {
  std::uint64_t tp = 1;
  std::uint64_t pp = 1;
  std::uint64_t dp = 1;
  std::uint64_t micro_batch = 1;
  std::uint64_t gas = 1;
  std::uint64_t global_batch = 1;
  std::uint64_t nodes = 1;
  std::uint64_t gpus_per_node = 1;
};

enum class ViolationCode {
  NGPUS_INDIVISIBLE,   // tp*pp*dp != nodes*gpus_per_node (or non-divisible)
  GLOBAL_INDIVISIBLE,  // global_batch != micro*gas*dp
  LAYERS_PP,           // num_layers not a multiple of pp
  TP_EXCEEDS_NODE,     // tp spans nodes; legal but slow (warning)
  MEMORY_EXCEEDED,     // estimated per-GPU bytes exceed device memory
};

enum class Severity { error, warning };

const char* to_string(ViolationCode code);
Severity severity_of(ViolationCode code);

struct Violation {
  ViolationCode code;
  Severity severity;
  std::string message;
};

// Thrown by derive_dp/derive_gas when the arithmetic cannot work out.
class LayoutError : public std::runtime_error {
 public:
  LayoutError(ViolationCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ViolationCode code() const { return code_; }

 private:
  ViolationCode code_;
};

// ngpus / (tp*pp). Throws LayoutError(NGPUS_INDIVISIBLE) when not exact,
// std::invalid_argument when any argument is zero.
std::uint64_t derive_dp(std::uint64_t ngpus, std::uint64_t tp,
                        std::uint64_t pp);

// global_batch / (micro_batch*dp). Throws LayoutError(GLOBAL_INDIVISIBLE)
// when not exact, std::invalid_argument when any argument is zero.
std::uint64_t derive_gas(std::uint64_t global_batch, std::uint64_t micro_batch,
                         std::uint64_t dp);

// Structural checks (degree product, batch product, layer divisibility, tp
// within a node). Deterministic order, one entry per failed check.
std::vector<Violation> validate(const ParallelLayout& layout,
                                const ModelSpec& model);

// Structural checks plus the per-GPU memory bound of the machine.
std::vector<Violation> validate(const ParallelLayout& layout,
                                const ModelSpec& model,
                                const MachineSpec& machine);

// Per-GPU bytes under mixed-precision training with a fully sharded
// optimizer and boundary-only activation retention (recomputation on).
struct MemoryEstimate {
  double weights = 0;           // bf16 shards: 2P / (tp*pp)
  double gradients = 0;         // fp32 accumulation: 4P / (tp*pp)
  double optimizer_states = 0;  // fp32 params + two moments: 12P / (tp*pp*dp)
  double activations = 0;       // (L/pp) * seq * micro * hidden * 2
  double total = 0;
};

// Throws std::invalid_argument if pp > num_layers or any degree is zero.
MemoryEstimate memory_estimate(const ParallelLayout& layout,
                               const ModelSpec& model);

struct RankedLayout {
  ParallelLayout layout;
  MemoryEstimate memory;
};

// Optional degree restrictions for enumeration; empty means every divisor of
// the GPU count is a candidate.
struct EnumerateOptions {
  std::vector<std::uint64_t> tp_candidates;
  std::vector<std::uint64_t> pp_candidates;
};

// All violation-free layouts for `nodes` nodes of `machine` at the given
// global batch, one per feasible (tp, pp, micro) combination, sorted by
// estimated total memory then (tp, pp, micro). Every returned layout
// validates cleanly against the machine. Throws std::invalid_argument if
// nodes == 0 or nodes > machine.num_nodes.
std::vector<RankedLayout> enumerate_layouts(
    const ModelSpec& model, const MachineSpec& machine, std::uint64_t nodes,
    std::uint64_t global_batch,
    const std::vector<std::uint64_t>& micro_batch_candidates,
    const EnumerateOptions& options = {});

// Ring all-reduce wall time in seconds for `bytes` payload per rank across
// `dp` ranks over `bandwidth` bits/s: 2*(dp-1)/dp * (8*bytes)/bandwidth.
// dp == 1 costs nothing. Throws std::invalid_argument if dp == 0 or
// bandwidth <= 0.
double allreduce_time(double bytes, std::uint64_t dp, double bandwidth);

}  // namespace trainkit
