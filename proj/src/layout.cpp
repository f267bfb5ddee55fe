#include "trainkit/layout.hpp"

#include <algorithm>

namespace trainkit {

const char* to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::NGPUS_INDIVISIBLE: return "NGPUS_INDIVISIBLE";
    case ViolationCode::GLOBAL_INDIVISIBLE: return "GLOBAL_INDIVISIBLE";
    case ViolationCode::LAYERS_PP: return "LAYERS_PP";
    case ViolationCode::TP_EXCEEDS_NODE: return "TP_EXCEEDS_NODE";
    case ViolationCode::MEMORY_EXCEEDED: return "MEMORY_EXCEEDED";
  }
  return "UNKNOWN";
}

Severity severity_of(ViolationCode code) {
  return code == ViolationCode::TP_EXCEEDS_NODE ? Severity::warning
                                                : Severity::error;
}

std::uint64_t derive_dp(std::uint64_t ngpus, std::uint64_t tp,
                        std::uint64_t pp) {
  if (ngpus == 0 || tp == 0 || pp == 0)
    throw std::invalid_argument("derive_dp arguments must be >= 1");
  if (ngpus % (tp * pp) != 0)
    throw LayoutError(ViolationCode::NGPUS_INDIVISIBLE,
                      std::to_string(ngpus) + " GPUs not divisible by "
                      "TP_SIZE*PP_SIZE=" + std::to_string(tp * pp));
  return ngpus / (tp * pp);
}

std::uint64_t derive_gas(std::uint64_t global_batch, std::uint64_t micro_batch,
                         std::uint64_t dp) {
  if (global_batch == 0 || micro_batch == 0 || dp == 0)
    throw std::invalid_argument("derive_gas arguments must be >= 1");
  if (global_batch % (micro_batch * dp) != 0)
    throw LayoutError(ViolationCode::GLOBAL_INDIVISIBLE,
                      "GLOBAL_BATCH_SIZE=" + std::to_string(global_batch) +
                      " must be divisible by MICRO_BATCH_SIZE*DP_SIZE=" +
                      std::to_string(micro_batch * dp));
  return global_batch / (micro_batch * dp);
}

std::vector<Violation> validate(const ParallelLayout& layout,
                                const ModelSpec& model) {
  std::vector<Violation> violations;
  auto add = [&](ViolationCode code, std::string message) {
    violations.push_back({code, severity_of(code), std::move(message)});
  };

  const std::uint64_t ngpus = layout.nodes * layout.gpus_per_node;
  if (layout.tp == 0 || layout.pp == 0 || layout.dp == 0 ||
      layout.tp * layout.pp * layout.dp != ngpus)
    add(ViolationCode::NGPUS_INDIVISIBLE,
        "TP_SIZE*PP_SIZE*DP_SIZE=" +
            std::to_string(layout.tp * layout.pp * layout.dp) +
            " does not equal NNODES*GPUS_PER_NODE=" + std::to_string(ngpus));

  if (layout.micro_batch == 0 || layout.gas == 0 ||
      layout.micro_batch * layout.gas * layout.dp != layout.global_batch)
    add(ViolationCode::GLOBAL_INDIVISIBLE,
        "GLOBAL_BATCH_SIZE=" + std::to_string(layout.global_batch) +
            " must equal MICRO_BATCH_SIZE*GAS*DP_SIZE=" +
            std::to_string(layout.micro_batch * layout.gas * layout.dp));

  if (layout.pp == 0 || model.num_layers % layout.pp != 0)
    add(ViolationCode::LAYERS_PP,
        "NLAYERS=" + std::to_string(model.num_layers) +
            " must be a multiple of PP_SIZE=" + std::to_string(layout.pp));

  if (layout.tp > layout.gpus_per_node)
    add(ViolationCode::TP_EXCEEDS_NODE,
        "TP_SIZE=" + std::to_string(layout.tp) +
            " spans nodes (GPUS_PER_NODE=" +
            std::to_string(layout.gpus_per_node) +
            "); tensor-parallel groups are fastest within one node");

  return violations;
}

std::vector<Violation> validate(const ParallelLayout& layout,
                                const ModelSpec& model,
                                const MachineSpec& machine) {
  std::vector<Violation> violations = validate(layout, model);

  // The byte model needs a well-formed pipeline split.
  bool memory_computable = layout.tp > 0 && layout.pp > 0 && layout.dp > 0 &&
                           layout.pp <= model.num_layers;
  if (memory_computable) {
    MemoryEstimate estimate = memory_estimate(layout, model);
    if (estimate.total > static_cast<double>(machine.gpu_memory_bytes))
      violations.push_back(
          {ViolationCode::MEMORY_EXCEEDED,
           severity_of(ViolationCode::MEMORY_EXCEEDED),
           "estimated " + std::to_string(estimate.total / (1ull << 30)) +
               " GiB per GPU exceeds " +
               std::to_string(machine.gpu_memory_bytes / (1ull << 30)) +
               " GiB"});
  }
  return violations;
}

MemoryEstimate memory_estimate(const ParallelLayout& layout,
                               const ModelSpec& model) {
  if (layout.tp == 0 || layout.pp == 0 || layout.dp == 0)
    throw std::invalid_argument("parallel degrees must be >= 1");
  if (layout.pp > model.num_layers)
    throw std::invalid_argument("PP_SIZE exceeds NLAYERS: a pipeline stage "
                                "would hold no layers");

  const double params = static_cast<double>(param_count(model).total);
  const double model_shard = static_cast<double>(layout.tp * layout.pp);
  const double opt_shard = model_shard * static_cast<double>(layout.dp);

  MemoryEstimate estimate;
  estimate.weights = 2.0 * params / model_shard;
  estimate.gradients = 4.0 * params / model_shard;
  estimate.optimizer_states = 12.0 * params / opt_shard;
  // Boundary activations only (full recomputation inside each block).
  estimate.activations = static_cast<double>(model.num_layers) /
                         static_cast<double>(layout.pp) *
                         static_cast<double>(model.seq_len) *
                         static_cast<double>(layout.micro_batch) *
                         static_cast<double>(model.hidden_size) * 2.0;
  estimate.total = estimate.weights + estimate.gradients +
                   estimate.optimizer_states + estimate.activations;
  return estimate;
}

namespace {

std::vector<std::uint64_t> divisors_of(std::uint64_t n) {
  std::vector<std::uint64_t> divisors;
  for (std::uint64_t d = 1; d <= n; ++d)
    if (n % d == 0) divisors.push_back(d);
  return divisors;
}

std::vector<std::uint64_t> sorted_unique(std::vector<std::uint64_t> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

}  // namespace

std::vector<RankedLayout> enumerate_layouts(
    const ModelSpec& model, const MachineSpec& machine, std::uint64_t nodes,
    std::uint64_t global_batch,
    const std::vector<std::uint64_t>& micro_batch_candidates,
    const EnumerateOptions& options) {
  if (nodes == 0) throw std::invalid_argument("nodes must be >= 1");
  if (nodes > machine.num_nodes)
    throw std::invalid_argument("allocation of " + std::to_string(nodes) +
                                " nodes exceeds machine of " +
                                std::to_string(machine.num_nodes));

  const std::uint64_t ngpus = nodes * machine.gpus_per_node;
  std::vector<std::uint64_t> tps = options.tp_candidates.empty()
                                       ? divisors_of(ngpus)
                                       : sorted_unique(options.tp_candidates);
  std::vector<std::uint64_t> pps = options.pp_candidates.empty()
                                       ? divisors_of(ngpus)
                                       : sorted_unique(options.pp_candidates);
  std::vector<std::uint64_t> micros = sorted_unique(micro_batch_candidates);

  std::vector<RankedLayout> ranked;
  for (std::uint64_t tp : tps) {
    for (std::uint64_t pp : pps) {
      if (tp == 0 || pp == 0 || ngpus % (tp * pp) != 0) continue;
      const std::uint64_t dp = ngpus / (tp * pp);
      for (std::uint64_t micro : micros) {
        if (micro == 0 || global_batch % (micro * dp) != 0) continue;
        ParallelLayout layout;
        layout.tp = tp;
        layout.pp = pp;
        layout.dp = dp;
        layout.micro_batch = micro;
        layout.gas = global_batch / (micro * dp);
        layout.global_batch = global_batch;
        layout.nodes = nodes;
        layout.gpus_per_node = machine.gpus_per_node;
        if (!validate(layout, model, machine).empty()) continue;
        ranked.push_back({layout, memory_estimate(layout, model)});
      }
    }
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const RankedLayout& a, const RankedLayout& b) {
              if (a.memory.total != b.memory.total)
                return a.memory.total < b.memory.total;
              if (a.layout.tp != b.layout.tp) return a.layout.tp < b.layout.tp;
              if (a.layout.pp != b.layout.pp) return a.layout.pp < b.layout.pp;
              return a.layout.micro_batch < b.layout.micro_batch;
            });
  return ranked;
}

double allreduce_time(double bytes, std::uint64_t dp, double bandwidth) {
  if (dp == 0) throw std::invalid_argument("dp must be >= 1");
  if (!(bandwidth > 0.0))
    throw std::invalid_argument("bandwidth must be > 0");
  if (bytes < 0.0) throw std::invalid_argument("bytes must be >= 0");
  if (dp == 1) return 0.0;
  const double d = static_cast<double>(dp);
  return 2.0 * (d - 1.0) / d * (8.0 * bytes) / bandwidth;
}

}  // namespace trainkit
