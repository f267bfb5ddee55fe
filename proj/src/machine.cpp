#include "trainkit/machine.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace trainkit {

void check_machine(const MachineSpec& spec) {
  if (spec.num_nodes < 1) throw std::invalid_argument("num_nodes must be >= 1");
  if (spec.gpus_per_node < 1)
    throw std::invalid_argument("gpus_per_node must be >= 1");
  if (spec.cpu_cores_per_node < 1)
    throw std::invalid_argument("cpu_cores_per_node must be >= 1");
  if (spec.cell_size_nodes < 1)
    throw std::invalid_argument("cell_size_nodes must be >= 1");
  if (spec.gpu_memory_bytes == 0)
    throw std::invalid_argument("gpu_memory_bytes must be > 0");
  if (!(spec.inter_cell_pair_bisection > 0.0))
    throw std::invalid_argument("inter_cell_pair_bisection must be > 0");
  if (!(spec.intra_cell_bisection >= spec.inter_cell_pair_bisection))
    throw std::invalid_argument(
        "intra_cell_bisection must be >= inter_cell_pair_bisection");
  if (!(spec.system_bisection > 0.0))
    throw std::invalid_argument("system_bisection must be > 0");
}

MachineSpec builtin_booster() {
  MachineSpec spec;
  spec.name = "JUWELS Booster";
  spec.num_nodes = 936;
  spec.gpus_per_node = 4;
  spec.gpu_memory_bytes = 40ull << 30;  // 40 GiB HBM per GPU
  spec.cpu_cores_per_node = 48;
  spec.cell_size_nodes = 48;
  spec.intra_cell_bisection = 40e12;      // 40 Tbit/s per cell
  spec.inter_cell_pair_bisection = 4e12;  // 10 links * 400 Gbit/s per pair
  spec.system_bisection = 400e12;
  return spec;
}

std::uint64_t total_gpus(const MachineSpec& spec) {
  return spec.num_nodes * spec.gpus_per_node;
}

std::uint64_t num_cells(const MachineSpec& spec) {
  return (spec.num_nodes + spec.cell_size_nodes - 1) / spec.cell_size_nodes;
}

std::uint64_t cell_of(const MachineSpec& spec, std::uint64_t node_index) {
  if (node_index >= spec.num_nodes)
    throw std::out_of_range("node index " + std::to_string(node_index) +
                            " outside machine of " +
                            std::to_string(spec.num_nodes) + " nodes");
  return node_index / spec.cell_size_nodes;
}

NodeSet NodeSet::of(std::vector<std::uint64_t> indices) {
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
    throw std::invalid_argument("duplicate node index in allocation");
  NodeSet set;
  set.indices_ = std::move(indices);
  return set;
}

NodeSet NodeSet::range(std::uint64_t first, std::uint64_t last) {
  if (first > last) throw std::invalid_argument("reversed node range");
  std::vector<std::uint64_t> indices(last - first);
  std::iota(indices.begin(), indices.end(), first);
  return NodeSet::of(std::move(indices));
}

namespace {

// Fewest occupied-cell pairs crossing any cell-aligned bipartition whose node
// counts are as balanced as whole-cell assignment allows. Exact subset search;
// only called for small m (every machine we model has <= 20 cells).
std::uint64_t min_crossing_pairs_exact(const std::vector<std::uint64_t>& count,
                                       std::uint64_t total) {
  const std::size_t m = count.size();
  std::uint64_t best_imbalance = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t best_pairs = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t masks = 1ull << m;
  for (std::uint64_t mask = 1; mask + 1 < masks; ++mask) {
    std::uint64_t side = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1ull << i)) side += count[i];
    std::uint64_t imbalance =
        side * 2 > total ? side * 2 - total : total - side * 2;
    auto bits = static_cast<std::uint64_t>(std::popcount(mask));
    std::uint64_t pairs = bits * (m - bits);
    if (imbalance < best_imbalance ||
        (imbalance == best_imbalance && pairs < best_pairs)) {
      best_imbalance = imbalance;
      best_pairs = pairs;
    }
  }
  return best_pairs;
}

// Fallback for implausibly many cells: balance greedily by node count
// (heaviest cell first onto the lighter side).
std::uint64_t min_crossing_pairs_greedy(std::vector<std::uint64_t> count) {
  std::sort(count.begin(), count.end(), std::greater<>());
  std::uint64_t side_nodes[2] = {0, 0};
  std::uint64_t side_cells[2] = {0, 0};
  for (std::uint64_t c : count) {
    int lighter = side_nodes[0] <= side_nodes[1] ? 0 : 1;
    side_nodes[lighter] += c;
    side_cells[lighter] += 1;
  }
  return side_cells[0] * side_cells[1];
}

}  // namespace

double allocation_bisection(const MachineSpec& spec, const NodeSet& nodes) {
  if (nodes.empty())
    throw std::invalid_argument("allocation_bisection of empty allocation");

  std::map<std::uint64_t, std::uint64_t> occupancy;
  for (std::uint64_t n : nodes.indices()) occupancy[cell_of(spec, n)]++;

  const double intra_limit =
      spec.intra_cell_bisection * static_cast<double>(nodes.size()) /
      static_cast<double>(spec.cell_size_nodes);
  if (occupancy.size() == 1) return intra_limit;

  std::vector<std::uint64_t> count;
  count.reserve(occupancy.size());
  for (const auto& [cell, k] : occupancy) count.push_back(k);

  std::uint64_t pairs = count.size() <= 22
                            ? min_crossing_pairs_exact(count, nodes.size())
                            : min_crossing_pairs_greedy(count);
  const double inter_limit =
      spec.inter_cell_pair_bisection * static_cast<double>(pairs);
  return std::min(intra_limit, inter_limit);
}

}  // namespace trainkit
