// Cluster description and interconnect capacity model.
//
// The machine is a set of identical GPU nodes grouped into cells. Inside a
// cell the fabric is a non-blocking fat tree; cells are linked pairwise by a
// fixed bundle of global links. Bandwidth figures are stored in bits/s.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace trainkit {

struct MachineSpec {
  std::string name;
  std::uint64_t num_nodes = 1;
  std::uint64_t gpus_per_node = 1;
  std::uint64_t gpu_memory_bytes = 0;
  std::uint64_t cpu_cores_per_node = 1;
  std::uint64_t cell_size_nodes = 1;
  // Bisection of one full cell's internal fat tree.
  double intra_cell_bisection = 0.0;
  // Total capacity of the link bundle between any two cells.
  double inter_cell_pair_bisection = 0.0;
  // Bisection of the full machine (reported figure, cross-checked in tests
  // against the computed full-allocation value).
  double system_bisection = 0.0;
};

// Throws std::invalid_argument if a field is non-positive or the cell fabric
// is weaker than the global links (intra >= inter > 0 must hold).
void check_machine(const MachineSpec& spec);

// The 936-node, 4-GPU-per-node A100 system the toolkit models by default.
MachineSpec builtin_booster();

std::uint64_t total_gpus(const MachineSpec& spec);

// ceil(num_nodes / cell_size_nodes); the last cell may be partially filled.
std::uint64_t num_cells(const MachineSpec& spec);

// Cell containing node_index. Throws std::out_of_range past num_nodes.
std::uint64_t cell_of(const MachineSpec& spec, std::uint64_t node_index);

// Sorted, duplicate-free set of node indices (an allocation).
class NodeSet {
 public:
  // Throws std::invalid_argument on duplicates.
  static NodeSet of(std::vector<std::uint64_t> indices);
  // Nodes [first, last).
  static NodeSet range(std::uint64_t first, std::uint64_t last);

  const std::vector<std::uint64_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }

 private:
  std::vector<std::uint64_t> indices_;
};

// Estimated worst-case bandwidth across a balanced bipartition of the
// allocation, in bits/s.
//
// Model: a node's share of its cell's fat tree scales linearly with cell
// occupancy, so an allocation inside one cell bisects at
// intra_cell_bisection * |nodes| / cell_size. When the allocation spans
// cells, the candidate cuts are cell-aligned (splitting a cell only adds
// capacity to the cut); each pair of occupied cells ending up on opposite
// sides contributes one full inter-cell bundle. The reported value is
//   min(intra_cell_bisection * |nodes| / cell_size,
//       inter_cell_pair_bisection * min crossing pairs)
// with the pair count minimized over node-count-balanced cell assignments.
// This is a capacity estimate, not a routing simulation; the mapping of
// global links to traffic is an assumption and is labelled as such in
// reports.
//
// Throws std::invalid_argument on an empty set, std::out_of_range if any
// index is outside the machine.
double allocation_bisection(const MachineSpec& spec, const NodeSet& nodes);

}  // namespace trainkit
