// Cluster model: the built-in system's published figures, cell arithmetic,
// allocation handling, and the bisection estimate cross-checked against an
// independent brute-force split search.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "trainkit/machine.hpp"
#include "trainkit/rng.hpp"

using namespace trainkit;
using doctest::Approx;

TEST_CASE("built-in machine carries the published figures") {
  MachineSpec m = builtin_booster();
  CHECK(m.num_nodes == 936);
  CHECK(m.gpus_per_node == 4);
  CHECK(total_gpus(m) == 3744);
  CHECK(m.cell_size_nodes == 48);
  CHECK(num_cells(m) == 20);
  CHECK(m.gpu_memory_bytes == 40ull * (1ull << 30));
  CHECK(m.intra_cell_bisection == 40e12);
  CHECK(m.inter_cell_pair_bisection == 4e12);
  CHECK(m.system_bisection == 400e12);
  CHECK_NOTHROW(check_machine(m));
}

TEST_CASE("check_machine rejects out-of-range fields") {
  auto broken = [](auto mutate) {
    MachineSpec m = builtin_booster();
    mutate(m);
    CHECK_THROWS_AS(check_machine(m), std::invalid_argument);
  };
  broken([](MachineSpec& m) { m.num_nodes = 0; });
  broken([](MachineSpec& m) { m.gpus_per_node = 0; });
  broken([](MachineSpec& m) { m.cpu_cores_per_node = 0; });
  broken([](MachineSpec& m) { m.cell_size_nodes = 0; });
  broken([](MachineSpec& m) { m.gpu_memory_bytes = 0; });
  broken([](MachineSpec& m) { m.inter_cell_pair_bisection = 0.0; });
  broken([](MachineSpec& m) { m.inter_cell_pair_bisection = -1.0; });
  broken([](MachineSpec& m) { m.system_bisection = 0.0; });
  // A cell fabric weaker than its global links is a contradiction.
  broken([](MachineSpec& m) {
    m.inter_cell_pair_bisection = m.intra_cell_bisection * 2;
  });
}

TEST_CASE("cell arithmetic, including the final partial cell") {
  MachineSpec m = builtin_booster();
  CHECK(cell_of(m, 0) == 0);
  CHECK(cell_of(m, 47) == 0);
  CHECK(cell_of(m, 48) == 1);
  CHECK(cell_of(m, 911) == 18);
  CHECK(cell_of(m, 912) == 19);
  CHECK(cell_of(m, 935) == 19);
  CHECK_THROWS_AS(cell_of(m, 936), std::out_of_range);

  MachineSpec even = m;
  even.num_nodes = 960;
  CHECK(num_cells(even) == 20);
  even.num_nodes = 961;
  CHECK(num_cells(even) == 21);
}

TEST_CASE("NodeSet sorts, deduplicates, and bounds ranges") {
  NodeSet s = NodeSet::of({5, 1, 3});
  CHECK(s.indices() == std::vector<std::uint64_t>{1, 3, 5});
  CHECK(s.size() == 3);
  CHECK_THROWS_AS(NodeSet::of({1, 1}), std::invalid_argument);

  NodeSet r = NodeSet::range(10, 14);
  CHECK(r.indices() == std::vector<std::uint64_t>{10, 11, 12, 13});
  CHECK(NodeSet::range(3, 3).empty());
  CHECK_THROWS_AS(NodeSet::range(4, 3), std::invalid_argument);
}

TEST_CASE("bisection of the reference allocations") {
  MachineSpec m = builtin_booster();
  // One full cell: the cell's internal fat tree.
  CHECK(allocation_bisection(m, NodeSet::range(0, 48)) == Approx(40e12));
  // Half a cell: linear occupancy share.
  CHECK(allocation_bisection(m, NodeSet::range(0, 24)) == Approx(20e12));
  // The trailing partial cell behaves the same.
  CHECK(allocation_bisection(m, NodeSet::range(912, 936)) == Approx(20e12));
  // Two full cells: one bundle crosses the only balanced cut.
  CHECK(allocation_bisection(m, NodeSet::range(0, 96)) == Approx(4e12));
  // The full machine: 20 cells split ten against ten, 100 crossing bundles.
  CHECK(allocation_bisection(m, NodeSet::range(0, 936)) ==
        Approx(m.system_bisection));
}

TEST_CASE("spanning cells cannot beat staying inside one") {
  MachineSpec m = builtin_booster();
  double inside = allocation_bisection(m, NodeSet::range(0, 8));
  double split = allocation_bisection(
      m, NodeSet::of({0, 1, 2, 3, 48, 49, 50, 51}));
  CHECK(inside == Approx(40e12 * 8.0 / 48.0));
  CHECK(split == Approx(4e12));
  CHECK(split < inside);
}

TEST_CASE("allocation_bisection validates its inputs") {
  MachineSpec m = builtin_booster();
  CHECK_THROWS_AS(allocation_bisection(m, NodeSet::of({})),
                  std::invalid_argument);
  CHECK_THROWS_AS(allocation_bisection(m, NodeSet::of({935, 936})),
                  std::out_of_range);
}

namespace {

// Independent reference for the crossing-pair count: enumerate every
// cell-aligned split of the occupied cells and take the lexicographically
// smallest (node imbalance, crossing pairs).
std::uint64_t reference_pairs(const MachineSpec& m, const NodeSet& nodes) {
  std::map<std::uint64_t, std::uint64_t> occupancy;
  for (std::uint64_t n : nodes.indices()) occupancy[cell_of(m, n)]++;
  std::vector<std::uint64_t> count;
  for (const auto& [cell, k] : occupancy) count.push_back(k);
  const std::size_t cells = count.size();
  REQUIRE(cells >= 2);

  std::uint64_t best_imbalance = UINT64_MAX;
  std::uint64_t best_pairs = UINT64_MAX;
  for (std::uint64_t mask = 1; mask + 1 < (1ull << cells); ++mask) {
    std::uint64_t side = 0, side_cells = 0;
    for (std::size_t i = 0; i < cells; ++i)
      if (mask & (1ull << i)) {
        side += count[i];
        ++side_cells;
      }
    std::uint64_t total = nodes.size();
    std::uint64_t imbalance =
        2 * side > total ? 2 * side - total : total - 2 * side;
    std::uint64_t pairs = side_cells * (cells - side_cells);
    if (imbalance < best_imbalance ||
        (imbalance == best_imbalance && pairs < best_pairs)) {
      best_imbalance = imbalance;
      best_pairs = pairs;
    }
  }
  return best_pairs;
}

}  // namespace

TEST_CASE("crossing-pair search agrees with brute force on random sets") {
  // Unit inter-cell bundles and an enormous cell fabric make the estimate
  // equal the raw pair count, which the oracle recomputes independently.
  MachineSpec m = builtin_booster();
  m.intra_cell_bisection = 1e15;
  m.inter_cell_pair_bisection = 1.0;

  SplitMix64 rng(99);
  for (int trial = 0; trial < 80; ++trial) {
    std::uint64_t span = 2 + rng.next_u64() % 7;  // 2..8 occupied cells
    std::vector<std::uint64_t> cells(19);
    for (std::uint64_t i = 0; i < 19; ++i) cells[i] = i;  // full cells only
    for (std::uint64_t i = 0; i < span; ++i)
      std::swap(cells[i], cells[i + rng.next_u64() % (19 - i)]);

    std::vector<std::uint64_t> indices;
    for (std::uint64_t c = 0; c < span; ++c) {
      std::uint64_t occupants = 1 + rng.next_u64() % 48;
      for (std::uint64_t j = 0; j < occupants; ++j)
        indices.push_back(cells[c] * 48 + j);
    }
    NodeSet nodes = NodeSet::of(indices);
    double estimate = allocation_bisection(m, nodes);
    CHECK(estimate ==
          Approx(static_cast<double>(reference_pairs(m, nodes))));
  }
}

TEST_CASE("many-cell allocations fall back to a balanced heuristic") {
  // 24 cells of 2 nodes each, all fully occupied: symmetric, so the greedy
  // split lands on the exact answer of 12 * 12 crossing pairs.
  MachineSpec m;
  m.name = "tiny-cells";
  m.num_nodes = 48;
  m.gpus_per_node = 1;
  m.gpu_memory_bytes = 1ull << 30;
  m.cell_size_nodes = 2;
  m.intra_cell_bisection = 1000.0;
  m.inter_cell_pair_bisection = 1.0;
  m.system_bisection = 144.0;
  CHECK_NOTHROW(check_machine(m));

  double estimate = allocation_bisection(m, NodeSet::range(0, 48));
  CHECK(estimate == Approx(144.0));
}

TEST_CASE("the estimate is deterministic") {
  MachineSpec m = builtin_booster();
  NodeSet nodes = NodeSet::range(100, 400);
  double first = allocation_bisection(m, nodes);
  double second = allocation_bisection(m, nodes);
  CHECK(first == second);
}
