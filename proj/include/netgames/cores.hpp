// Cascading-withdrawal fixed points: the k-core and the resource-coverage
// core, peeled from full participation in sweep-synchronous rounds.
#pragma once

#include <cstdint>
#include <vector>

#include "netgames/graph.hpp"

namespace netgames {

struct CoreResult {
  std::vector<std::uint8_t> in_core;
  std::vector<int> removed_per_round;    // one entry per sweep
  std::vector<int> remaining_per_round;  // entry 0 = full participation
  int size() const;
};

// Iteratively delete players with fewer than k surviving neighbours.
CoreResult k_core(const Graph& g, int k);

// Iteratively delete players whose surviving closed neighbourhood no longer
// covers all r resources.
CoreResult rs_core(const Graph& g, const ResourceAssignment& labels, int r);

// Anchored variants: flagged players are never removed.
CoreResult anchored_k_core(const Graph& g, int k, const std::vector<std::uint8_t>& anchored);
CoreResult anchored_rs_core(const Graph& g, const ResourceAssignment& labels, int r,
                            const std::vector<std::uint8_t>& anchored);

}  // namespace netgames
