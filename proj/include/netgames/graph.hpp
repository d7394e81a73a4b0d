// Social-network graphs and per-player resource labelings.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace netgames {

// Undirected simple graph over players 0..n-1. Adjacency lists are sorted and
// symmetric; instances are immutable after construction and safe to share
// across concurrent simulations.
struct Graph {
  int n = 0;
  std::vector<std::vector<int>> adj;

  int degree(int i) const { return static_cast<int>(adj[i].size()); }
  bool has_edge(int u, int v) const;
  std::size_t edge_count() const;

  // Throws std::invalid_argument on self-loops, duplicates or asymmetry.
  void validate() const;
};

Graph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges);

// Each unordered pair is linked independently with probability p.
Graph gen_erdos_renyi(int n, double p, std::uint64_t seed);

Graph gen_line(int n);   // n >= 2
Graph gen_ring(int n);   // n >= 3, every node has degree 2
Graph gen_wheel(int n);  // n >= 4; node 0 is the hub, 1..n-1 form the rim ring
Graph gen_grid(int m);   // m >= 2; m x m 4-neighbour lattice, row-major, no wrap

// Per-player resource labels: every player holds an s-subset of {0..r-1},
// drawn uniformly without replacement, independently per player.
struct ResourceAssignment {
  int r = 0;
  int s = 0;
  std::vector<std::vector<int>> labels;  // sorted, exactly s entries per player

  void validate(int n) const;
};

ResourceAssignment assign_resources(const Graph& g, int r, int s, std::uint64_t seed);

// Text format: first line "n m", then m lines "u v" with u < v.
std::string write_edge_list(const Graph& g);
Graph read_edge_list(std::istream& in);

// Text format: one "i: id,id,..." line per player, preceded by "r s".
std::string write_resources(const ResourceAssignment& a);
ResourceAssignment read_resources(std::istream& in);

}  // namespace netgames
