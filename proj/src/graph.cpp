#include "netgames/graph.hpp"

#include <algorithm>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "netgames/rng.hpp"

namespace netgames {

bool Graph::has_edge(int u, int v) const {
  const auto& a = adj[u];
  return std::binary_search(a.begin(), a.end(), v);
}

std::size_t Graph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& a : adj) twice += a.size();
  return twice / 2;
}

void Graph::validate() const {
  if (static_cast<int>(adj.size()) != n)
    throw std::invalid_argument("graph: adjacency size does not match n");
  for (int i = 0; i < n; ++i) {
    const auto& a = adj[i];
    if (!std::is_sorted(a.begin(), a.end()))
      throw std::invalid_argument("graph: adjacency list not sorted");
    if (std::adjacent_find(a.begin(), a.end()) != a.end())
      throw std::invalid_argument("graph: duplicate edge");
    for (int j : a) {
      if (j < 0 || j >= n) throw std::invalid_argument("graph: neighbor out of range");
      if (j == i) throw std::invalid_argument("graph: self-loop");
      if (!has_edge(j, i)) throw std::invalid_argument("graph: asymmetric adjacency");
    }
  }
}

Graph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n < 0) throw std::invalid_argument("graph: n must be non-negative");
  Graph g;
  g.n = n;
  g.adj.assign(n, {});
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw std::invalid_argument("graph: edge endpoint out of range");
    if (u == v) throw std::invalid_argument("graph: self-loop");
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& a : g.adj) {
    std::sort(a.begin(), a.end());
    if (std::adjacent_find(a.begin(), a.end()) != a.end())
      throw std::invalid_argument("graph: duplicate edge");
  }
  return g;
}

Graph gen_erdos_renyi(int n, double p, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("erdos_renyi: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("erdos_renyi: p must lie in [0,1]");
  Rng rng(seed);
  Graph g;
  g.n = n;
  g.adj.assign(n, {});
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.next_unit() < p) {
        g.adj[i].push_back(j);
        g.adj[j].push_back(i);
      }
    }
  }
  return g;
}

Graph gen_line(int n) {
  if (n < 2) throw std::invalid_argument("line: n must be >= 2");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return graph_from_edges(n, edges);
}

Graph gen_ring(int n) {
  // A 2-regular simple cycle needs at least 3 nodes.
  if (n < 3) throw std::invalid_argument("ring: n must be >= 3");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return graph_from_edges(n, edges);
}

Graph gen_wheel(int n) {
  if (n < 4) throw std::invalid_argument("wheel: n must be >= 4");
  std::vector<std::pair<int, int>> edges;
  const int rim = n - 1;
  for (int i = 1; i <= rim; ++i) {
    edges.emplace_back(0, i);
    edges.emplace_back(i, i % rim + 1);
  }
  return graph_from_edges(n, edges);
}

Graph gen_grid(int m) {
  if (m < 2) throw std::invalid_argument("grid: m must be >= 2");
  std::vector<std::pair<int, int>> edges;
  auto id = [m](int row, int col) { return row * m + col; };
  for (int row = 0; row < m; ++row) {
    for (int col = 0; col < m; ++col) {
      if (col + 1 < m) edges.emplace_back(id(row, col), id(row, col + 1));
      if (row + 1 < m) edges.emplace_back(id(row, col), id(row + 1, col));
    }
  }
  return graph_from_edges(m * m, edges);
}

void ResourceAssignment::validate(int n) const {
  if (s > r) throw std::invalid_argument("resources: s must not exceed r");
  if (static_cast<int>(labels.size()) != n)
    throw std::invalid_argument("resources: one label set per player required");
  for (const auto& set : labels) {
    if (static_cast<int>(set.size()) != s)
      throw std::invalid_argument("resources: label set size must equal s");
    if (!std::is_sorted(set.begin(), set.end()) ||
        std::adjacent_find(set.begin(), set.end()) != set.end())
      throw std::invalid_argument("resources: label set must be a sorted set");
    for (int id : set)
      if (id < 0 || id >= r) throw std::invalid_argument("resources: id out of range");
  }
}

ResourceAssignment assign_resources(const Graph& g, int r, int s, std::uint64_t seed) {
  if (s < 1 || r < 1) throw std::invalid_argument("resources: r and s must be >= 1");
  if (s > r) throw std::invalid_argument("resources: s must not exceed r");
  Rng rng(seed);
  ResourceAssignment a;
  a.r = r;
  a.s = s;
  a.labels.assign(g.n, {});
  std::vector<int> pool(r);
  for (int i = 0; i < g.n; ++i) {
    // Partial Fisher-Yates draws an s-subset without replacement.
    for (int id = 0; id < r; ++id) pool[id] = id;
    for (int t = 0; t < s; ++t) {
      const int pick = t + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(r - t)));
      std::swap(pool[t], pool[pick]);
    }
    a.labels[i].assign(pool.begin(), pool.begin() + s);
    std::sort(a.labels[i].begin(), a.labels[i].end());
  }
  return a;
}

std::string write_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.n << ' ' << g.edge_count() << '\n';
  for (int u = 0; u < g.n; ++u)
    for (int v : g.adj[u])
      if (u < v) out << u << ' ' << v << '\n';
  return out.str();
}

Graph read_edge_list(std::istream& in) {
  int n = 0;
  std::size_t m = 0;
  if (!(in >> n >> m)) throw std::invalid_argument("edge list: missing header");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(m);
  std::set<std::pair<int, int>> seen;
  for (std::size_t e = 0; e < m; ++e) {
    int u = 0, v = 0;
    if (!(in >> u >> v)) throw std::invalid_argument("edge list: truncated");
    if (u >= v) throw std::invalid_argument("edge list: edges must satisfy u < v");
    if (!seen.insert({u, v}).second)
      throw std::invalid_argument("edge list: duplicate edge");
    edges.emplace_back(u, v);
  }
  Graph g = graph_from_edges(n, edges);
  g.validate();
  return g;
}

std::string write_resources(const ResourceAssignment& a) {
  std::ostringstream out;
  out << a.r << ' ' << a.s << '\n';
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    out << i << ':';
    for (std::size_t t = 0; t < a.labels[i].size(); ++t)
      out << (t ? "," : " ") << a.labels[i][t];
    out << '\n';
  }
  return out.str();
}

ResourceAssignment read_resources(std::istream& in) {
  ResourceAssignment a;
  if (!(in >> a.r >> a.s)) throw std::invalid_argument("resources: missing header");
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int player = 0;
    char colon = 0;
    if (!(ls >> player >> colon) || colon != ':')
      throw std::invalid_argument("resources: malformed line");
    if (player != static_cast<int>(a.labels.size()))
      throw std::invalid_argument("resources: players must appear in order");
    std::vector<int> ids;
    int id = 0;
    while (ls >> id) {
      ids.push_back(id);
      char comma = 0;
      if (!(ls >> comma)) break;
      if (comma != ',') throw std::invalid_argument("resources: expected comma");
    }
    a.labels.push_back(std::move(ids));
  }
  a.validate(static_cast<int>(a.labels.size()));
  return a;
}

}  // namespace netgames
