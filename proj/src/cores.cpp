#include "netgames/cores.hpp"

#include <stdexcept>

namespace netgames {

namespace {

const std::vector<std::uint8_t>* check_anchor_mask(const Graph& g,
                                                   const std::vector<std::uint8_t>* anchored) {
  if (anchored && static_cast<int>(anchored->size()) != g.n)
    throw std::invalid_argument("core: anchor mask length must equal n");
  return anchored;
}

// Level-synchronous peeling; each round removes every current violator at
// once, so the recorded timeline matches repeated full sweeps.
template <typename Violates, typename OnRemove>
CoreResult peel(const Graph& g, const std::vector<std::uint8_t>* anchored, Violates violates,
                OnRemove on_remove) {
  CoreResult result;
  result.in_core.assign(g.n, 1);
  result.remaining_per_round.push_back(g.n);

  std::vector<int> frontier;
  std::vector<std::uint8_t> queued(g.n, 0);
  for (int i = 0; i < g.n; ++i) {
    if (anchored && (*anchored)[i]) continue;
    if (violates(i)) {
      frontier.push_back(i);
      queued[i] = 1;
    }
  }

  int remaining = g.n;
  std::vector<int> next;
  while (!frontier.empty()) {
    next.clear();
    for (int i : frontier) result.in_core[i] = 0;
    for (int i : frontier) {
      on_remove(i);
      for (int j : g.adj[i]) {
        if (!result.in_core[j] || queued[j]) continue;
        if (anchored && (*anchored)[j]) continue;
        if (violates(j)) {
          next.push_back(j);
          queued[j] = 1;
        }
      }
    }
    remaining -= static_cast<int>(frontier.size());
    result.removed_per_round.push_back(static_cast<int>(frontier.size()));
    result.remaining_per_round.push_back(remaining);
    frontier.swap(next);
  }
  return result;
}

CoreResult k_core_impl(const Graph& g, int k, const std::vector<std::uint8_t>* anchored) {
  if (k < 0) throw std::invalid_argument("k_core: k must be non-negative");
  check_anchor_mask(g, anchored);
  std::vector<int> degree(g.n);
  for (int i = 0; i < g.n; ++i) degree[i] = g.degree(i);
  return peel(
      g, anchored, [&](int i) { return degree[i] < k; },
      [&](int i) {
        for (int j : g.adj[i]) --degree[j];
      });
}

CoreResult rs_core_impl(const Graph& g, const ResourceAssignment& labels, int r,
                        const std::vector<std::uint8_t>* anchored) {
  labels.validate(g.n);
  if (r != labels.r) throw std::invalid_argument("rs_core: r must match the assignment");
  check_anchor_mask(g, anchored);

  // holders[i][id]: surviving closed neighbours of i holding resource id.
  std::vector<std::uint16_t> holders(static_cast<std::size_t>(g.n) * r, 0);
  std::vector<int> covered(g.n, 0);
  for (int i = 0; i < g.n; ++i) {
    auto* row = &holders[static_cast<std::size_t>(i) * r];
    for (int id : labels.labels[i]) ++row[id];
    for (int j : g.adj[i])
      for (int id : labels.labels[j]) ++row[id];
    for (int id = 0; id < r; ++id) covered[i] += row[id] > 0;
  }

  return peel(
      g, anchored, [&](int i) { return covered[i] < r; },
      [&](int i) {
        for (int j : g.adj[i]) {
          auto* row = &holders[static_cast<std::size_t>(j) * r];
          for (int id : labels.labels[i])
            if (--row[id] == 0) --covered[j];
        }
      });
}

}  // namespace

int CoreResult::size() const {
  int count = 0;
  for (auto v : in_core) count += v;
  return count;
}

CoreResult k_core(const Graph& g, int k) { return k_core_impl(g, k, nullptr); }

CoreResult rs_core(const Graph& g, const ResourceAssignment& labels, int r) {
  return rs_core_impl(g, labels, r, nullptr);
}

CoreResult anchored_k_core(const Graph& g, int k, const std::vector<std::uint8_t>& anchored) {
  return k_core_impl(g, k, &anchored);
}

CoreResult anchored_rs_core(const Graph& g, const ResourceAssignment& labels, int r,
                            const std::vector<std::uint8_t>& anchored) {
  return rs_core_impl(g, labels, r, &anchored);
}

}  // namespace netgames
