#include "netgames/games.hpp"

#include <stdexcept>

namespace netgames {

namespace {

void check_player(const Graph& g, const ActionProfile& sigma, int i) {
  if (static_cast<int>(sigma.size()) != g.n)
    throw std::invalid_argument("profile length does not match graph size");
  if (i < 0 || i >= g.n) throw std::invalid_argument("player index out of range");
}

const ResourceAssignment& require_labels(const GameSpec& spec,
                                         const ResourceAssignment* labels) {
  if (spec.kind != GameKind::Nsg)
    throw std::logic_error("labels requested for a participation game");
  if (labels == nullptr)
    throw std::invalid_argument("sharing game requires a resource assignment");
  return *labels;
}

int count_participating_neighbors(const Graph& g, const ActionProfile& sigma, int i) {
  int count = 0;
  for (int j : g.adj[i]) count += sigma[j] != 0;
  return count;
}

// Number of distinct resources over i's own labels plus the labels of
// neighbours passing `include`.
template <typename Include>
int accessible_count(const Graph& g, const ResourceAssignment& labels, int i,
                     Include include, std::vector<int>* out) {
  std::vector<std::uint8_t> seen(labels.r, 0);
  int count = 0;
  auto add = [&](int j) {
    for (int id : labels.labels[j]) {
      if (!seen[id]) {
        seen[id] = 1;
        ++count;
      }
    }
  };
  add(i);
  for (int j : g.adj[i])
    if (include(j)) add(j);
  if (out) {
    out->clear();
    for (int id = 0; id < labels.r; ++id)
      if (seen[id]) out->push_back(id);
  }
  return count;
}

double npg_value(const GameSpec& spec, int degree, int participating) {
  if (participating >= spec.k) return spec.alpha;
  if (degree == 0) return -static_cast<double>(spec.k);
  return static_cast<double>(participating - spec.k) / degree;
}

double nsg_value(const GameSpec& spec, int local_pool, int accessible) {
  if (accessible == spec.r) return spec.alpha;
  return static_cast<double>(accessible - spec.r) / local_pool;
}

}  // namespace

void GameSpec::validate() const {
  if (!(alpha > 0)) throw std::invalid_argument("game: alpha must be positive");
  if (kind == GameKind::Npg) {
    if (k < 1) throw std::invalid_argument("game: k must be >= 1");
  } else {
    if (s < 1 || r < 1) throw std::invalid_argument("game: r and s must be >= 1");
    if (s > r) throw std::invalid_argument("game: s must not exceed r");
  }
}

std::vector<int> participating_neighbors(const Graph& g, const ActionProfile& sigma, int i) {
  check_player(g, sigma, i);
  std::vector<int> result;
  for (int j : g.adj[i])
    if (sigma[j]) result.push_back(j);
  return result;
}

std::vector<int> accessible_resources(const Graph& g, const ResourceAssignment& labels,
                                      const ActionProfile& sigma, int i) {
  check_player(g, sigma, i);
  std::vector<int> out;
  accessible_count(g, labels, i, [&](int j) { return sigma[j] != 0; }, &out);
  return out;
}

NeighborhoodView neighborhood_view(const Graph& g, const ResourceAssignment* labels,
                                   const ActionProfile& sigma, int i) {
  NeighborhoodView view;
  view.participating_neighbors = participating_neighbors(g, sigma, i);
  if (labels) {
    view.accessible_resources = accessible_resources(g, *labels, sigma, i);
    accessible_count(g, *labels, i, [](int) { return true; }, &view.local_resource_pool);
  }
  return view;
}

double utility_npg(const Graph& g, const GameSpec& spec, const ActionProfile& sigma, int i) {
  check_player(g, sigma, i);
  if (spec.kind != GameKind::Npg) throw std::invalid_argument("utility_npg: wrong game kind");
  if (!sigma[i]) return 0.0;
  return npg_value(spec, g.degree(i), count_participating_neighbors(g, sigma, i));
}

double utility_nsg(const Graph& g, const ResourceAssignment& labels, const GameSpec& spec,
                   const ActionProfile& sigma, int i) {
  check_player(g, sigma, i);
  if (spec.kind != GameKind::Nsg) throw std::invalid_argument("utility_nsg: wrong game kind");
  if (!sigma[i]) return 0.0;
  const int accessible =
      accessible_count(g, labels, i, [&](int j) { return sigma[j] != 0; }, nullptr);
  const int pool = accessible_count(g, labels, i, [](int) { return true; }, nullptr);
  return nsg_value(spec, pool, accessible);
}

double impact_npg(const Graph& g, const GameSpec& spec, const ActionProfile& sigma, int i) {
  check_player(g, sigma, i);
  double total = 0.0;
  for (int j : g.adj[i]) {
    if (!sigma[j]) continue;
    // Neighbour support counted as if i participates.
    int support = count_participating_neighbors(g, sigma, j);
    if (!sigma[i]) ++support;
    if (support == spec.k)
      total += spec.alpha + 1.0 / g.degree(j);
    else if (support < spec.k)
      total += 1.0 / g.degree(j);
  }
  return total;
}

double impact_nsg(const Graph& g, const ResourceAssignment& labels, const GameSpec& spec,
                  const ActionProfile& sigma, int i) {
  check_player(g, sigma, i);
  double total = 0.0;
  for (int j : g.adj[i]) {
    if (!sigma[j]) continue;
    const int with_i =
        accessible_count(g, labels, j, [&](int v) { return v == i || sigma[v] != 0; }, nullptr);
    const int without_i =
        accessible_count(g, labels, j, [&](int v) { return v != i && sigma[v] != 0; }, nullptr);
    const int gained = with_i - without_i;
    const int pool = accessible_count(g, labels, j, [](int) { return true; }, nullptr);
    if (with_i == spec.r && without_i < spec.r)
      total += spec.alpha + static_cast<double>(gained) / pool;
    else if (with_i < spec.r)
      total += static_cast<double>(gained) / pool;
  }
  return total;
}

double base_utility(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
                    const ActionProfile& sigma, int i) {
  if (spec.kind == GameKind::Npg) return utility_npg(g, spec, sigma, i);
  return utility_nsg(g, require_labels(spec, labels), spec, sigma, i);
}

double impact(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
              const ActionProfile& sigma, int i) {
  if (spec.kind == GameKind::Npg) return impact_npg(g, spec, sigma, i);
  return impact_nsg(g, require_labels(spec, labels), spec, sigma, i);
}

double utility(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
               const ActionProfile& sigma, int i, int anchor_flag) {
  if (anchor_flag != 0 && spec.variant != UtilityVariant::PaModulated)
    throw std::invalid_argument("anchor flag requires the PA-modulated variant");
  const double base = base_utility(g, labels, spec, sigma, i);
  if (!sigma[i]) return 0.0;
  switch (spec.variant) {
    case UtilityVariant::Base:
      return base;
    case UtilityVariant::GlobalMcu:
      return base + impact(g, labels, spec, sigma, i);
    case UtilityVariant::PaModulated:
      return anchor_flag ? base + impact(g, labels, spec, sigma, i) : base;
  }
  return base;
}

double potential(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
                 const ActionProfile& sigma) {
  double total = 0.0;
  for (int i = 0; i < g.n; ++i) total += base_utility(g, labels, spec, sigma, i);
  return total;
}

std::vector<int> best_response_set(const Graph& g, const ResourceAssignment* labels,
                                   const GameSpec& spec, const ActionProfile& sigma, int i,
                                   int anchor_flag) {
  ActionProfile probe = sigma;
  probe[i] = 0;
  const double u0 = utility(g, labels, spec, probe, i, anchor_flag);
  probe[i] = 1;
  const double u1 = utility(g, labels, spec, probe, i, anchor_flag);
  if (u0 > u1) return {0};
  if (u1 > u0) return {1};
  return {0, 1};
}

NashCheck is_nash(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
                  const ActionProfile& sigma) {
  if (spec.variant != UtilityVariant::Base)
    throw std::invalid_argument("is_nash applies to the base variant");
  NashCheck result;
  result.nash = true;
  ActionProfile probe = sigma;
  for (int i = 0; i < g.n && result.nash; ++i) {
    probe[i] = sigma[i] ? 0 : 1;
    const double current = base_utility(g, labels, spec, sigma, i);
    const double flipped = base_utility(g, labels, spec, probe, i);
    probe[i] = sigma[i];
    if (flipped > current) {
      result.nash = false;
      result.deviator = i;
    }
  }

  // Threshold characterisation: every participant meets its threshold and
  // every abstainer would fall short. The all-zero profile satisfies this
  // whenever it is in fact an equilibrium.
  bool closed = true;
  for (int i = 0; i < g.n && closed; ++i) {
    bool met;
    if (spec.kind == GameKind::Npg) {
      met = count_participating_neighbors(g, sigma, i) >= spec.k;
    } else {
      const auto& la = require_labels(spec, labels);
      met = accessible_count(g, la, i, [&](int j) { return sigma[j] != 0; }, nullptr) == spec.r;
    }
    if (met != (sigma[i] != 0)) closed = false;
  }
  result.closed_form = closed;
  return result;
}

}  // namespace netgames
