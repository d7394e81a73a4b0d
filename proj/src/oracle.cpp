#include "netgames/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "netgames/dynamics.hpp"
#include "netgames/rng.hpp"
#include "netgames/stability.hpp"

namespace netgames::oracle {

namespace {

Graph random_graph(Rng& rng, int max_players) {
  const int n = 2 + static_cast<int>(rng.next_below(max_players - 1));
  const double p = 0.2 + 0.6 * rng.next_unit();
  return gen_erdos_renyi(n, p, rng.next());
}

ActionProfile random_profile(Rng& rng, int n) {
  ActionProfile sigma(n);
  for (auto& a : sigma) a = static_cast<std::uint8_t>(rng.next_below(2));
  return sigma;
}

GameSpec random_spec(Rng& rng, GameKind kind) {
  GameSpec spec;
  spec.kind = kind;
  spec.variant = UtilityVariant::GlobalMcu;
  spec.alpha = 0.25 + 2.0 * rng.next_unit();
  if (kind == GameKind::Npg) {
    spec.k = 1 + static_cast<int>(rng.next_below(4));
  } else {
    spec.r = 2 + static_cast<int>(rng.next_below(7));
    spec.s = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(spec.r)));
  }
  return spec;
}

std::string describe(const Graph& g, const GameSpec& spec, const ActionProfile& sigma, int i) {
  std::ostringstream out;
  out << "n=" << g.n << " player=" << i << " profile=";
  for (auto a : sigma) out << int(a);
  if (spec.kind == GameKind::Npg)
    out << " k=" << spec.k;
  else
    out << " r=" << spec.r << " s=" << spec.s;
  out << " alpha=" << spec.alpha;
  return out.str();
}

// Appends best-response arcs from `mask`; ties contribute both actions.
void br_targets(const Graph& g, const GameSpec& spec, std::uint32_t mask,
                std::vector<std::uint32_t>& out) {
  out.clear();
  ActionProfile sigma = profile_from_mask(mask, g.n);
  for (int i = 0; i < g.n; ++i) {
    const auto best = best_response_set(g, nullptr, spec, sigma, i);
    for (int action : best) {
      if (action != sigma[i]) out.push_back(mask ^ (1u << i));
    }
  }
}

bool has_cycle(const Graph& g, const GameSpec& spec) {
  const std::uint32_t count = 1u << g.n;
  // 0 = unvisited, 1 = on stack, 2 = done.
  std::vector<std::uint8_t> color(count, 0);
  std::vector<std::pair<std::uint32_t, int>> stack;
  std::vector<std::vector<std::uint32_t>> arcs(count);
  std::vector<std::uint32_t> scratch;
  for (std::uint32_t m = 0; m < count; ++m) {
    br_targets(g, spec, m, scratch);
    arcs[m] = scratch;
  }
  for (std::uint32_t root = 0; root < count; ++root) {
    if (color[root]) continue;
    stack.push_back({root, 0});
    color[root] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < static_cast<int>(arcs[node].size())) {
        const std::uint32_t target = arcs[node][next++];
        if (color[target] == 1) return true;
        if (color[target] == 0) {
          color[target] = 1;
          stack.push_back({target, 0});
        }
      } else {
        color[node] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

}  // namespace

CheckResult exact_potential(GameKind kind, int max_players, long long samples,
                            std::uint64_t seed, double tolerance) {
  Rng rng(seed);
  CheckResult result;
  result.pass = true;
  for (long long trial = 0; trial < samples; ++trial) {
    const Graph g = random_graph(rng, max_players);
    GameSpec spec = random_spec(rng, kind);
    ResourceAssignment labels;
    const ResourceAssignment* labels_ptr = nullptr;
    if (kind == GameKind::Nsg) {
      labels = assign_resources(g, spec.r, spec.s, rng.next());
      labels_ptr = &labels;
    }
    ActionProfile sigma = random_profile(rng, g.n);
    const int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(g.n)));

    sigma[i] = 1;
    const double phi_on = potential(g, labels_ptr, spec, sigma);
    const double u_on = utility(g, labels_ptr, spec, sigma, i);
    sigma[i] = 0;
    const double phi_off = potential(g, labels_ptr, spec, sigma);
    const double u_off = utility(g, labels_ptr, spec, sigma, i);

    const double residual = std::abs((u_on - u_off) - (phi_on - phi_off));
    if (residual > result.worst) result.worst = residual;
    if (residual > tolerance && result.pass) {
      result.pass = false;
      result.detail = "potential mismatch at " + describe(g, spec, sigma, i);
    }
  }
  if (result.pass) {
    std::ostringstream out;
    out << "max residual " << result.worst << " over " << samples << " samples";
    result.detail = out.str();
  }
  return result;
}

CheckResult br_acyclicity(int max_players, const std::vector<int>& ks) {
  CheckResult result;
  result.pass = true;
  long long graphs_checked = 0;
  for (int n = 1; n <= max_players && result.pass; ++n) {
    const int pairs = n * (n - 1) / 2;
    for (std::uint32_t edge_mask = 0; edge_mask < (1u << pairs) && result.pass; ++edge_mask) {
      std::vector<std::pair<int, int>> edges;
      int bit = 0;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++bit)
          if (edge_mask & (1u << bit)) edges.emplace_back(u, v);
      Graph g = graph_from_edges(n, edges);
      // Restrict to connected graphs.
      std::vector<int> seen(n, 0);
      std::vector<int> stack{0};
      seen[0] = 1;
      int reached = 1;
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : g.adj[u])
          if (!seen[v]) {
            seen[v] = 1;
            ++reached;
            stack.push_back(v);
          }
      }
      if (reached != n) continue;
      ++graphs_checked;
      for (int k : ks) {
        GameSpec spec;
        spec.kind = GameKind::Npg;
        spec.k = k;
        spec.alpha = 1.0;
        if (has_cycle(g, spec)) {
          result.pass = false;
          std::ostringstream out;
          out << "cycle on n=" << n << " edge_mask=" << edge_mask << " k=" << k;
          result.detail = out.str();
          break;
        }
      }
    }
  }
  result.worst = static_cast<double>(graphs_checked);
  if (result.pass) {
    std::ostringstream out;
    out << "no cycles across " << graphs_checked << " connected graphs";
    result.detail = out.str();
  }
  return result;
}

CheckResult nash_closed_form_agreement(int max_players, long long samples, std::uint64_t seed) {
  Rng rng(seed);
  CheckResult result;
  result.pass = true;
  for (long long trial = 0; trial < samples; ++trial) {
    const GameKind kind = rng.next_below(2) ? GameKind::Nsg : GameKind::Npg;
    const Graph g = random_graph(rng, max_players);
    GameSpec spec = random_spec(rng, kind);
    spec.variant = UtilityVariant::Base;
    ResourceAssignment labels;
    const ResourceAssignment* labels_ptr = nullptr;
    if (kind == GameKind::Nsg) {
      labels = assign_resources(g, spec.r, spec.s, rng.next());
      labels_ptr = &labels;
    }
    const ActionProfile sigma = random_profile(rng, g.n);
    const auto check = is_nash(g, labels_ptr, spec, sigma);
    if (check.nash != check.closed_form) {
      result.pass = false;
      result.worst += 1;
      if (result.detail.empty())
        result.detail = "scan/characterisation split at " + describe(g, spec, sigma, -1);
    }
  }
  if (result.pass) result.detail = "scan agrees with the characterisation on every sample";
  return result;
}

CheckResult chain_validity(long long steps, std::uint64_t seed) {
  Rng rng(seed);
  CheckResult result;
  result.pass = true;

  const Graph g = gen_erdos_renyi(8, 0.4, rng.next());
  GameSpec spec;
  spec.kind = GameKind::Npg;
  spec.k = 2;
  spec.alpha = 1.0;
  SimConfig config;
  config.temperature = 0.4;
  config.iterations = steps;
  config.steady_window = 0;
  config.seed = rng.next();
  config.init = InitialCondition::RandomHalf;
  LllEngine engine(g, nullptr, spec, config);

  ActionProfile previous = engine.profile();
  for (long long t = 0; t < steps; ++t) {
    const auto step = engine.step();
    const ActionProfile& current = engine.profile();
    int changed = 0;
    int who = -1;
    for (int i = 0; i < g.n; ++i)
      if (current[i] != previous[i]) {
        ++changed;
        who = i;
      }
    if (changed > 1 || (changed == 1 && who != step.player)) {
      result.pass = false;
      result.detail = "multi-coordinate revision at step " + std::to_string(t);
      break;
    }
    previous = current;
  }
  const double recomputed = potential(g, nullptr, spec, engine.profile());
  const double drift = std::abs(recomputed - engine.potential_value());
  result.worst = drift;
  if (drift > 1e-9) {
    result.pass = false;
    result.detail = "incremental potential drifted by " + std::to_string(drift);
  }
  if (result.pass)
    result.detail = "single-flip revisions, potential drift " + std::to_string(drift);
  return result;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

std::vector<double> empirical_occupation(const Graph& g, const ResourceAssignment* labels,
                                         const GameSpec& spec, const ActionProfile& start,
                                         double T, long long steps, std::uint64_t seed) {
  SimConfig config;
  config.temperature = T;
  config.iterations = steps;
  config.steady_window = 0;
  config.seed = seed;
  config.init = InitialCondition::Explicit;
  config.explicit_init = start;
  LllEngine engine(g, labels, spec, config);
  std::vector<double> visits(1u << g.n, 0.0);
  std::uint32_t mask = mask_from_profile(start);
  for (long long t = 0; t < steps; ++t) {
    const auto step = engine.step();
    if (step.old_action != step.new_action) mask ^= 1u << step.player;
    visits[mask] += 1.0;
  }
  for (double& v : visits) v /= static_cast<double>(steps);
  return visits;
}

CheckResult stationary_consistency(int n, double T, long long mc_steps, double tv_tolerance,
                                   std::uint64_t seed) {
  CheckResult result;
  result.pass = true;
  const Graph g = gen_ring(n);
  GameSpec spec;
  spec.kind = GameKind::Npg;
  spec.k = 2;
  spec.alpha = 1.0;
  spec.variant = UtilityVariant::GlobalMcu;

  const auto pi = stationary_distribution(g, nullptr, spec, T);
  double mass = 0.0;
  for (double v : pi) mass += v;
  if (std::abs(mass - 1.0) > 1e-10) {
    result.pass = false;
    result.detail = "stationary mass " + std::to_string(mass);
    return result;
  }

  // Detailed balance against exp(Phi/T) for the impact-augmented chain.
  const std::uint32_t count = 1u << n;
  std::vector<double> gibbs(count);
  double z = 0.0;
  double phi_max = -1e300;
  std::vector<double> phi(count);
  for (std::uint32_t m = 0; m < count; ++m) {
    const ActionProfile sigma = profile_from_mask(m, n);
    phi[m] = potential(g, nullptr, spec, sigma);
    phi_max = std::max(phi_max, phi[m]);
  }
  for (std::uint32_t m = 0; m < count; ++m) {
    gibbs[m] = std::exp((phi[m] - phi_max) / T);
    z += gibbs[m];
  }
  for (double& v : gibbs) v /= z;

  double balance_residual = 0.0;
  for (std::uint32_t m = 0; m < count; ++m) {
    ActionProfile sigma = profile_from_mask(m, n);
    for (int i = 0; i < n; ++i) {
      if ((m >> i) & 1u) continue;
      const std::uint32_t up = m | (1u << i);
      sigma[i] = 0;
      const double u0 = utility(g, nullptr, spec, sigma, i);
      sigma[i] = 1;
      const double u1 = utility(g, nullptr, spec, sigma, i);
      sigma[i] = 0;
      const auto probs = lll_probabilities({u0, u1}, T);
      const double forward = gibbs[m] * probs[1] / n;
      const double backward = gibbs[up] * probs[0] / n;
      balance_residual = std::max(balance_residual, std::abs(forward - backward));
    }
  }
  if (balance_residual > 1e-9) {
    result.pass = false;
    result.detail = "detailed balance residual " + std::to_string(balance_residual);
    return result;
  }
  const double gibbs_tv = total_variation(pi, gibbs);
  if (gibbs_tv > 1e-8) {
    result.pass = false;
    result.detail = "solved distribution off Gibbs by TV " + std::to_string(gibbs_tv);
    return result;
  }

  // Monte-Carlo agreement, started from the solved mode.
  std::uint32_t mode = 0;
  for (std::uint32_t m = 0; m < count; ++m)
    if (pi[m] > pi[mode]) mode = m;
  const auto visits = empirical_occupation(g, nullptr, spec, profile_from_mask(mode, n), T,
                                           mc_steps, seed);
  result.worst = total_variation(visits, pi);
  if (result.worst > tv_tolerance) {
    result.pass = false;
    result.detail = "Monte-Carlo TV " + std::to_string(result.worst);
    return result;
  }
  result.detail = "rows stochastic, balance residual " + std::to_string(balance_residual) +
                  ", MC TV " + std::to_string(result.worst);
  return result;
}

}  // namespace netgames::oracle
