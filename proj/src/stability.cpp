#include "netgames/stability.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include <Eigen/Dense>

#include "json.hpp"
#include "netgames/dynamics.hpp"

namespace netgames {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStrictGap = 1e-12;

void check_enumerable(const Graph& g, const GameSpec& spec, int max_players) {
  if (g.n > max_players)
    throw std::invalid_argument("stability: state space exceeds the enumeration guard");
  if (spec.variant == UtilityVariant::PaModulated)
    throw std::invalid_argument("stability: PA-modulated games need an anchor state");
}

// Variant utilities of both actions for the deviating player, at fixed rest.
struct ActionValues {
  double stay_out;
  double join;
};

ActionValues action_values(const Graph& g, const ResourceAssignment* labels,
                           const GameSpec& spec, ActionProfile& scratch, int i) {
  const std::uint8_t saved = scratch[i];
  scratch[i] = 0;
  const double u0 = utility(g, labels, spec, scratch, i);
  scratch[i] = 1;
  const double u1 = utility(g, labels, spec, scratch, i);
  scratch[i] = saved;
  return {u0, u1};
}

double arc_resistance(const ActionValues& values, int new_action) {
  const double best = std::max(values.stay_out, values.join);
  return best - (new_action ? values.join : values.stay_out);
}

struct DijkstraResult {
  std::vector<double> dist;
  std::vector<std::int32_t> pred;
};

// Shortest summed-resistance paths over the flip graph. With reversed = true
// the distances are those of paths INTO source, and pred points along the
// forward direction of that incoming path.
// TODO: cache the per-profile action values; near the 14-player guard the
// report otherwise re-evaluates each arc's utilities once per relaxation.
DijkstraResult dijkstra(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
                        std::uint32_t source, bool reversed) {
  const std::uint32_t count = 1u << g.n;
  DijkstraResult result;
  result.dist.assign(count, kInf);
  result.pred.assign(count, -1);
  result.dist[source] = 0.0;

  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  queue.push({0.0, source});
  ActionProfile scratch(g.n, 0);

  while (!queue.empty()) {
    const auto [d, mask] = queue.top();
    queue.pop();
    if (d > result.dist[mask]) continue;
    for (int i = 0; i < g.n; ++i) scratch[i] = (mask >> i) & 1u;
    for (int i = 0; i < g.n; ++i) {
      const std::uint32_t next = mask ^ (1u << i);
      const auto values = action_values(g, labels, spec, scratch, i);
      // Forward: cost of flipping i from `mask`. Reversed: cost of the arc
      // next -> mask, whose deviating context sigma_{-i} is identical.
      const int landing = reversed ? ((mask >> i) & 1u) : (((mask >> i) & 1u) ^ 1u);
      const double w = arc_resistance(values, landing);
      if (result.dist[mask] + w < result.dist[next]) {
        result.dist[next] = result.dist[mask] + w;
        result.pred[next] = static_cast<std::int32_t>(mask);
        queue.push({result.dist[next], next});
      }
    }
  }
  return result;
}

std::vector<std::uint8_t> basin_mask(const Graph& g, const ResourceAssignment* labels,
                                     const GameSpec& spec, std::uint32_t sigma) {
  const std::uint32_t count = 1u << g.n;
  std::vector<std::uint8_t> in_basin(count, 0);
  std::vector<std::uint32_t> stack{sigma};
  in_basin[sigma] = 1;
  ActionProfile scratch(g.n, 0);
  while (!stack.empty()) {
    const std::uint32_t mask = stack.back();
    stack.pop_back();
    for (int i = 0; i < g.n; ++i) scratch[i] = (mask >> i) & 1u;
    // Predecessor prev = mask ^ bit flips i towards mask's value; that arc has
    // zero resistance iff mask's action for i is a best response.
    for (int i = 0; i < g.n; ++i) {
      const std::uint32_t prev = mask ^ (1u << i);
      if (in_basin[prev]) continue;
      const auto values = action_values(g, labels, spec, scratch, i);
      if (arc_resistance(values, (mask >> i) & 1u) == 0.0) {
        in_basin[prev] = 1;
        stack.push_back(prev);
      }
    }
  }
  return in_basin;
}

// Profiles where every unilateral deviation strictly loses under the variant
// utility; these are the absorbing states of the best-response digraph.
std::vector<std::uint32_t> strict_nash_profiles(const Graph& g, const ResourceAssignment* labels,
                                                const GameSpec& spec) {
  const std::uint32_t count = 1u << g.n;
  std::vector<std::uint32_t> result;
  ActionProfile scratch(g.n, 0);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    for (int i = 0; i < g.n; ++i) scratch[i] = (mask >> i) & 1u;
    bool strict = true;
    for (int i = 0; i < g.n && strict; ++i) {
      const auto values = action_values(g, labels, spec, scratch, i);
      const bool joined = (mask >> i) & 1u;
      const double gap = joined ? values.join - values.stay_out
                                : values.stay_out - values.join;
      if (gap <= kStrictGap) strict = false;
    }
    if (strict) result.push_back(mask);
  }
  return result;
}

std::vector<std::uint32_t> unwind_path(const DijkstraResult& paths, std::uint32_t target) {
  std::vector<std::uint32_t> chain;
  for (std::int32_t at = static_cast<std::int32_t>(target); at >= 0; at = paths.pred[at]) {
    chain.push_back(static_cast<std::uint32_t>(at));
    if (paths.pred[at] < 0) break;
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

}  // namespace

ActionProfile profile_from_mask(std::uint32_t mask, int n) {
  ActionProfile sigma(n, 0);
  for (int i = 0; i < n; ++i) sigma[i] = (mask >> i) & 1u;
  return sigma;
}

std::uint32_t mask_from_profile(const ActionProfile& sigma) {
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    if (sigma[i]) mask |= 1u << i;
  return mask;
}

double transition_resistance(const Graph& g, const ResourceAssignment* labels,
                             const GameSpec& spec, const ActionProfile& from,
                             const ActionProfile& to) {
  if (from.size() != to.size() || static_cast<int>(from.size()) != g.n)
    throw std::invalid_argument("resistance: profile sizes must match the graph");
  int deviator = -1;
  for (int i = 0; i < g.n; ++i) {
    if (from[i] != to[i]) {
      if (deviator >= 0)
        throw std::invalid_argument("resistance: profiles must differ in exactly one player");
      deviator = i;
    }
  }
  if (deviator < 0)
    throw std::invalid_argument("resistance: profiles must differ in exactly one player");
  ActionProfile scratch = from;
  const auto values = action_values(g, labels, spec, scratch, deviator);
  return arc_resistance(values, to[deviator]);
}

ResistancePath min_resistance(const Graph& g, const ResourceAssignment* labels,
                              const GameSpec& spec, const ActionProfile& from,
                              const ActionProfile& to) {
  check_enumerable(g, spec, kMaxPathPlayers);
  const std::uint32_t source = mask_from_profile(from);
  const std::uint32_t target = mask_from_profile(to);
  if (source == target) return {0.0, {}};
  const auto paths = dijkstra(g, labels, spec, source, false);
  ResistancePath result;
  result.resistance = paths.dist[target];
  if (std::isfinite(result.resistance)) result.profiles = unwind_path(paths, target);
  return result;
}

std::vector<std::uint32_t> basin_of_attraction(const Graph& g, const ResourceAssignment* labels,
                                               const GameSpec& spec, const ActionProfile& sigma) {
  check_enumerable(g, spec, kMaxPathPlayers);
  const auto mask = basin_mask(g, labels, spec, mask_from_profile(sigma));
  std::vector<std::uint32_t> result;
  for (std::uint32_t m = 0; m < mask.size(); ++m)
    if (mask[m]) result.push_back(m);
  return result;
}

double radius(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
              const ActionProfile& sigma) {
  check_enumerable(g, spec, kMaxPathPlayers);
  const std::uint32_t source = mask_from_profile(sigma);
  const auto in_basin = basin_mask(g, labels, spec, source);
  const auto paths = dijkstra(g, labels, spec, source, false);
  double best = kInf;
  for (std::uint32_t m = 0; m < in_basin.size(); ++m)
    if (!in_basin[m]) best = std::min(best, paths.dist[m]);
  return best;
}

double coradius(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
                const ActionProfile& sigma) {
  check_enumerable(g, spec, kMaxPathPlayers);
  const std::uint32_t target = mask_from_profile(sigma);
  const auto in_basin = basin_mask(g, labels, spec, target);
  const auto inbound = dijkstra(g, labels, spec, target, true);
  double worst = 0.0;
  for (std::uint32_t ne : strict_nash_profiles(g, labels, spec))
    if (!in_basin[ne]) worst = std::max(worst, inbound.dist[ne]);
  return worst;
}

RdCrReport rd_cr_report(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec) {
  check_enumerable(g, spec, kMaxPathPlayers);
  RdCrReport report;
  report.n = g.n;
  const auto equilibria = strict_nash_profiles(g, labels, spec);
  for (std::uint32_t ne : equilibria) {
    EquilibriumReport entry;
    entry.profile = ne;
    const auto in_basin = basin_mask(g, labels, spec, ne);
    const auto escape = dijkstra(g, labels, spec, ne, false);
    const auto inbound = dijkstra(g, labels, spec, ne, true);

    double rd = kInf;
    std::uint32_t rd_witness = ne;
    std::size_t basin_size = 0;
    for (std::uint32_t m = 0; m < in_basin.size(); ++m) {
      basin_size += in_basin[m];
      if (!in_basin[m] && escape.dist[m] < rd) {
        rd = escape.dist[m];
        rd_witness = m;
      }
    }
    double cr = 0.0;
    for (std::uint32_t other : equilibria)
      if (!in_basin[other]) cr = std::max(cr, inbound.dist[other]);

    entry.radius = rd;
    entry.coradius = cr;
    entry.basin_size = basin_size;
    entry.stochastically_stable = rd > cr;
    if (rd_witness != ne) entry.witness_escape = unwind_path(escape, rd_witness);
    report.equilibria.push_back(std::move(entry));
  }
  return report;
}

std::string rd_cr_report_json(const RdCrReport& report) {
  nlohmann::json doc;
  doc["players"] = report.n;
  doc["equilibria"] = nlohmann::json::array();
  for (const auto& entry : report.equilibria) {
    nlohmann::json item;
    item["profile"] = entry.profile;
    item["participants"] = std::popcount(entry.profile);
    item["radius"] = std::isfinite(entry.radius) ? nlohmann::json(entry.radius)
                                                 : nlohmann::json("inf");
    item["coradius"] = entry.coradius;
    item["basin_size"] = entry.basin_size;
    item["stochastically_stable"] = entry.stochastically_stable;
    item["witness_escape"] = entry.witness_escape;
    doc["equilibria"].push_back(std::move(item));
  }
  return doc.dump(2);
}

AlphaThresholdReport alpha_thresholds_ring(int n) {
  if (n < 3) throw std::invalid_argument("thresholds: ring needs n >= 3");
  AlphaThresholdReport report;
  report.alpha_upper = n / 2.0;
  report.alpha_lower = n / 2.0;
  return report;
}

AlphaThresholdReport alpha_thresholds_wheel(int n) {
  if (n < 4) throw std::invalid_argument("thresholds: wheel needs n >= 4");
  AlphaThresholdReport report;
  report.alpha_upper = 1.0 / (n - 1) + 1.0 / 6.0;
  report.alpha_lower = report.alpha_upper;
  return report;
}

AlphaThresholdReport alpha_thresholds_grid(int m) {
  if (m < 4) throw std::invalid_argument("thresholds: grid needs m >= 4");
  AlphaThresholdReport report;
  report.alpha_upper = (7.0 / 3.0 + 0.25 * (m - 4)) / (m - 1);
  // The step-by-step escape count sums to 7/3 + (m-4)/2 instead.
  report.alpha_upper_alt = (7.0 / 3.0 + 0.5 * (m - 4)) / (m - 1);
  report.has_alt = true;
  // Escaping the empty profile costs 1; the cheapest return path scales with
  // alpha, so the certificate holds up to the alpha solving the balance.
  long long weighted = 0;
  for (int y = 3; y <= m - 2; y += 2) weighted += m - y;
  report.alpha_lower = 1.0 / static_cast<double>((m - 1) + 2 * weighted);
  return report;
}

std::vector<double> stationary_distribution(const Graph& g, const ResourceAssignment* labels,
                                            const GameSpec& spec, double T) {
  check_enumerable(g, spec, kMaxStationaryPlayers);
  if (!(T > 0)) throw std::invalid_argument("stationary: temperature must be positive");
  const std::uint32_t count = 1u << g.n;
  const double pick = 1.0 / g.n;

  Eigen::MatrixXd transition = Eigen::MatrixXd::Zero(count, count);
  ActionProfile scratch(g.n, 0);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    for (int i = 0; i < g.n; ++i) scratch[i] = (mask >> i) & 1u;
    for (int i = 0; i < g.n; ++i) {
      const auto values = action_values(g, labels, spec, scratch, i);
      const auto probs = lll_probabilities({values.stay_out, values.join}, T);
      const std::uint32_t off = mask & ~(1u << i);
      const std::uint32_t on = mask | (1u << i);
      transition(mask, off) += pick * probs[0];
      transition(mask, on) += pick * probs[1];
    }
  }

  // Solve pi = pi P with the normalisation replacing one redundant equation.
  Eigen::MatrixXd system = transition.transpose() - Eigen::MatrixXd::Identity(count, count);
  system.row(count - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(count);
  rhs(count - 1) = 1.0;
  Eigen::VectorXd pi = system.partialPivLu().solve(rhs);

  std::vector<double> result(count);
  for (std::uint32_t m = 0; m < count; ++m) result[m] = pi(m);
  return result;
}

}  // namespace netgames
