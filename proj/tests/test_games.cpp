#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "netgames/games.hpp"
#include "netgames/oracle.hpp"
#include "netgames/rng.hpp"

using namespace netgames;

namespace {

GameSpec npg(int k, double alpha = 1.0, UtilityVariant variant = UtilityVariant::Base) {
  GameSpec spec;
  spec.kind = GameKind::Npg;
  spec.k = k;
  spec.alpha = alpha;
  spec.variant = variant;
  return spec;
}

GameSpec nsg(int r, int s, double alpha = 1.0, UtilityVariant variant = UtilityVariant::Base) {
  GameSpec spec;
  spec.kind = GameKind::Nsg;
  spec.r = r;
  spec.s = s;
  spec.alpha = alpha;
  spec.variant = variant;
  return spec;
}

}  // namespace

TEST_CASE("participating neighbours") {
  const Graph ring = gen_ring(6);
  const ActionProfile zeros(6, 0), ones(6, 1);
  CHECK(participating_neighbors(ring, zeros, 2).empty());
  CHECK(participating_neighbors(ring, ones, 2).size() == 2);
  const ActionProfile partial{1, 1, 0, 0, 0, 0};
  CHECK(participating_neighbors(ring, partial, 1) == std::vector<int>{0});
}

TEST_CASE("accessible resources") {
  Graph pair = graph_from_edges(2, {{0, 1}});
  ResourceAssignment labels;
  labels.r = 3;
  labels.s = 2;
  labels.labels = {{0, 1}, {1, 2}};

  const ActionProfile both{1, 1}, alone{1, 0};
  CHECK(accessible_resources(pair, labels, both, 0) == std::vector<int>{0, 1, 2});
  // Own holdings always count, participating or not.
  CHECK(accessible_resources(pair, labels, alone, 0) == std::vector<int>{0, 1});
  CHECK(accessible_resources(pair, labels, alone, 1) == std::vector<int>{0, 1, 2});

  const Graph ring = gen_ring(5);
  const auto full = assign_resources(ring, 4, 4, 2);
  const ActionProfile none(5, 0);
  for (int i = 0; i < 5; ++i)
    CHECK(accessible_resources(ring, full, none, i).size() == 4);
}

TEST_CASE("participation payoffs") {
  const Graph ring = gen_ring(6);
  const GameSpec spec = npg(2);

  const ActionProfile zeros(6, 0);
  CHECK(utility_npg(ring, spec, zeros, 0) == 0.0);

  ActionProfile lone(6, 0);
  lone[0] = 1;
  CHECK(utility_npg(ring, spec, lone, 0) == doctest::Approx(-1.0));

  ActionProfile pairp(6, 0);
  pairp[0] = pairp[1] = 1;
  CHECK(utility_npg(ring, spec, pairp, 0) == doctest::Approx(-0.5));

  const ActionProfile ones(6, 1);
  CHECK(utility_npg(ring, spec, ones, 0) == doctest::Approx(1.0));

  // Isolated participant: unnormalised shortfall.
  const Graph isolated = graph_from_edges(1, {});
  ActionProfile one{1};
  CHECK(utility_npg(isolated, npg(3), one, 0) == doctest::Approx(-3.0));
}

TEST_CASE("sharing payoffs") {
  const Graph ring = gen_ring(5);
  const GameSpec spec = nsg(6, 3);
  const auto labels = assign_resources(ring, 6, 3, 4);

  const ActionProfile zeros(5, 0);
  CHECK(utility_nsg(ring, labels, spec, zeros, 0) == 0.0);

  // Isolated participant with |pool| = 3 reaches 3 of 6 resources.
  const Graph single = graph_from_edges(1, {});
  ResourceAssignment own;
  own.r = 6;
  own.s = 3;
  own.labels = {{0, 1, 2}};
  ActionProfile one{1};
  CHECK(utility_nsg(single, own, spec, one, 0) == doctest::Approx(-1.0));

  // Self-sufficient holdings pay alpha outright.
  const auto everything = assign_resources(ring, 3, 3, 4);
  ActionProfile lone(5, 0);
  lone[2] = 1;
  CHECK(utility_nsg(ring, everything, nsg(3, 3, 2.5), lone, 2) == doctest::Approx(2.5));
}

TEST_CASE("participation impact") {
  const Graph ring = gen_ring(6);
  const GameSpec spec = npg(2, 1.25);

  const ActionProfile zeros(6, 0);
  CHECK(impact_npg(ring, spec, zeros, 0) == 0.0);

  // Neighbour 1 participating with support exactly k counting player 0.
  ActionProfile sigma{1, 1, 1, 0, 0, 0};
  CHECK(impact_npg(ring, spec, sigma, 0) == doctest::Approx(1.25 + 0.5));
  // Conceptually evaluated at sigma_0 = 1 either way.
  ActionProfile off = sigma;
  off[0] = 0;
  CHECK(impact_npg(ring, spec, off, 0) == doctest::Approx(1.25 + 0.5));
}

TEST_CASE("sharing impact") {
  // Player 1 lacks exactly the two resources only player 0 provides.
  Graph pair = graph_from_edges(2, {{0, 1}});
  ResourceAssignment labels;
  labels.r = 4;
  labels.s = 2;
  labels.labels = {{2, 3}, {0, 1}};
  const GameSpec spec = nsg(4, 2, 1.5);
  const ActionProfile both{1, 1};
  // |pool_1| = 4, gain 2, threshold reached only through 0.
  CHECK(impact_nsg(pair, labels, spec, both, 0) == doctest::Approx(1.5 + 2.0 / 4.0));

  // Fully duplicated holdings contribute nothing.
  ResourceAssignment dup;
  dup.r = 2;
  dup.s = 2;
  dup.labels = {{0, 1}, {0, 1}};
  CHECK(impact_nsg(pair, dup, nsg(2, 2), both, 0) == 0.0);
}

TEST_CASE("variant dispatch") {
  const Graph ring = gen_ring(6);
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    ActionProfile sigma(6);
    for (auto& a : sigma) a = static_cast<std::uint8_t>(rng.next_below(2));
    const int i = static_cast<int>(rng.next_below(6));

    const GameSpec base = npg(2);
    const GameSpec global = npg(2, 1.0, UtilityVariant::GlobalMcu);
    const GameSpec pa = npg(2, 1.0, UtilityVariant::PaModulated);

    const double u_base = utility(ring, nullptr, base, sigma, i);
    const double u_global = utility(ring, nullptr, global, sigma, i);
    CHECK(utility(ring, nullptr, pa, sigma, i, 0) == doctest::Approx(u_base));
    CHECK(utility(ring, nullptr, pa, sigma, i, 1) == doctest::Approx(u_global));
    if (sigma[i])
      CHECK(u_global == doctest::Approx(u_base + impact(ring, nullptr, global, sigma, i)));
    else
      CHECK(u_global == 0.0);
  }
  CHECK_THROWS_AS(utility(ring, nullptr, npg(2), ActionProfile(6, 1), 0, 1),
                  std::invalid_argument);
}

TEST_CASE("potential values") {
  const Graph ring = gen_ring(6);
  const GameSpec spec = npg(2);
  CHECK(potential(ring, nullptr, spec, ActionProfile(6, 0)) == 0.0);
  CHECK(potential(ring, nullptr, spec, ActionProfile(6, 1)) == doctest::Approx(6.0));
  ActionProfile lone(6, 0);
  lone[3] = 1;
  CHECK(potential(ring, nullptr, spec, lone) == doctest::Approx(-1.0));
}

TEST_CASE("best response sets") {
  const Graph ring = gen_ring(6);
  ActionProfile supported{1, 0, 1, 0, 0, 0};
  CHECK(best_response_set(ring, nullptr, npg(2), supported, 1) == std::vector<int>{1});
  ActionProfile unsupported(6, 0);
  CHECK(best_response_set(ring, nullptr, npg(2), unsupported, 1) == std::vector<int>{0});

  // Base -1/2 exactly cancelled by impact +1/2 under the augmented utility.
  const Graph square = gen_ring(4);
  ActionProfile sigma{0, 1, 0, 0};
  const GameSpec global = npg(2, 1.0, UtilityVariant::GlobalMcu);
  CHECK(best_response_set(square, nullptr, global, sigma, 0) == std::vector<int>{0, 1});
}

TEST_CASE("nash checks") {
  const Graph ring = gen_ring(6);
  const GameSpec spec = npg(2);

  const auto all_zero = is_nash(ring, nullptr, spec, ActionProfile(6, 0));
  CHECK(all_zero.nash);
  CHECK(all_zero.closed_form);

  const auto all_one = is_nash(ring, nullptr, spec, ActionProfile(6, 1));
  CHECK(all_one.nash);
  CHECK(all_one.closed_form);

  ActionProfile gap(6, 1);
  gap[4] = 0;
  const auto broken = is_nash(ring, nullptr, spec, gap);
  CHECK_FALSE(broken.nash);
  CHECK_FALSE(broken.closed_form);
  // The witness deviation strictly improves.
  ActionProfile deviated = gap;
  deviated[broken.deviator] ^= 1;
  CHECK(utility(ring, nullptr, spec, deviated, broken.deviator) >
        utility(ring, nullptr, spec, gap, broken.deviator));

  CHECK_THROWS_AS(is_nash(ring, nullptr, npg(2, 1.0, UtilityVariant::GlobalMcu), gap),
                  std::invalid_argument);
}

TEST_CASE("scan equals threshold characterisation on random instances") {
  const auto result = oracle::nash_closed_form_agreement(8, 3000, 17);
  INFO(result.detail);
  CHECK(result.pass);
}

TEST_CASE("exact potential identity, sampled") {
  const auto npg_result = oracle::exact_potential(GameKind::Npg, 10, 2000, 21, 1e-9);
  INFO(npg_result.detail);
  CHECK(npg_result.pass);
  const auto nsg_result = oracle::exact_potential(GameKind::Nsg, 8, 2000, 22, 1e-9);
  INFO(nsg_result.detail);
  CHECK(nsg_result.pass);
}

TEST_CASE("exact potential identity, exhaustive sharing instances") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_below(5));
    const Graph g = gen_erdos_renyi(n, 0.5, rng.next());
    GameSpec spec = nsg(4, 2, 1.0, UtilityVariant::GlobalMcu);
    const auto labels = assign_resources(g, spec.r, spec.s, rng.next());
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      ActionProfile sigma(n);
      for (int i = 0; i < n; ++i) sigma[i] = (mask >> i) & 1u;
      for (int i = 0; i < n; ++i) {
        sigma[i] = 1;
        const double du = utility(g, &labels, spec, sigma, i);
        const double phi_on = potential(g, &labels, spec, sigma);
        sigma[i] = 0;
        const double phi_off = potential(g, &labels, spec, sigma);
        sigma[i] = (mask >> i) & 1u;
        CHECK(std::abs(du - (phi_on - phi_off)) < 1e-9);
      }
    }
  }
}

TEST_CASE("best-response paths are acyclic, small exhaustive") {
  const auto result = oracle::br_acyclicity(5, {1, 2, 3});
  INFO(result.detail);
  CHECK(result.pass);
}

TEST_CASE("sharing-game best-response digraphs are acyclic, sampled") {
  // Exhaustive cycle scan over the 2^n profile digraph of random instances.
  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_below(4));
    const Graph g = gen_erdos_renyi(n, 0.5, rng.next());
    GameSpec spec = nsg(4, 2);
    const auto labels = assign_resources(g, spec.r, spec.s, rng.next());

    const std::uint32_t count = 1u << n;
    std::vector<std::uint8_t> color(count, 0);
    std::vector<std::vector<std::uint32_t>> arcs(count);
    for (std::uint32_t mask = 0; mask < count; ++mask) {
      ActionProfile sigma(n);
      for (int i = 0; i < n; ++i) sigma[i] = (mask >> i) & 1u;
      for (int i = 0; i < n; ++i)
        for (int action : best_response_set(g, &labels, spec, sigma, i))
          if (action != sigma[i]) arcs[mask].push_back(mask ^ (1u << i));
    }
    std::vector<std::pair<std::uint32_t, int>> stack;
    bool cycle = false;
    for (std::uint32_t root = 0; root < count && !cycle; ++root) {
      if (color[root]) continue;
      stack.push_back({root, 0});
      color[root] = 1;
      while (!stack.empty() && !cycle) {
        auto& [node, next] = stack.back();
        if (next < static_cast<int>(arcs[node].size())) {
          const std::uint32_t target = arcs[node][next++];
          if (color[target] == 1) cycle = true;
          else if (color[target] == 0) {
            color[target] = 1;
            stack.push_back({target, 0});
          }
        } else {
          color[node] = 2;
          stack.pop_back();
        }
      }
    }
    CHECK_FALSE(cycle);
  }
}

TEST_CASE("potential never decreases along augmented best-response paths") {
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4 + static_cast<int>(rng.next_below(4));
    const Graph g = gen_erdos_renyi(n, 0.4, rng.next());
    const GameSpec spec = npg(2, 1.0, UtilityVariant::GlobalMcu);
    ActionProfile sigma(n);
    for (auto& a : sigma) a = static_cast<std::uint8_t>(rng.next_below(2));
    double phi = potential(g, nullptr, spec, sigma);
    for (int step = 0; step < 40; ++step) {
      const int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
      const auto best = best_response_set(g, nullptr, spec, sigma, i);
      sigma[i] = static_cast<std::uint8_t>(best[rng.next_below(best.size())]);
      const double next = potential(g, nullptr, spec, sigma);
      CHECK(next >= phi - 1e-12);
      phi = next;
    }
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(npg(0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(npg(2, -1.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(nsg(3, 4).validate(), std::invalid_argument);
  CHECK_NOTHROW(nsg(4, 2).validate());
}

TEST_CASE("neighborhood view") {
  const Graph ring = gen_ring(5);
  const auto labels = assign_resources(ring, 5, 2, 8);
  ActionProfile sigma{1, 0, 1, 1, 0};
  const auto view = neighborhood_view(ring, &labels, sigma, 4);
  CHECK(view.participating_neighbors == participating_neighbors(ring, sigma, 4));
  CHECK(view.accessible_resources == accessible_resources(ring, labels, sigma, 4));
  for (int id : view.accessible_resources) {
    bool in_pool = false;
    for (int p : view.local_resource_pool) in_pool |= p == id;
    CHECK(in_pool);
  }
}
