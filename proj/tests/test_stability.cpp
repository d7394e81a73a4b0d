#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "netgames/oracle.hpp"
#include "netgames/rng.hpp"
#include "netgames/stability.hpp"

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

}  // namespace

TEST_CASE("transition resistance") {
  const Graph ring = gen_ring(6);
  const GameSpec spec = npg(2);

  const ActionProfile zeros(6, 0), ones(6, 1);

  SUBCASE("best-response moves are free") {
    ActionProfile from(6, 0);
    from[0] = 1;  // unsupported participant leaving is the best response
    ActionProfile to(6, 0);
    CHECK(transition_resistance(ring, nullptr, spec, from, to) == 0.0);
  }
  SUBCASE("first joiner pays the full normalised shortfall") {
    ActionProfile to(6, 0);
    to[2] = 1;
    CHECK(transition_resistance(ring, nullptr, spec, zeros, to) == doctest::Approx(1.0));
  }
  SUBCASE("a supported participant defecting pays alpha") {
    ActionProfile to(6, 1);
    to[4] = 0;
    CHECK(transition_resistance(ring, nullptr, npg(2, 1.7), ones, to) ==
          doctest::Approx(1.7));
  }
  SUBCASE("rejects profiles further than one flip apart") {
    CHECK_THROWS_AS(transition_resistance(ring, nullptr, spec, zeros, ones),
                    std::invalid_argument);
    CHECK_THROWS_AS(transition_resistance(ring, nullptr, spec, zeros, zeros),
                    std::invalid_argument);
  }
  SUBCASE("non-negative, zero exactly on best-response moves") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      ActionProfile from(6);
      for (auto& a : from) a = static_cast<std::uint8_t>(rng.next_below(2));
      ActionProfile to = from;
      const int i = static_cast<int>(rng.next_below(6));
      to[i] ^= 1;
      const double resistance = transition_resistance(ring, nullptr, spec, from, to);
      CHECK(resistance >= 0.0);
      const auto best = best_response_set(ring, nullptr, spec, from, i);
      const bool is_best = std::find(best.begin(), best.end(), to[i]) != best.end();
      CHECK((resistance == 0.0) == is_best);
    }
  }
}

TEST_CASE("minimum-resistance paths on the ring") {
  const Graph ring = gen_ring(6);
  const GameSpec spec = npg(2);
  const ActionProfile zeros(6, 0), ones(6, 1);

  SUBCASE("identical endpoints") {
    const auto path = min_resistance(ring, nullptr, spec, zeros, zeros);
    CHECK(path.resistance == 0.0);
    CHECK(path.profiles.empty());
  }
  SUBCASE("filling the ring costs n/2") {
    const auto path = min_resistance(ring, nullptr, spec, zeros, ones);
    CHECK(path.resistance == doctest::Approx(3.0));
    REQUIRE(!path.profiles.empty());
    CHECK(path.profiles.front() == 0u);
    CHECK(path.profiles.back() == 0b111111u);
    // Witness is a chain of single flips whose arc costs sum to the total.
    double total = 0.0;
    for (std::size_t t = 0; t + 1 < path.profiles.size(); ++t) {
      const auto a = profile_from_mask(path.profiles[t], 6);
      const auto b = profile_from_mask(path.profiles[t + 1], 6);
      int flips = 0;
      for (int i = 0; i < 6; ++i) flips += a[i] != b[i];
      CHECK(flips == 1);
      total += transition_resistance(ring, nullptr, spec, a, b);
    }
    CHECK(total == doctest::Approx(path.resistance));
  }
  SUBCASE("draining the ring costs alpha") {
    const auto path = min_resistance(ring, nullptr, spec, ones, zeros);
    CHECK(path.resistance == doctest::Approx(1.0));
    const auto expensive = min_resistance(ring, nullptr, npg(2, 2.25), ones, zeros);
    CHECK(expensive.resistance == doctest::Approx(2.25));
  }
  SUBCASE("state-space guard") {
    const Graph big = gen_ring(15);
    CHECK_THROWS_AS(min_resistance(big, nullptr, spec, ActionProfile(15, 0),
                                   ActionProfile(15, 1)),
                    std::invalid_argument);
  }
}

TEST_CASE("basins of attraction") {
  const Graph ring = gen_ring(6);
  const GameSpec spec = npg(2);
  const ActionProfile zeros(6, 0);

  const auto basin = basin_of_attraction(ring, nullptr, spec, zeros);
  std::vector<std::uint8_t> inside(1u << 6, 0);
  for (auto mask : basin) inside[mask] = 1;

  CHECK(inside[0]);
  // Any profile with an unsupported participant drains freely to empty.
  CHECK(inside[0b000001]);
  CHECK(inside[0b000111]);
  // Full participation has no free exit.
  CHECK_FALSE(inside[0b111111]);

  // Strict equilibria are never inside each other's basins (n <= 6 scan).
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + static_cast<int>(rng.next_below(3));
    const Graph g = gen_erdos_renyi(n, 0.45, rng.next());
    std::vector<std::uint32_t> equilibria;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      const auto check = is_nash(g, nullptr, spec, profile_from_mask(mask, n));
      if (check.nash) equilibria.push_back(mask);
    }
    for (auto ne : equilibria) {
      const auto b = basin_of_attraction(g, nullptr, spec, profile_from_mask(ne, n));
      for (auto other : equilibria) {
        if (other == ne) continue;
        for (auto mask : b) CHECK(mask != other);
      }
    }
  }
}

TEST_CASE("radius and coradius on rings") {
  for (int n : {4, 6, 8}) {
    const Graph ring = gen_ring(n);
    const ActionProfile zeros(n, 0), ones(n, 1);
    for (double alpha : {1.0, 2.7}) {
      const GameSpec spec = npg(2, alpha);
      CHECK(std::abs(radius(ring, nullptr, spec, zeros) - n / 2.0) <= 1e-12);
      CHECK(std::abs(radius(ring, nullptr, spec, ones) - alpha) <= 1e-12);
      CHECK(std::abs(coradius(ring, nullptr, spec, zeros) - alpha) <= 1e-12);
      CHECK(std::abs(coradius(ring, nullptr, spec, ones) - n / 2.0) <= 1e-12);
    }
  }
}

TEST_CASE("ring verdicts follow the certificate") {
  const Graph ring = gen_ring(6);
  const ActionProfile zeros(6, 0), ones(6, 1);

  const auto low = rd_cr_report(ring, nullptr, npg(2, 1.0));
  REQUIRE(low.equilibria.size() == 2);
  for (const auto& entry : low.equilibria) {
    if (entry.profile == 0u) CHECK(entry.stochastically_stable);
    if (entry.profile == 0b111111u) CHECK_FALSE(entry.stochastically_stable);
  }

  const auto high = rd_cr_report(ring, nullptr, npg(2, 5.0));
  for (const auto& entry : high.equilibria) {
    if (entry.profile == 0u) CHECK_FALSE(entry.stochastically_stable);
    if (entry.profile == 0b111111u) CHECK(entry.stochastically_stable);
  }

  const std::string json = rd_cr_report_json(high);
  CHECK(json.find("\"radius\"") != std::string::npos);
  CHECK(json.find("\"witness_escape\"") != std::string::npos);
}

TEST_CASE("wheel verdict flips exactly at the closed-form threshold") {
  for (int n : {5, 6, 7}) {
    const Graph wheel = gen_wheel(n);
    const double threshold = alpha_thresholds_wheel(n).alpha_upper;
    const ActionProfile ones(n, 1), zeros(n, 0);

    const GameSpec above = npg(2, threshold + 1e-6);
    CHECK(radius(wheel, nullptr, above, ones) >
          coradius(wheel, nullptr, above, ones));

    const GameSpec below = npg(2, threshold - 1e-6);
    CHECK_FALSE(radius(wheel, nullptr, below, ones) >
                coradius(wheel, nullptr, below, ones));
    CHECK(radius(wheel, nullptr, below, zeros) >
          coradius(wheel, nullptr, below, zeros));
  }
}

TEST_CASE("unique equilibrium is declared stable") {
  const Graph line = gen_line(5);
  const GameSpec spec = npg(2);
  const auto report = rd_cr_report(line, nullptr, spec);
  REQUIRE(report.equilibria.size() == 1);
  CHECK(report.equilibria[0].profile == 0u);
  CHECK(report.equilibria[0].coradius == 0.0);
  CHECK(report.equilibria[0].stochastically_stable);
  CHECK(std::isinf(report.equilibria[0].radius));
}

TEST_CASE("closed-form thresholds") {
  CHECK(alpha_thresholds_ring(6).alpha_upper == doctest::Approx(3.0));
  CHECK(alpha_thresholds_wheel(20).alpha_upper == doctest::Approx(1.0 / 19 + 1.0 / 6));
  const auto grid = alpha_thresholds_grid(5);
  CHECK(grid.alpha_lower == doctest::Approx(0.125));
  CHECK(grid.alpha_upper == doctest::Approx(31.0 / 48.0));
  CHECK(grid.has_alt);
  CHECK(grid.alpha_upper_alt == doctest::Approx(17.0 / 24.0));
  CHECK_THROWS_AS(alpha_thresholds_grid(3), std::invalid_argument);
}

TEST_CASE("stationary distribution") {
  SUBCASE("single isolated player follows the two-state Gibbs ratio") {
    const Graph single = graph_from_edges(1, {});
    const GameSpec spec = npg(1, 1.0);
    const double T = 0.5;
    const auto pi = stationary_distribution(single, nullptr, spec, T);
    REQUIRE(pi.size() == 2);
    CHECK(pi[0] + pi[1] == doctest::Approx(1.0));
    // Participation pays the isolated shortfall -k.
    CHECK(pi[1] / pi[0] == doctest::Approx(std::exp(-1.0 / T)));
  }
  SUBCASE("impact-augmented chain concentrates on the aggregate maximiser") {
    const Graph ring = gen_ring(6);
    const GameSpec spec = npg(2, 1.0, UtilityVariant::GlobalMcu);
    const auto pi = stationary_distribution(ring, nullptr, spec, 0.05);
    CHECK(pi[0b111111] > 0.95);
  }
  SUBCASE("base chain mass lands on the certified profile") {
    const Graph ring = gen_ring(6);
    const auto low = stationary_distribution(ring, nullptr, npg(2, 1.0), 0.1);
    CHECK(low[0] > 0.9);
    const auto high = stationary_distribution(ring, nullptr, npg(2, 5.0), 0.1);
    CHECK(high[0b111111] > 0.9);
  }
  SUBCASE("state-space guard") {
    const Graph big = gen_ring(11);
    CHECK_THROWS_AS(stationary_distribution(big, nullptr, npg(2), 0.3),
                    std::invalid_argument);
  }
}

TEST_CASE("solver consistency checks") {
  const auto result = oracle::stationary_consistency(6, 0.8, 2000000, 0.02, 19);
  INFO(result.detail);
  CHECK(result.pass);
}

TEST_CASE("mask round trip") {
  const ActionProfile sigma{1, 0, 1, 1, 0};
  CHECK(mask_from_profile(sigma) == 0b01101u);
  CHECK(profile_from_mask(0b01101u, 5) == sigma);
}
