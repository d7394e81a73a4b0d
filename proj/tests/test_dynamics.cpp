#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "netgames/anchors.hpp"
#include "netgames/dynamics.hpp"
#include "netgames/oracle.hpp"

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

GameSpec nsg(int r, int s, double alpha = 1.0) {
  GameSpec spec;
  spec.kind = GameKind::Nsg;
  spec.r = r;
  spec.s = s;
  spec.alpha = alpha;
  return spec;
}

}  // namespace

TEST_CASE("gibbs selection probabilities") {
  SUBCASE("tie gives a fair coin") {
    const auto p = lll_probabilities({0.3, 0.3}, 0.7);
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.5));
  }
  SUBCASE("unit gap at T = 0.3") {
    const auto p = lll_probabilities({1.0, 0.0}, 0.3);
    CHECK(p[1] == doctest::Approx(0.0344452).epsilon(1e-4));
  }
  SUBCASE("exploitation limit") {
    const auto p = lll_probabilities({1.0, 0.0}, 0.01);
    CHECK(p[1] < 1e-40);
    CHECK(p[0] >= 1.0 - 1e-40);
  }
  SUBCASE("normalised and interior for finite T") {
    const auto p = lll_probabilities({-2.0, 5.0, 0.0}, 1.3);
    CHECK(std::abs(p[0] + p[1] + p[2] - 1.0) < 1e-12);
    for (double v : p) {
      CHECK(v > 0.0);
      CHECK(v < 1.0);
    }
  }
  SUBCASE("scaling utilities and T together changes nothing") {
    const std::vector<double> utils{0.4, -1.1, 2.2};
    std::vector<double> scaled;
    for (double u : utils) scaled.push_back(u * 37.0);
    const auto p = lll_probabilities(utils, 0.5);
    const auto q = lll_probabilities(scaled, 0.5 * 37.0);
    for (std::size_t a = 0; a < p.size(); ++a) CHECK(std::abs(p[a] - q[a]) < 1e-12);
  }
  SUBCASE("extreme temperatures stay finite") {
    const auto cold = lll_probabilities({1000.0, -1000.0}, 1e-6);
    CHECK(cold[0] == doctest::Approx(1.0));
    const auto hot = lll_probabilities({1000.0, -1000.0}, 1e9);
    CHECK(hot[0] == doctest::Approx(0.5).epsilon(1e-3));
  }
  SUBCASE("rejects bad input") {
    CHECK_THROWS_AS(lll_probabilities({0.0, 1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lll_probabilities({0.0, 1.0}, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(lll_probabilities({}, 1.0), std::invalid_argument);
  }
}

TEST_CASE("single revision step") {
  const Graph ring = gen_ring(6);
  const GameSpec spec = npg(2);

  SUBCASE("at most one coordinate changes") {
    Rng rng(3);
    ActionProfile sigma{1, 0, 1, 0, 1, 0};
    for (int t = 0; t < 50; ++t) {
      const auto [next, player] = lll_step(ring, nullptr, spec, sigma, nullptr, 0.5, rng);
      int changed = 0;
      for (int i = 0; i < 6; ++i)
        if (next[i] != sigma[i]) {
          ++changed;
          CHECK(i == player);
        }
      CHECK(changed <= 1);
      sigma = next;
    }
  }
  SUBCASE("replay is identical") {
    Rng a(11), b(11);
    const ActionProfile sigma{1, 1, 0, 0, 0, 0};
    const auto first = lll_step(ring, nullptr, spec, sigma, nullptr, 0.3, a);
    const auto second = lll_step(ring, nullptr, spec, sigma, nullptr, 0.3, b);
    CHECK(first.first == second.first);
    CHECK(first.second == second.second);
  }
  SUBCASE("cold supported player joins almost surely") {
    // Refusing with two supporting neighbours costs a unit gap.
    const auto p = lll_probabilities({0.0, 1.0}, 0.01);
    CHECK(p[1] >= 1.0 - 1e-40);
  }
}

TEST_CASE("engine matches the pure evaluations along a random walk") {
  Rng rng(77);
  for (int trial = 0; trial < 4; ++trial) {
    const bool sharing = trial % 2 == 1;
    const Graph g = gen_erdos_renyi(12, 0.3, rng.next());
    GameSpec spec = sharing ? nsg(5, 2) : npg(2);
    spec.variant = UtilityVariant::GlobalMcu;
    ResourceAssignment labels;
    const ResourceAssignment* labels_ptr = nullptr;
    if (sharing) {
      labels = assign_resources(g, spec.r, spec.s, rng.next());
      labels_ptr = &labels;
    }
    SimConfig config;
    config.temperature = 0.5;
    config.iterations = 400;
    config.steady_window = 0;
    config.seed = rng.next();
    config.init = InitialCondition::RandomHalf;
    LllEngine engine(g, labels_ptr, spec, config);
    for (int t = 0; t < 400; ++t) {
      engine.step();
      if (t % 37 != 0) continue;
      ActionProfile sigma = engine.profile();
      CHECK(engine.potential_value() ==
            doctest::Approx(potential(g, labels_ptr, spec, sigma)).epsilon(1e-9));
      for (int i = 0; i < g.n; ++i) {
        ActionProfile probe = sigma;
        probe[i] = 1;
        CHECK(engine.base_utility_if_participating(i) ==
              doctest::Approx(base_utility(g, labels_ptr, spec, probe, i)));
        CHECK(engine.impact_if_participating(i) ==
              doctest::Approx(impact(g, labels_ptr, spec, probe, i)));
      }
    }
  }
}

TEST_CASE("run produces a coherent trace") {
  const Graph ring = gen_ring(8);
  const GameSpec spec = npg(2);

  SUBCASE("zero iterations keeps only the initial state") {
    SimConfig config;
    config.iterations = 0;
    config.steady_window = 0;
    config.init = InitialCondition::AllOne;
    const SimTrace trace = run(ring, nullptr, spec, config);
    CHECK(trace.participating.size() == 1);
    CHECK(trace.participating[0] == 8);
    CHECK(trace.final_profile == ActionProfile(8, 1));
  }
  SUBCASE("participation counts stay within range and match flips") {
    SimConfig config;
    config.temperature = 0.4;
    config.iterations = 3000;
    config.steady_window = 500;
    config.seed = 5;
    config.init = InitialCondition::RandomHalf;
    const SimTrace trace = run(ring, nullptr, spec, config);
    CHECK(trace.participating.size() == 3001);
    for (std::size_t t = 0; t < trace.participating.size(); ++t) {
      CHECK(trace.participating[t] >= 0);
      CHECK(trace.participating[t] <= 8);
      if (t > 0) CHECK(std::abs(trace.participating[t] - trace.participating[t - 1]) <= 1);
    }
    int final_count = 0;
    for (auto a : trace.final_profile) final_count += a;
    CHECK(final_count == trace.participating.back());
  }
  SUBCASE("identical config replays byte-identically") {
    SimConfig config;
    config.temperature = 0.3;
    config.iterations = 2000;
    config.steady_window = 400;
    config.seed = 99;
    const SimTrace a = run(ring, nullptr, spec, config);
    const SimTrace b = run(ring, nullptr, spec, config);
    CHECK(a.participating == b.participating);
    CHECK(a.frequency == b.frequency);
    CHECK(a.final_profile == b.final_profile);
  }
}

TEST_CASE("trailing frequencies equal a brute-force recount") {
  const Graph g = gen_erdos_renyi(10, 0.35, 4);
  const GameSpec spec = npg(2);
  SimConfig config;
  config.temperature = 0.6;
  config.iterations = 1200;
  config.steady_window = 700;
  config.seed = 12;
  config.init = InitialCondition::RandomHalf;

  // Replay the exact chain and accumulate the trailing window by hand.
  LllEngine engine(g, nullptr, spec, config);
  std::vector<long long> occupied(g.n, 0);
  for (long long t = 1; t <= config.iterations; ++t) {
    engine.step();
    if (t > config.iterations - config.steady_window)
      for (int i = 0; i < g.n; ++i) occupied[i] += engine.profile()[i];
  }

  const SimTrace trace = run(g, nullptr, spec, config);
  for (int i = 0; i < g.n; ++i)
    CHECK(trace.frequency[i] ==
          doctest::Approx(static_cast<double>(occupied[i]) / config.steady_window));
}

TEST_CASE("steady-state membership") {
  SimTrace trace;
  trace.frequency = {1.0, 0.95, 0.951, 0.0};
  const auto members = classify_steady_state(trace, 0.95);
  CHECK(members == std::vector<std::uint8_t>{1, 0, 1, 0});
}

TEST_CASE("cold base chains end in equilibria") {
  const Graph ring = gen_ring(6);
  const GameSpec spec = npg(2);
  int nash_ends = 0;
  const int runs = 200;
  for (int rep = 0; rep < runs; ++rep) {
    SimConfig config;
    config.temperature = 0.05;
    config.iterations = 20000;
    config.steady_window = 0;
    config.seed = derive_seed(7, rep, 0);
    config.init = InitialCondition::RandomHalf;
    const SimTrace trace = run(ring, nullptr, spec, config);
    nash_ends += is_nash(ring, nullptr, spec, trace.final_profile).nash;
  }
  CHECK(nash_ends >= runs * 99 / 100);
}

TEST_CASE("config validation") {
  SimConfig config;
  config.temperature = 0.0;
  CHECK_THROWS_AS(config.validate(4), std::invalid_argument);
  config.temperature = 0.3;
  config.steady_window = config.iterations + 1;
  CHECK_THROWS_AS(config.validate(4), std::invalid_argument);
  config.steady_window = 0;
  config.steady_threshold = 0.0;
  CHECK_THROWS_AS(config.validate(4), std::invalid_argument);
  config.steady_threshold = 0.95;
  config.init = InitialCondition::Explicit;
  config.explicit_init = {1, 0};
  CHECK_THROWS_AS(config.validate(4), std::invalid_argument);
  config.explicit_init = {1, 0, 1, 0};
  CHECK_NOTHROW(config.validate(4));
}

TEST_CASE("incremental potential stays exact over long runs") {
  const auto result = oracle::chain_validity(20000, 5);
  INFO(result.detail);
  CHECK(result.pass);
}
