// Cross-checks tying the fast implementations to independent ground truth:
// potential differences, exhaustive best-response scans, equilibrium
// characterisations, and the exact chain solution.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netgames/games.hpp"

namespace netgames::oracle {

struct CheckResult {
  bool pass = false;
  double worst = 0.0;  // largest residual / violation count, check-specific
  std::string detail;
};

// |dU_i - dPhi| over random (graph, profile, player) triples under the
// impact-augmented utilities.
CheckResult exact_potential(GameKind kind, int max_players, long long samples,
                            std::uint64_t seed, double tolerance);

// Exhaustive: every best-response digraph over all connected graphs with at
// most max_players nodes is acyclic, for each threshold in ks.
CheckResult br_acyclicity(int max_players, const std::vector<int>& ks);

// Deviation scan versus the threshold characterisation on random instances.
CheckResult nash_closed_form_agreement(int max_players, long long samples, std::uint64_t seed);

// Single-flip revisions: at most one coordinate changes and it belongs to the
// reported player; the incremental potential matches a full recomputation.
CheckResult chain_validity(long long steps, std::uint64_t seed);

// Exact-solution checks at (n, T): transition rows sum to one, the
// impact-augmented chain balances against exp(Phi/T), and a Monte-Carlo run
// of mc_steps lands within tv_tolerance of the solved distribution.
CheckResult stationary_consistency(int n, double T, long long mc_steps, double tv_tolerance,
                                   std::uint64_t seed);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

// Empirical visit distribution over profile masks of a chain started from
// `start`, after `steps` revisions.
std::vector<double> empirical_occupation(const Graph& g, const ResourceAssignment* labels,
                                         const GameSpec& spec, const ActionProfile& start,
                                         double T, long long steps, std::uint64_t seed);

}  // namespace netgames::oracle
