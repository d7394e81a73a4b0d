// Stochastic-stability machinery over the 2^n profile space: transition
// resistances, minimum-resistance paths, basins, Radius/CoRadius certificates,
// closed-form payoff thresholds, and an exact stationary-distribution solve.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netgames/games.hpp"

namespace netgames {

// Profiles double as bitmask indices: bit i set means player i participates.
ActionProfile profile_from_mask(std::uint32_t mask, int n);
std::uint32_t mask_from_profile(const ActionProfile& sigma);

// Guards keep exhaustive enumeration tractable.
inline constexpr int kMaxPathPlayers = 14;
inline constexpr int kMaxStationaryPlayers = 10;

// Utility shortfall of the step from -> to (profiles at Hamming distance 1)
// relative to the deviating player's best response; zero exactly for
// best-response moves.
double transition_resistance(const Graph& g, const ResourceAssignment* labels,
                             const GameSpec& spec, const ActionProfile& from,
                             const ActionProfile& to);

struct ResistancePath {
  double resistance = 0.0;
  std::vector<std::uint32_t> profiles;  // empty when from == to
};

ResistancePath min_resistance(const Graph& g, const ResourceAssignment* labels,
                              const GameSpec& spec, const ActionProfile& from,
                              const ActionProfile& to);

// All profiles with a zero-resistance path into sigma (sigma included).
std::vector<std::uint32_t> basin_of_attraction(const Graph& g, const ResourceAssignment* labels,
                                               const GameSpec& spec, const ActionProfile& sigma);

// Rd: cheapest escape from sigma's basin (infinity when the basin covers the
// whole space). CR: costliest approach among strict equilibria outside the
// basin (0 when there are none).
double radius(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
              const ActionProfile& sigma);
double coradius(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
                const ActionProfile& sigma);

struct EquilibriumReport {
  std::uint32_t profile = 0;
  double radius = 0.0;
  double coradius = 0.0;
  std::size_t basin_size = 0;
  bool stochastically_stable = false;          // Rd > CR certificate
  std::vector<std::uint32_t> witness_escape;   // a minimum-resistance escape path
};

struct RdCrReport {
  int n = 0;
  std::vector<EquilibriumReport> equilibria;  // one per strict Nash equilibrium
};

RdCrReport rd_cr_report(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec);
std::string rd_cr_report_json(const RdCrReport& report);

// Closed-form payoff thresholds for the participation game with k = 2.
// alpha_upper: above it, full participation is certified stable.
// alpha_lower: below it, the empty profile is certified stable (equal to
// alpha_upper when the certificates are complementary).
struct AlphaThresholdReport {
  double alpha_upper = 0.0;
  double alpha_lower = 0.0;
  double alpha_upper_alt = 0.0;  // grid: variant implied by the long-form resistance sum
  bool has_alt = false;
};

AlphaThresholdReport alpha_thresholds_ring(int n);
AlphaThresholdReport alpha_thresholds_wheel(int n);
AlphaThresholdReport alpha_thresholds_grid(int m);  // m >= 4

// Exact stationary distribution of the revision chain (uniform player
// selection composed with the Gibbs action draw), indexed by profile mask.
std::vector<double> stationary_distribution(const Graph& g, const ResourceAssignment* labels,
                                            const GameSpec& spec, double T);

}  // namespace netgames
