// Participation and resource-sharing games: utilities, impacts, potentials,
// best responses and Nash checks. All operations are pure functions of their
// inputs and safe for concurrent evaluation against a shared graph.
#pragma once

#include <cstdint>
#include <vector>

#include "netgames/graph.hpp"

namespace netgames {

// Joint action profile; entry i is 1 when player i participates.
using ActionProfile = std::vector<std::uint8_t>;

enum class GameKind { Npg, Nsg };

// Base:       the plain participation / sharing payoff.
// GlobalMcu:  base plus the player's marginal impact on neighbours, which
//             makes the game an exact potential game.
// PaModulated: the impact term is paid only while the player holds anchor
//             status granted by the principal agent.
enum class UtilityVariant { Base, GlobalMcu, PaModulated };

struct GameSpec {
  GameKind kind = GameKind::Npg;
  UtilityVariant variant = UtilityVariant::Base;
  int k = 1;           // participation game: required participating neighbours
  int r = 0, s = 0;    // sharing game: total resources / per-player holdings
  double alpha = 1.0;  // payoff once the threshold is met

  void validate() const;
};

std::vector<int> participating_neighbors(const Graph& g, const ActionProfile& sigma, int i);

// Resources reachable through participating neighbours plus i's own labels;
// i's own holdings count regardless of its action.
std::vector<int> accessible_resources(const Graph& g, const ResourceAssignment& labels,
                                      const ActionProfile& sigma, int i);

struct NeighborhoodView {
  std::vector<int> participating_neighbors;
  std::vector<int> accessible_resources;  // empty for participation games
  std::vector<int> local_resource_pool;   // all resources in the closed neighbourhood
};
NeighborhoodView neighborhood_view(const Graph& g, const ResourceAssignment* labels,
                                   const ActionProfile& sigma, int i);

// Payoff of player i. Participation is worth alpha once at least k neighbours
// participate and a normalised shortfall otherwise; abstention is worth 0.
// Isolated participants are charged the unnormalised shortfall -k.
double utility_npg(const Graph& g, const GameSpec& spec, const ActionProfile& sigma, int i);

// Sharing payoff: alpha with access to all r resources, normalised shortfall
// otherwise, 0 when abstaining.
double utility_nsg(const Graph& g, const ResourceAssignment& labels, const GameSpec& spec,
                   const ActionProfile& sigma, int i);

// Marginal contribution of i's participation to its neighbours' payoffs,
// evaluated as if sigma_i = 1. Neighbours whose threshold holds only through i
// contribute alpha plus their shortfall step; the rest of the participating
// neighbours contribute the shortfall step alone.
double impact_npg(const Graph& g, const GameSpec& spec, const ActionProfile& sigma, int i);
double impact_nsg(const Graph& g, const ResourceAssignment& labels, const GameSpec& spec,
                  const ActionProfile& sigma, int i);

// Kind dispatchers; labels is required for sharing games.
double base_utility(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
                    const ActionProfile& sigma, int i);
double impact(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
              const ActionProfile& sigma, int i);

// Variant utility. anchor_flag is only meaningful for PaModulated and must be
// 0 otherwise.
double utility(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
               const ActionProfile& sigma, int i, int anchor_flag = 0);

// Sum of base utilities; the potential of the exact potential game induced by
// the GlobalMcu utilities.
double potential(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
                 const ActionProfile& sigma);

// Actions maximising the variant utility; both actions on an exact tie.
std::vector<int> best_response_set(const Graph& g, const ResourceAssignment* labels,
                                   const GameSpec& spec, const ActionProfile& sigma, int i,
                                   int anchor_flag = 0);

struct NashCheck {
  bool nash = false;
  int deviator = -1;         // one strictly improving player when !nash
  bool closed_form = false;  // threshold characterisation of the same profile
};

// Deviation scan over base utilities plus the closed-form characterisation:
// all-zero, or every participant meets its threshold while every abstainer
// would fall short.
NashCheck is_nash(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
                  const ActionProfile& sigma);

}  // namespace netgames
