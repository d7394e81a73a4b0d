// Log-linear learning over action profiles: one random player revises per
// iteration, sampling actions with Gibbs weights at temperature T.
#pragma once

#include <cstdint>
#include <vector>

#include "netgames/games.hpp"
#include "netgames/rng.hpp"

namespace netgames {

struct PaState;
struct AnchorTrace;
struct PaAudit;

// Selection probabilities over candidate actions; max-shifted so any T > 0 is
// numerically safe. Rejects T <= 0.
std::vector<double> lll_probabilities(const std::vector<double>& utilities, double T);

enum class InitialCondition { AllZero, AllOne, RandomHalf, Explicit };

struct SimConfig {
  double temperature = 0.3;
  long long iterations = 200000;
  std::uint64_t seed = 0;
  long long steady_window = 30000;    // trailing iterations used for membership
  double steady_threshold = 0.95;     // strict: member iff frequency > threshold
  InitialCondition init = InitialCondition::AllZero;
  ActionProfile explicit_init;

  void validate(int n) const;
};

struct SimTrace {
  // One entry per recorded state; index 0 is the initial condition.
  std::vector<int> participating;
  std::vector<int> anchors;
  std::vector<double> potential;
  // Per-player share of the trailing steady_window states spent participating.
  std::vector<double> frequency;
  ActionProfile final_profile;
  long long steady_window = 0;
  double steady_threshold = 0.95;
};

// Membership vector: 1 iff the trailing frequency strictly exceeds threshold.
std::vector<std::uint8_t> classify_steady_state(const SimTrace& trace, double threshold);

// Incremental chain state. Participating-neighbour counts, reachable-resource
// counts and the potential are maintained under single flips, so a revision
// step costs O(degree) at worst.
class LllEngine {
 public:
  LllEngine(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
            const SimConfig& config);

  struct Step {
    int player = -1;
    int old_action = 0;
    int new_action = 0;
  };

  // One revision opportunity. When a PA state is supplied the decision hook
  // runs before the player samples and the after-action hook runs after;
  // reassessment fires every pa.cfg.t_u iterations.
  Step step();
  Step step(PaState& pa, AnchorTrace* trace, PaAudit* audit);

  double base_utility_if_participating(int i) const;
  double impact_if_participating(int i) const;
  double current_base_utility(int i) const {
    return actions_[i] ? base_utility_if_participating(i) : 0.0;
  }
  double variant_utility_if_participating(int i, int anchor_flag) const;

  const ActionProfile& profile() const { return actions_; }
  double potential_value() const { return potential_; }
  int participating_count() const { return participating_; }
  long long iteration() const { return iteration_; }
  void set_iteration(long long t) { iteration_ = t; }
  const Graph& graph() const { return *graph_; }
  const GameSpec& spec() const { return spec_; }
  const ResourceAssignment* labels() const { return labels_; }

 private:
  void apply_flip(int i);
  Step step_impl(PaState* pa, AnchorTrace* trace, PaAudit* audit);

  const Graph* graph_;
  const ResourceAssignment* labels_;
  GameSpec spec_;
  double temperature_;
  Rng rng_;
  ActionProfile actions_;
  std::vector<int> part_count_;       // participating neighbours per player
  std::vector<std::uint16_t> res_count_;  // sharing game: holders per (player, resource)
  std::vector<int> acc_size_;         // sharing game: reachable resource count
  std::vector<int> pool_size_;        // sharing game: closed-neighbourhood pool size
  double potential_ = 0.0;
  int participating_ = 0;
  long long iteration_ = 0;
};

// Single revision step on an explicit profile; returns the revised profile and
// the selected player. Thin wrapper over LllEngine for one-shot use.
std::pair<ActionProfile, int> lll_step(const Graph& g, const ResourceAssignment* labels,
                                       const GameSpec& spec, const ActionProfile& sigma,
                                       PaState* pa, double temperature, Rng& rng);

SimTrace run(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
             const SimConfig& config);

namespace detail {
// Shared driver behind run and run_anchored; records the trace every
// iteration and accumulates trailing-window participation times.
SimTrace run_loop(LllEngine& engine, const SimConfig& config, PaState* pa,
                  AnchorTrace* trace_events, PaAudit* audit);
}  // namespace detail

}  // namespace netgames
