// Principal-agent anchor selection: real-time grants, opt-out revocation,
// budget-constrained replacement, periodic reassessment, and a greedy
// anchored-core baseline.
#pragma once

#include <cstdint>
#include <vector>

#include "netgames/cores.hpp"
#include "netgames/dynamics.hpp"

namespace netgames {

// Whether the minimum-service threshold t_th counts single iterations or
// whole reassessment periods (t_u iterations each).
enum class TenureUnit { Iterations, Periods };

struct PaConfig {
  long long budget = -1;  // negative = unbounded
  long long t_th = 1000;  // minimum tenure before eviction or graduation
  long long t_u = 100;    // reassessment period in iterations
  TenureUnit tenure_unit = TenureUnit::Iterations;

  // Candidate test evaluation point: at the participation branch (sigma_i = 1)
  // or at the player's current action, under which only current participants
  // qualify for a grant.
  bool candidate_at_participation = true;

  // Test-harness fault injection: at the given iteration, this many random
  // anchors are forcibly revoked. Disabled when failure_iteration < 0.
  long long failure_iteration = -1;
  long long failure_count = 0;
  std::uint64_t failure_seed = 0;

  bool bounded() const { return budget >= 0; }
  void validate() const;
};

struct LedgerEntry {
  int player = -1;
  double impact = 0.0;      // most recent evaluation of the player's impact
  long long granted_iter = 0;
  long long periods = 0;    // reassessments survived since the grant
};

// Anchor flags plus the ledger; the two are kept in bijection.
struct PaState {
  PaConfig cfg;
  std::vector<std::uint8_t> flags;
  std::vector<LedgerEntry> ledger;

  PaState(int n, const PaConfig& config) : cfg(config), flags(n, 0) { cfg.validate(); }

  int anchor_count() const { return static_cast<int>(ledger.size()); }
  long long tenure(const LedgerEntry& entry, long long now_iter) const {
    return cfg.tenure_unit == TenureUnit::Iterations ? now_iter - entry.granted_iter
                                                     : entry.periods;
  }
  int find(int player) const;
};

enum class AnchorEventKind { Grant, Revoke, Replace, Graduate };

struct AnchorEvent {
  long long iter = 0;
  AnchorEventKind kind = AnchorEventKind::Grant;
  int player = -1;
  double impact = 0.0;
  int anchors_after = 0;
};

struct AnchorTrace {
  std::vector<AnchorEvent> events;
  long long grants = 0;
  long long revocations = 0;  // revoke + replace + graduate
};

// In-run invariant counters; all fields stay zero on a correct run.
struct PaAudit {
  long long steps = 0;
  long long budget_violations = 0;
  long long grant_condition_violations = 0;
  long long bijection_violations = 0;
  long long eviction_order_violations = 0;
};

// Decision hook, applied before player i samples its action. Candidates have
// a non-positive participation payoff that turns positive once their impact
// is credited. Returns the flag now in force for i.
int pa_decide(const LllEngine& engine, PaState& pa, int i, AnchorTrace* trace = nullptr,
              PaAudit* audit = nullptr);

// Post-decision hook: an anchor that opted out loses its status; one that
// participated has its ledger impact refreshed.
void pa_after_action(const LllEngine& engine, PaState& pa, int i, int chosen_action,
                     AnchorTrace* trace = nullptr, PaAudit* audit = nullptr);

// Periodic reassessment: tenure advances and anchors whose base payoff turned
// positive graduate once they have served at least t_th.
void pa_reassess(const LllEngine& engine, PaState& pa, AnchorTrace* trace = nullptr,
                 PaAudit* audit = nullptr);

// Forcibly revokes `count` uniformly chosen anchors (fault injection).
void pa_force_failures(const LllEngine& engine, PaState& pa, long long count,
                       std::uint64_t seed, AnchorTrace* trace = nullptr,
                       PaAudit* audit = nullptr);

// Profile-level wrappers for one-shot evaluation.
int pa_decide(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
              const ActionProfile& sigma, PaState& pa, int i, long long iter = 0);
void pa_after_action(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
                     const ActionProfile& sigma, PaState& pa, int i, int chosen_action);
void pa_reassess(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
                 const ActionProfile& sigma, PaState& pa, long long iter);

struct AnchoredRun {
  SimTrace trace;
  AnchorTrace anchors;
  PaAudit audit;
  std::vector<std::uint8_t> final_flags;
};

AnchoredRun run_anchored(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
                         const SimConfig& config, const PaConfig& pa_config);

// Greedy baseline: repeatedly add the non-core node whose permanent anchoring
// maximises the anchored cascade fixed point; ties break to the lowest index.
struct GreedyAnchoredCore {
  std::vector<int> anchors;     // in pick order
  std::vector<int> core_sizes;  // index b = anchored core size with b anchors
  std::vector<std::uint8_t> in_core;
};

GreedyAnchoredCore greedy_anchored_core(const Graph& g, const ResourceAssignment* labels,
                                        const GameSpec& spec, int budget);

}  // namespace netgames
