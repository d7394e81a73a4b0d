#include "netgames/anchors.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace netgames {

namespace {

void log_event(AnchorTrace* trace, const PaState& pa, long long iter, AnchorEventKind kind,
               int player, double impact_value) {
  if (kind == AnchorEventKind::Grant) {
    if (trace) ++trace->grants;
  } else if (trace) {
    ++trace->revocations;
  }
  if (trace)
    trace->events.push_back({iter, kind, player, impact_value, pa.anchor_count()});
}

void remove_entry(PaState& pa, int index) {
  pa.flags[pa.ledger[index].player] = 0;
  pa.ledger.erase(pa.ledger.begin() + index);
}

void check_bijection(const PaState& pa, PaAudit* audit) {
  if (!audit) return;
  int flagged = 0;
  for (auto f : pa.flags) flagged += f;
  bool consistent = flagged == pa.anchor_count();
  for (const auto& entry : pa.ledger)
    if (!pa.flags[entry.player]) consistent = false;
  if (!consistent) ++audit->bijection_violations;
  if (pa.cfg.bounded() && pa.anchor_count() > pa.cfg.budget) ++audit->budget_violations;
}

// Re-derives the grant condition from the engine so the audit does not trust
// the caller's intermediate values.
void audit_grant(const LllEngine& engine, int i, PaAudit* audit) {
  if (!audit) return;
  const double gain = engine.base_utility_if_participating(i);
  const double influence = engine.impact_if_participating(i);
  if (!(gain <= 0 && gain + influence > 0)) ++audit->grant_condition_violations;
}

}  // namespace

void PaConfig::validate() const {
  if (t_u < 1) throw std::invalid_argument("pa: t_u must be >= 1");
  if (t_th < 0) throw std::invalid_argument("pa: t_th must be non-negative");
}

int PaState::find(int player) const {
  for (std::size_t idx = 0; idx < ledger.size(); ++idx)
    if (ledger[idx].player == player) return static_cast<int>(idx);
  return -1;
}

int pa_decide(const LllEngine& engine, PaState& pa, int i, AnchorTrace* trace, PaAudit* audit) {
  const long long now = engine.iteration();
  if (audit) {
    ++audit->steps;
    if (pa.cfg.bounded() && pa.anchor_count() > pa.cfg.budget) ++audit->budget_violations;
  }

  const double gain = engine.base_utility_if_participating(i);
  int held = pa.find(i);

  // A player whose own payoff sustains participation needs no incentive.
  if (held >= 0 && gain > 0) {
    const double last = pa.ledger[held].impact;
    remove_entry(pa, held);
    log_event(trace, pa, now, AnchorEventKind::Revoke, i, last);
    held = -1;
  }

  const bool eligible =
      pa.cfg.candidate_at_participation || engine.profile()[i] || held >= 0;
  const double influence =
      eligible && gain <= 0 ? engine.impact_if_participating(i) : 0.0;
  const bool candidate = eligible && gain <= 0 && gain + influence > 0;

  if (held >= 0) {
    // Existing anchor at its own revision: without a bounded ledger the flag
    // simply tracks candidacy; under a budget only opt-out, replacement or
    // graduation may end the tenure early.
    if (!candidate && !pa.cfg.bounded()) {
      const double last = pa.ledger[held].impact;
      remove_entry(pa, held);
      log_event(trace, pa, now, AnchorEventKind::Revoke, i, last);
    }
    return pa.flags[i];
  }

  if (!candidate) return 0;

  if (!pa.cfg.bounded() || pa.anchor_count() < pa.cfg.budget) {
    audit_grant(engine, i, audit);
    pa.flags[i] = 1;
    pa.ledger.push_back({i, influence, now, 0});
    log_event(trace, pa, now, AnchorEventKind::Grant, i, influence);
    check_bijection(pa, audit);
    return 1;
  }

  // Budget exhausted: replace the weakest tenured anchor, if any is both
  // tenured and strictly less impactful than the candidate.
  int weakest = -1;
  double weakest_impact = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < pa.ledger.size(); ++idx) {
    const auto& entry = pa.ledger[idx];
    if (pa.tenure(entry, now) < pa.cfg.t_th) continue;
    if (entry.impact < weakest_impact) {
      weakest_impact = entry.impact;
      weakest = static_cast<int>(idx);
    }
  }
  if (weakest >= 0 && influence > weakest_impact) {
    audit_grant(engine, i, audit);
    if (audit && influence <= weakest_impact) ++audit->eviction_order_violations;
    const int evicted = pa.ledger[weakest].player;
    remove_entry(pa, weakest);
    log_event(trace, pa, now, AnchorEventKind::Replace, evicted, weakest_impact);
    pa.flags[i] = 1;
    pa.ledger.push_back({i, influence, now, 0});
    log_event(trace, pa, now, AnchorEventKind::Grant, i, influence);
    check_bijection(pa, audit);
    return 1;
  }
  return 0;
}

void pa_after_action(const LllEngine& engine, PaState& pa, int i, int chosen_action,
                     AnchorTrace* trace, PaAudit* audit) {
  const int held = pa.find(i);
  if (held < 0) return;
  if (chosen_action == 0) {
    // Opting out forfeits the incentive immediately.
    const double last = pa.ledger[held].impact;
    remove_entry(pa, held);
    log_event(trace, pa, engine.iteration(), AnchorEventKind::Revoke, i, last);
  } else {
    pa.ledger[held].impact = engine.impact_if_participating(i);
  }
  check_bijection(pa, audit);
}

void pa_reassess(const LllEngine& engine, PaState& pa, AnchorTrace* trace, PaAudit* audit) {
  const long long now = engine.iteration();
  for (auto& entry : pa.ledger) ++entry.periods;
  for (std::size_t idx = 0; idx < pa.ledger.size();) {
    auto& entry = pa.ledger[idx];
    entry.impact = engine.impact_if_participating(entry.player);
    const bool served = pa.tenure(entry, now) >= pa.cfg.t_th;
    if (served && engine.current_base_utility(entry.player) > 0) {
      const int player = entry.player;
      const double last = entry.impact;
      remove_entry(pa, static_cast<int>(idx));
      log_event(trace, pa, now, AnchorEventKind::Graduate, player, last);
    } else {
      ++idx;
    }
  }
  check_bijection(pa, audit);
}

void pa_force_failures(const LllEngine& engine, PaState& pa, long long count,
                       std::uint64_t seed, AnchorTrace* trace, PaAudit* audit) {
  Rng rng(seed);
  const long long now = engine.iteration();
  for (long long hit = 0; hit < count && !pa.ledger.empty(); ++hit) {
    const int idx = static_cast<int>(rng.next_below(pa.ledger.size()));
    const int player = pa.ledger[idx].player;
    const double last = pa.ledger[idx].impact;
    remove_entry(pa, idx);
    log_event(trace, pa, now, AnchorEventKind::Revoke, player, last);
  }
  check_bijection(pa, audit);
}

namespace {

LllEngine engine_at(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
                    const ActionProfile& sigma, long long iter) {
  SimConfig config;
  config.iterations = 0;
  config.steady_window = 0;
  config.init = InitialCondition::Explicit;
  config.explicit_init = sigma;
  LllEngine engine(g, labels, spec, config);
  engine.set_iteration(iter);
  return engine;
}

}  // namespace

int pa_decide(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
              const ActionProfile& sigma, PaState& pa, int i, long long iter) {
  LllEngine engine = engine_at(g, labels, spec, sigma, iter);
  return pa_decide(engine, pa, i);
}

void pa_after_action(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
                     const ActionProfile& sigma, PaState& pa, int i, int chosen_action) {
  LllEngine engine = engine_at(g, labels, spec, sigma, 0);
  pa_after_action(engine, pa, i, chosen_action);
}

void pa_reassess(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
                 const ActionProfile& sigma, PaState& pa, long long iter) {
  LllEngine engine = engine_at(g, labels, spec, sigma, iter);
  pa_reassess(engine, pa);
}

AnchoredRun run_anchored(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
                         const SimConfig& config, const PaConfig& pa_config) {
  if (spec.variant != UtilityVariant::PaModulated)
    throw std::invalid_argument("run_anchored requires the PA-modulated variant");
  LllEngine engine(g, labels, spec, config);
  PaState pa(g.n, pa_config);
  AnchoredRun result;
  result.trace = detail::run_loop(engine, config, &pa, &result.anchors, &result.audit);
  result.final_flags = pa.flags;
  return result;
}

GreedyAnchoredCore greedy_anchored_core(const Graph& g, const ResourceAssignment* labels,
                                        const GameSpec& spec, int budget) {
  if (budget < 0) throw std::invalid_argument("greedy: budget must be non-negative");
  if (spec.kind == GameKind::Nsg && labels == nullptr)
    throw std::invalid_argument("greedy: sharing game requires a resource assignment");

  auto cascade = [&](const std::vector<std::uint8_t>& anchored) {
    return spec.kind == GameKind::Npg ? anchored_k_core(g, spec.k, anchored)
                                      : anchored_rs_core(g, *labels, spec.r, anchored);
  };

  GreedyAnchoredCore result;
  std::vector<std::uint8_t> anchored(g.n, 0);
  CoreResult current = cascade(anchored);
  result.core_sizes.push_back(current.size());

  for (int round = 0; round < budget; ++round) {
    int best_node = -1;
    int best_size = -1;
    for (int c = 0; c < g.n; ++c) {
      if (current.in_core[c]) continue;  // already retained
      anchored[c] = 1;
      const int size = cascade(anchored).size();
      anchored[c] = 0;
      if (size > best_size) {  // strict: ties resolve to the lowest index
        best_size = size;
        best_node = c;
      }
    }
    if (best_node < 0) break;  // everyone already in the core
    anchored[best_node] = 1;
    result.anchors.push_back(best_node);
    current = cascade(anchored);
    result.core_sizes.push_back(current.size());
  }
  result.in_core = current.in_core;
  return result;
}

}  // namespace netgames
