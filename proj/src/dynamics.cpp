#include "netgames/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "netgames/anchors.hpp"

namespace netgames {

std::vector<double> lll_probabilities(const std::vector<double>& utilities, double T) {
  if (!(T > 0)) throw std::invalid_argument("lll: temperature must be positive");
  if (utilities.empty()) throw std::invalid_argument("lll: no candidate actions");
  double best = utilities[0];
  for (double u : utilities) best = std::max(best, u);
  std::vector<double> p(utilities.size());
  double z = 0.0;
  for (std::size_t a = 0; a < utilities.size(); ++a) {
    p[a] = std::exp((utilities[a] - best) / T);
    z += p[a];
  }
  for (double& v : p) v /= z;
  return p;
}

void SimConfig::validate(int n) const {
  if (!(temperature > 0)) throw std::invalid_argument("sim: temperature must be positive");
  if (iterations < 0) throw std::invalid_argument("sim: iterations must be non-negative");
  if (steady_window < 0 || steady_window > iterations)
    throw std::invalid_argument("sim: steady_window must lie in [0, iterations]");
  if (!(steady_threshold > 0 && steady_threshold <= 1))
    throw std::invalid_argument("sim: steady_threshold must lie in (0, 1]");
  if (init == InitialCondition::Explicit) {
    if (static_cast<int>(explicit_init.size()) != n)
      throw std::invalid_argument("sim: explicit profile length must equal n");
    for (auto a : explicit_init)
      if (a > 1) throw std::invalid_argument("sim: actions must be 0 or 1");
  }
}

std::vector<std::uint8_t> classify_steady_state(const SimTrace& trace, double threshold) {
  std::vector<std::uint8_t> member(trace.frequency.size(), 0);
  for (std::size_t i = 0; i < trace.frequency.size(); ++i)
    member[i] = trace.frequency[i] > threshold ? 1 : 0;
  return member;
}

LllEngine::LllEngine(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
                     const SimConfig& config)
    : graph_(&g), labels_(labels), spec_(spec), temperature_(config.temperature),
      rng_(config.seed) {
  spec_.validate();
  config.validate(g.n);
  if (spec_.kind == GameKind::Nsg) {
    if (labels == nullptr)
      throw std::invalid_argument("sharing game requires a resource assignment");
    labels->validate(g.n);
    if (labels->r != spec_.r || labels->s != spec_.s)
      throw std::invalid_argument("resource assignment does not match the game spec");
  }

  actions_.assign(g.n, 0);
  switch (config.init) {
    case InitialCondition::AllZero:
      break;
    case InitialCondition::AllOne:
      actions_.assign(g.n, 1);
      break;
    case InitialCondition::RandomHalf:
      for (auto& a : actions_) a = static_cast<std::uint8_t>(rng_.next_below(2));
      break;
    case InitialCondition::Explicit:
      actions_ = config.explicit_init;
      break;
  }
  for (auto a : actions_) participating_ += a;

  part_count_.assign(g.n, 0);
  for (int i = 0; i < g.n; ++i)
    for (int j : g.adj[i]) part_count_[i] += actions_[j];

  if (spec_.kind == GameKind::Nsg) {
    const int r = spec_.r;
    res_count_.assign(static_cast<std::size_t>(g.n) * r, 0);
    acc_size_.assign(g.n, 0);
    pool_size_.assign(g.n, 0);
    for (int i = 0; i < g.n; ++i) {
      auto* row = &res_count_[static_cast<std::size_t>(i) * r];
      for (int id : labels_->labels[i]) ++row[id];
      for (int j : g.adj[i])
        if (actions_[j])
          for (int id : labels_->labels[j]) ++row[id];
      for (int id = 0; id < r; ++id) acc_size_[i] += row[id] > 0;

      std::vector<std::uint8_t> seen(r, 0);
      for (int id : labels_->labels[i]) seen[id] = 1;
      for (int j : g.adj[i])
        for (int id : labels_->labels[j]) seen[id] = 1;
      for (int id = 0; id < r; ++id) pool_size_[i] += seen[id];
    }
  }

  potential_ = potential(g, labels_, spec_, actions_);
}

double LllEngine::base_utility_if_participating(int i) const {
  if (spec_.kind == GameKind::Npg) {
    const int degree = graph_->degree(i);
    if (part_count_[i] >= spec_.k) return spec_.alpha;
    if (degree == 0) return -static_cast<double>(spec_.k);
    return static_cast<double>(part_count_[i] - spec_.k) / degree;
  }
  if (acc_size_[i] == spec_.r) return spec_.alpha;
  return static_cast<double>(acc_size_[i] - spec_.r) / pool_size_[i];
}

double LllEngine::impact_if_participating(int i) const {
  double total = 0.0;
  if (spec_.kind == GameKind::Npg) {
    const int extra = actions_[i] ? 0 : 1;
    for (int j : graph_->adj[i]) {
      if (!actions_[j]) continue;
      const int support = part_count_[j] + extra;
      if (support == spec_.k)
        total += spec_.alpha + 1.0 / graph_->degree(j);
      else if (support < spec_.k)
        total += 1.0 / graph_->degree(j);
    }
    return total;
  }
  const int r = spec_.r;
  for (int j : graph_->adj[i]) {
    if (!actions_[j]) continue;
    const auto* row = &res_count_[static_cast<std::size_t>(j) * r];
    // Resources neighbour j reaches only through i.
    int unique = 0;
    if (actions_[i]) {
      for (int id : labels_->labels[i]) unique += row[id] == 1;
    } else {
      for (int id : labels_->labels[i]) unique += row[id] == 0;
    }
    const int with_i = actions_[i] ? acc_size_[j] : acc_size_[j] + unique;
    const int without_i = with_i - unique;
    if (with_i == r && without_i < r)
      total += spec_.alpha + static_cast<double>(unique) / pool_size_[j];
    else if (with_i < r)
      total += static_cast<double>(unique) / pool_size_[j];
  }
  return total;
}

double LllEngine::variant_utility_if_participating(int i, int anchor_flag) const {
  const double base = base_utility_if_participating(i);
  switch (spec_.variant) {
    case UtilityVariant::Base:
      return base;
    case UtilityVariant::GlobalMcu:
      return base + impact_if_participating(i);
    case UtilityVariant::PaModulated:
      return anchor_flag ? base + impact_if_participating(i) : base;
  }
  return base;
}

void LllEngine::apply_flip(int i) {
  // Unilateral potential change equals the participating marginal value.
  const double marginal = base_utility_if_participating(i) + impact_if_participating(i);
  const int delta = actions_[i] ? -1 : 1;
  potential_ += delta * marginal;
  participating_ += delta;
  actions_[i] ^= 1;
  for (int j : graph_->adj[i]) part_count_[j] += delta;
  if (spec_.kind == GameKind::Nsg) {
    const int r = spec_.r;
    for (int j : graph_->adj[i]) {
      auto* row = &res_count_[static_cast<std::size_t>(j) * r];
      for (int id : labels_->labels[i]) {
        if (delta > 0) {
          if (row[id]++ == 0) ++acc_size_[j];
        } else {
          if (--row[id] == 0) --acc_size_[j];
        }
      }
    }
  }
}

LllEngine::Step LllEngine::step_impl(PaState* pa, AnchorTrace* trace, PaAudit* audit) {
  ++iteration_;
  const int n = graph_->n;
  const int i = static_cast<int>(rng_.next_below(static_cast<std::uint64_t>(n)));
  if (pa) pa_decide(*this, *pa, i, trace, audit);

  const int flag = pa ? pa->flags[i] : 0;
  const double gain = variant_utility_if_participating(i, flag);
  // Binary Gibbs draw between abstaining (0) and participating (gain).
  const double shift = std::max(0.0, gain);
  const double w0 = std::exp(-shift / temperature_);
  const double w1 = std::exp((gain - shift) / temperature_);
  const double p1 = w1 / (w0 + w1);
  const int action = rng_.next_unit() < p1 ? 1 : 0;

  Step result{i, actions_[i], action};
  if (action != actions_[i]) apply_flip(i);
  if (pa) {
    pa_after_action(*this, *pa, i, action, trace, audit);
    if (pa->cfg.t_u > 0 && iteration_ % pa->cfg.t_u == 0)
      pa_reassess(*this, *pa, trace, audit);
  }
  return result;
}

LllEngine::Step LllEngine::step() { return step_impl(nullptr, nullptr, nullptr); }

LllEngine::Step LllEngine::step(PaState& pa, AnchorTrace* trace, PaAudit* audit) {
  return step_impl(&pa, trace, audit);
}

std::pair<ActionProfile, int> lll_step(const Graph& g, const ResourceAssignment* labels,
                                       const GameSpec& spec, const ActionProfile& sigma,
                                       PaState* pa, double temperature, Rng& rng) {
  if (pa && spec.variant != UtilityVariant::PaModulated)
    throw std::invalid_argument("PA hooks require the PA-modulated variant");
  if (!pa && spec.variant == UtilityVariant::PaModulated)
    throw std::invalid_argument("PA-modulated variant requires a PA state");
  SimConfig config;
  config.temperature = temperature;
  config.iterations = 1;
  config.steady_window = 0;
  config.seed = rng.next();
  config.init = InitialCondition::Explicit;
  config.explicit_init = sigma;
  LllEngine engine(g, labels, spec, config);
  const auto step = pa ? engine.step(*pa, nullptr, nullptr) : engine.step();
  return {engine.profile(), step.player};
}

namespace detail {

SimTrace run_loop(LllEngine& engine, const SimConfig& config, PaState* pa,
                  AnchorTrace* trace_events, PaAudit* audit) {
  const int n = engine.graph().n;
  const long long total = config.iterations;
  const long long window = config.steady_window;
  const long long window_start = total - window;

  SimTrace trace;
  trace.steady_window = window;
  trace.steady_threshold = config.steady_threshold;
  trace.participating.reserve(total + 1);
  trace.anchors.reserve(total + 1);
  trace.potential.reserve(total + 1);
  trace.participating.push_back(engine.participating_count());
  trace.anchors.push_back(pa ? pa->anchor_count() : 0);
  trace.potential.push_back(engine.potential_value());

  // Participation time inside the trailing window, accumulated on flips.
  std::vector<long long> occupied(n, 0);
  std::vector<long long> segment_from(n, window_start);

  for (long long t = 1; t <= total; ++t) {
    const auto step = pa ? engine.step(*pa, trace_events, audit) : engine.step();
    if (pa && pa->cfg.failure_iteration == t)
      pa_force_failures(engine, *pa, pa->cfg.failure_count, pa->cfg.failure_seed, trace_events,
                        audit);
    if (step.old_action != step.new_action && t > window_start) {
      if (step.old_action)
        occupied[step.player] += (t - 1) - segment_from[step.player];
      segment_from[step.player] = t - 1;
    }
    trace.participating.push_back(engine.participating_count());
    trace.anchors.push_back(pa ? pa->anchor_count() : 0);
    trace.potential.push_back(engine.potential_value());
  }

  trace.final_profile = engine.profile();
  trace.frequency.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (window == 0) {
      trace.frequency[i] = trace.final_profile[i];
      continue;
    }
    long long time = occupied[i];
    if (trace.final_profile[i]) time += total - segment_from[i];
    trace.frequency[i] = static_cast<double>(time) / static_cast<double>(window);
  }
  return trace;
}

}  // namespace detail

SimTrace run(const Graph& g, const ResourceAssignment* labels, const GameSpec& spec,
             const SimConfig& config) {
  if (spec.variant == UtilityVariant::PaModulated)
    throw std::invalid_argument("PA-modulated runs require run_anchored");
  LllEngine engine(g, labels, spec, config);
  return detail::run_loop(engine, config, nullptr, nullptr, nullptr);
}

}  // namespace netgames
