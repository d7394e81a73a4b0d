#include "netgames/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "netgames/cores.hpp"
#include "netgames/oracle.hpp"
#include "netgames/stability.hpp"

namespace netgames {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

std::string fmt(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

std::uint64_t fnv1a(const std::string& text, std::uint64_t hash = 0xCBF29CE484222325ULL) {
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buffer[24];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(value));
  return buffer;
}

void write_file(OutputGuard& guard, const std::string& path, const std::string& body) {
  guard.track(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << body;
}

}  // namespace

KvConfig KvConfig::parse(std::istream& in) {
  KvConfig cfg;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("config line " + std::to_string(line_no) + ": empty section name");
      cfg.data_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": key outside any section");
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (!cfg.data_[section].emplace(key, value).second)
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key +
                        "'");
  }
  return cfg;
}

KvConfig KvConfig::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

KvConfig KvConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  return parse(in);
}

bool KvConfig::has(const std::string& section, const std::string& key) const {
  const auto sec = data_.find(section);
  return sec != data_.end() && sec->second.count(key) > 0;
}

std::string KvConfig::get(const std::string& section, const std::string& key) const {
  if (!has(section, key))
    throw ConfigError("missing config key [" + section + "] " + key);
  return data_.at(section).at(key);
}

std::string KvConfig::get_or(const std::string& section, const std::string& key,
                             const std::string& fallback) const {
  return has(section, key) ? data_.at(section).at(key) : fallback;
}

long long KvConfig::get_int(const std::string& section, const std::string& key,
                            long long fallback) const {
  if (!has(section, key)) return fallback;
  try {
    return std::stoll(get(section, key));
  } catch (const std::exception&) {
    throw ConfigError("config key [" + section + "] " + key + " is not an integer");
  }
}

double KvConfig::get_double(const std::string& section, const std::string& key,
                            double fallback) const {
  if (!has(section, key)) return fallback;
  try {
    return std::stod(get(section, key));
  } catch (const std::exception&) {
    throw ConfigError("config key [" + section + "] " + key + " is not a number");
  }
}

std::uint64_t KvConfig::get_u64(const std::string& section, const std::string& key,
                                std::uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  try {
    return std::stoull(get(section, key));
  } catch (const std::exception&) {
    throw ConfigError("config key [" + section + "] " + key + " is not an unsigned integer");
  }
}

bool KvConfig::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string value = get(section, key);
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key [" + section + "] " + key + " is not a boolean");
}

std::vector<std::string> KvConfig::get_list(const std::string& section,
                                            const std::string& key) const {
  std::vector<std::string> items;
  std::string value = get(section, key);
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const std::string item =
        trim(comma == std::string::npos ? value.substr(start) : value.substr(start, comma - start));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (items.empty()) throw ConfigError("config key [" + section + "] " + key + " is empty");
  return items;
}

void KvConfig::require_known(const std::map<std::string, std::set<std::string>>& allowed) const {
  for (const auto& [section, entries] : data_) {
    const auto sec = allowed.find(section);
    if (sec == allowed.end()) throw ConfigError("unknown config section [" + section + "]");
    for (const auto& [key, value] : entries)
      if (!sec->second.count(key))
        throw ConfigError("unknown config key [" + section + "] " + key);
  }
}

std::uint64_t KvConfig::fingerprint() const {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (const auto& [section, entries] : data_) {
    hash = fnv1a(section + "\n", hash);
    for (const auto& [key, value] : entries) hash = fnv1a(key + "=" + value + "\n", hash);
  }
  return hash;
}

void parallel_for(long long count, int workers, const std::function<void(long long)>& fn) {
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = static_cast<int>(std::min<long long>(workers, count));
  if (workers <= 1) {
    for (long long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const long long index = next.fetch_add(1);
        if (index >= count) return;
        try {
          fn(index);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& worker : pool) worker.join();
  if (failure) std::rethrow_exception(failure);
}

SummaryStats summarize(const std::vector<double>& values) {
  SummaryStats stats;
  if (values.empty()) return stats;
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = sum / values.size();
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - stats.mean) * (v - stats.mean);
    stats.stddev = std::sqrt(ss / (values.size() - 1));
  }
  return stats;
}

OutputGuard::~OutputGuard() {
  if (released_) return;
  for (const auto& path : paths_) {
    std::error_code ec;
    fs::remove(path, ec);
  }
}

void OutputGuard::track(const std::string& path) { paths_.push_back(path); }

void OutputGuard::release() { released_ = true; }

std::string trace_csv(const SimTrace& trace, long long stride, const std::string& provenance) {
  if (stride < 1) stride = 1;
  std::ostringstream out;
  out << provenance;
  out << "iteration,n_participating,n_anchors,potential\n";
  const long long last = static_cast<long long>(trace.participating.size()) - 1;
  for (long long t = 0; t <= last; t += stride) {
    out << t << ',' << trace.participating[t] << ',' << trace.anchors[t] << ','
        << fmt(trace.potential[t]) << '\n';
  }
  if (last >= 0 && last % stride != 0) {
    out << last << ',' << trace.participating[last] << ',' << trace.anchors[last] << ','
        << fmt(trace.potential[last]) << '\n';
  }
  return out.str();
}

std::string membership_csv(const SimTrace& trace, double threshold,
                           const std::string& provenance) {
  std::ostringstream out;
  out << provenance;
  out << "player,frequency,member\n";
  for (std::size_t i = 0; i < trace.frequency.size(); ++i)
    out << i << ',' << fmt(trace.frequency[i]) << ','
        << (trace.frequency[i] > threshold ? 1 : 0) << '\n';
  return out.str();
}

std::string cascade_csv(const std::vector<int>& remaining_per_round,
                        const std::string& provenance) {
  std::ostringstream out;
  out << provenance;
  out << "round,remaining_count\n";
  for (std::size_t round = 0; round < remaining_per_round.size(); ++round)
    out << round << ',' << remaining_per_round[round] << '\n';
  return out.str();
}

std::string anchor_events_csv(const AnchorTrace& trace, const std::string& provenance) {
  std::ostringstream out;
  out << provenance;
  out << "iteration,n_anchors,event,player,impact\n";
  for (const auto& event : trace.events) {
    const char* kind = "grant";
    switch (event.kind) {
      case AnchorEventKind::Grant: kind = "grant"; break;
      case AnchorEventKind::Revoke: kind = "revoke"; break;
      case AnchorEventKind::Replace: kind = "replace"; break;
      case AnchorEventKind::Graduate: kind = "graduate"; break;
    }
    out << event.iter << ',' << event.anchors_after << ',' << kind << ',' << event.player << ','
        << fmt(event.impact) << '\n';
  }
  return out.str();
}

namespace {

struct GraphPlan {
  std::string generator = "erdos_renyi";
  int n = 0;
  int m = 0;
  double p = 0.0;
  std::string path;

  static GraphPlan from_config(const KvConfig& cfg) {
    GraphPlan plan;
    plan.generator = cfg.get_or("graph", "generator", "erdos_renyi");
    plan.n = static_cast<int>(cfg.get_int("graph", "n", 0));
    plan.m = static_cast<int>(cfg.get_int("graph", "m", 0));
    plan.p = cfg.get_double("graph", "p", 0.0);
    plan.path = cfg.get_or("graph", "path", "");
    plan.check();
    return plan;
  }

  void check() const {
    if (generator == "erdos_renyi") {
      if (n < 1) throw ConfigError("[graph] n must be >= 1");
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("[graph] p must lie in [0,1]");
    } else if (generator == "line" || generator == "ring" || generator == "wheel") {
      if (n < 2) throw ConfigError("[graph] n must be >= 2");
    } else if (generator == "grid") {
      if (m < 2) throw ConfigError("[graph] m must be >= 2");
    } else if (generator == "file") {
      if (path.empty()) throw ConfigError("[graph] path required for generator=file");
    } else {
      throw ConfigError("[graph] unknown generator '" + generator + "'");
    }
  }

  int players() const {
    if (generator == "grid") return m * m;
    if (generator == "file") return -1;  // known after loading
    return n;
  }

  Graph build(std::uint64_t seed) const {
    if (generator == "erdos_renyi") return gen_erdos_renyi(n, p, seed);
    if (generator == "line") return gen_line(n);
    if (generator == "ring") return gen_ring(n);
    if (generator == "wheel") return gen_wheel(n);
    if (generator == "grid") return gen_grid(m);
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read graph file: " + path);
    return read_edge_list(in);
  }
};

struct SweepPoint {
  int k = 0;
  int r = 0;
  int s = 0;
  std::string tag;
};

int parse_int_item(const std::string& item, const char* what) {
  try {
    return std::stoi(item);
  } catch (const std::exception&) {
    throw ConfigError(std::string(what) + ": '" + item + "' is not an integer");
  }
}

std::vector<SweepPoint> sweep_points(const KvConfig& cfg, GameKind kind) {
  std::vector<SweepPoint> points;
  if (kind == GameKind::Npg) {
    for (const auto& item : cfg.get_list("game", "k")) {
      SweepPoint point;
      point.k = parse_int_item(item, "[game] k");
      point.tag = "k" + item;
      points.push_back(point);
    }
  } else {
    for (const auto& item : cfg.get_list("game", "rs")) {
      const auto colon = item.find(':');
      if (colon == std::string::npos)
        throw ConfigError("[game] rs entries must look like R:S, got '" + item + "'");
      SweepPoint point;
      point.r = parse_int_item(item.substr(0, colon), "[game] rs");
      point.s = parse_int_item(item.substr(colon + 1), "[game] rs");
      point.tag = "rs" + std::to_string(point.r) + "_" + std::to_string(point.s);
      points.push_back(point);
    }
  }
  return points;
}

GameKind parse_kind(const std::string& text) {
  if (text == "npg") return GameKind::Npg;
  if (text == "nsg") return GameKind::Nsg;
  throw ConfigError("[game] kind must be npg or nsg");
}

UtilityVariant parse_variant(const std::string& text) {
  if (text == "base") return UtilityVariant::Base;
  if (text == "global_mcu") return UtilityVariant::GlobalMcu;
  if (text == "pa_modulated") return UtilityVariant::PaModulated;
  throw ConfigError("[game] variant must be base, global_mcu or pa_modulated");
}

InitialCondition parse_initial(const std::string& text) {
  if (text == "all_zero") return InitialCondition::AllZero;
  if (text == "all_one") return InitialCondition::AllOne;
  if (text == "random") return InitialCondition::RandomHalf;
  if (text == "explicit") return InitialCondition::Explicit;
  throw ConfigError("[dynamics] initial must be all_zero, all_one, random or explicit");
}

SimConfig dynamics_from_config(const KvConfig& cfg) {
  SimConfig config;
  config.temperature = cfg.get_double("dynamics", "temperature", 0.3);
  config.iterations = cfg.get_int("dynamics", "iterations", 200000);
  config.steady_window = cfg.get_int("dynamics", "steady_window", 30000);
  config.steady_threshold = cfg.get_double("dynamics", "steady_threshold", 0.95);
  config.init = parse_initial(cfg.get_or("dynamics", "initial", "all_zero"));
  if (config.init == InitialCondition::Explicit) {
    for (const auto& item : cfg.get_list("dynamics", "explicit"))
      config.explicit_init.push_back(
          static_cast<std::uint8_t>(parse_int_item(item, "[dynamics] explicit")));
  }
  return config;
}

PaConfig pa_from_config(const KvConfig& cfg, const std::string& budget_text) {
  PaConfig pa;
  if (budget_text == "unlimited") {
    pa.budget = -1;
  } else {
    try {
      pa.budget = std::stoll(budget_text);
    } catch (const std::exception&) {
      throw ConfigError("[pa] budget entries must be integers or 'unlimited'");
    }
  }
  pa.t_u = cfg.get_int("pa", "t_u", 100);
  pa.t_th = cfg.get_int("pa", "t_th", 1000);
  const std::string unit = cfg.get_or("pa", "tenure_unit", "iterations");
  if (unit == "iterations")
    pa.tenure_unit = TenureUnit::Iterations;
  else if (unit == "periods")
    pa.tenure_unit = TenureUnit::Periods;
  else
    throw ConfigError("[pa] tenure_unit must be iterations or periods");
  pa.validate();
  return pa;
}

std::string provenance_line(std::uint64_t fingerprint, std::uint64_t master_seed) {
  std::ostringstream out;
  out << "# netgames " << kVersion << " config_fnv=" << hex64(fingerprint)
      << " master_seed=" << master_seed << '\n';
  return out.str();
}

std::string rep_comment(long long rep, std::uint64_t graph_seed, std::uint64_t labels_seed,
                        std::uint64_t chain_seed) {
  std::ostringstream out;
  out << "# rep=" << rep << " graph_seed=" << graph_seed << " labels_seed=" << labels_seed
      << " chain_seed=" << chain_seed << '\n';
  return out.str();
}

double tail_mean(const std::vector<int>& series, long long window) {
  if (series.empty()) return 0.0;
  const long long count = std::min<long long>(window > 0 ? window : 1,
                                              static_cast<long long>(series.size()));
  double sum = 0.0;
  for (long long t = static_cast<long long>(series.size()) - count;
       t < static_cast<long long>(series.size()); ++t)
    sum += series[t];
  return sum / count;
}

double smoothed_peak(const std::vector<int>& series, long long window) {
  if (series.empty()) return 0.0;
  if (window < 1) window = 1;
  double best = 0.0;
  long long sum = 0;
  for (long long t = 0; t < static_cast<long long>(series.size()); ++t) {
    sum += series[t];
    if (t >= window) sum -= series[t - window];
    const long long seen = std::min(t + 1, window);
    best = std::max(best, static_cast<double>(sum) / seen);
  }
  return best;
}

}  // namespace

void cmd_simulate(const KvConfig& cfg, const std::string& out_dir, int workers,
                  std::uint64_t seed_override, bool has_seed_override) {
  cfg.require_known({
      {"graph", {"generator", "n", "m", "p", "path"}},
      {"game", {"kind", "variant", "alpha", "k", "rs"}},
      {"dynamics",
       {"temperature", "iterations", "steady_window", "steady_threshold", "initial", "explicit",
        "trace_stride"}},
      {"run", {"replications", "master_seed"}},
  });
  const GraphPlan plan = GraphPlan::from_config(cfg);
  const GameKind kind = parse_kind(cfg.get_or("game", "kind", "npg"));
  const UtilityVariant variant = parse_variant(cfg.get_or("game", "variant", "base"));
  if (variant == UtilityVariant::PaModulated)
    throw ConfigError("simulate runs base/global_mcu games; use the anchors command");
  const double alpha = cfg.get_double("game", "alpha", 1.0);
  const auto points = sweep_points(cfg, kind);
  const SimConfig dyn = dynamics_from_config(cfg);
  const long long reps = cfg.get_int("run", "replications", 1);
  if (reps < 1) throw ConfigError("[run] replications must be >= 1");
  const std::uint64_t master =
      has_seed_override ? seed_override : cfg.get_u64("run", "master_seed", 1);
  const long long stride = cfg.get_int("dynamics", "trace_stride", 100);

  // Validate every sweep point and the dynamics before any run starts.
  for (const auto& point : points) {
    GameSpec spec{kind, variant, point.k, point.r, point.s, alpha};
    spec.validate();
  }
  if (plan.players() > 0) dyn.validate(plan.players());

  fs::create_directories(out_dir);
  OutputGuard guard;
  const std::string provenance = provenance_line(cfg.fingerprint(), master);

  std::ostringstream summary;
  summary << provenance;
  summary << "param,replications,mean_members,std_members,mean_final_participating,"
             "core_mean,core_std\n";

  for (const auto& point : points) {
    GameSpec spec{kind, variant, point.k, point.r, point.s, alpha};
    std::vector<double> members(reps), finals(reps), core_sizes(reps);
    std::vector<std::string> trace_bodies(reps), member_bodies(reps);

    parallel_for(reps, workers, [&](long long rep) {
      const std::uint64_t graph_seed = derive_seed(master, rep, 0);
      const std::uint64_t labels_seed = derive_seed(master, rep, 1);
      const std::uint64_t chain_seed = derive_seed(master, rep, 2);
      const Graph g = plan.build(graph_seed);
      ResourceAssignment labels;
      const ResourceAssignment* labels_ptr = nullptr;
      if (kind == GameKind::Nsg) {
        labels = assign_resources(g, point.r, point.s, labels_seed);
        labels_ptr = &labels;
      }
      SimConfig config = dyn;
      config.seed = chain_seed;
      const SimTrace trace = run(g, labels_ptr, spec, config);
      const auto member_flags = classify_steady_state(trace, config.steady_threshold);
      long long count = 0;
      for (auto flag : member_flags) count += flag;
      members[rep] = static_cast<double>(count);
      finals[rep] = trace.participating.back();
      core_sizes[rep] = kind == GameKind::Npg ? k_core(g, point.k).size()
                                              : rs_core(g, labels, point.r).size();
      const std::string comment = rep_comment(rep, graph_seed, labels_seed, chain_seed);
      trace_bodies[rep] = trace_csv(trace, stride, provenance + comment);
      member_bodies[rep] = membership_csv(trace, config.steady_threshold, provenance + comment);
    });

    for (long long rep = 0; rep < reps; ++rep) {
      const std::string stem = point.tag + "_rep" + std::to_string(rep);
      write_file(guard, (fs::path(out_dir) / ("trace_" + stem + ".csv")).string(),
                 trace_bodies[rep]);
      write_file(guard, (fs::path(out_dir) / ("membership_" + stem + ".csv")).string(),
                 member_bodies[rep]);
    }
    const auto member_stats = summarize(members);
    const auto core_stats = summarize(core_sizes);
    const auto final_stats = summarize(finals);
    summary << point.tag << ',' << reps << ',' << fmt(member_stats.mean) << ','
            << fmt(member_stats.stddev) << ',' << fmt(final_stats.mean) << ','
            << fmt(core_stats.mean) << ',' << fmt(core_stats.stddev) << '\n';
  }
  write_file(guard, (fs::path(out_dir) / "summary.csv").string(), summary.str());
  guard.release();
}

void cmd_anchors(const KvConfig& cfg, const std::string& out_dir, int workers,
                 std::uint64_t seed_override, bool has_seed_override) {
  cfg.require_known({
      {"graph", {"generator", "n", "m", "p", "path"}},
      {"game", {"kind", "variant", "alpha", "k", "rs"}},
      {"dynamics",
       {"temperature", "iterations", "steady_window", "steady_threshold", "initial", "explicit",
        "trace_stride"}},
      {"pa", {"budget", "t_u", "t_th", "tenure_unit", "greedy", "failure_iteration",
              "failure_count"}},
      {"run", {"replications", "master_seed"}},
  });
  const GraphPlan plan = GraphPlan::from_config(cfg);
  const GameKind kind = parse_kind(cfg.get_or("game", "kind", "npg"));
  const double alpha = cfg.get_double("game", "alpha", 1.0);
  const auto points = sweep_points(cfg, kind);
  if (points.size() != 1)
    throw ConfigError("anchors sweeps budgets, not game parameters; give one k or rs value");
  const SweepPoint point = points.front();
  const SimConfig dyn = dynamics_from_config(cfg);
  const long long reps = cfg.get_int("run", "replications", 1);
  if (reps < 1) throw ConfigError("[run] replications must be >= 1");
  const std::uint64_t master =
      has_seed_override ? seed_override : cfg.get_u64("run", "master_seed", 1);
  const long long stride = cfg.get_int("dynamics", "trace_stride", 100);
  const bool run_greedy = cfg.get_bool("pa", "greedy", false);
  const long long failure_iter = cfg.get_int("pa", "failure_iteration", -1);
  const long long failure_count = cfg.get_int("pa", "failure_count", 0);

  GameSpec spec{kind, UtilityVariant::PaModulated, point.k, point.r, point.s, alpha};
  spec.validate();
  if (plan.players() > 0) dyn.validate(plan.players());

  std::vector<std::string> budgets = cfg.get_list("pa", "budget");
  for (const auto& budget_text : budgets) pa_from_config(cfg, budget_text);  // validate

  fs::create_directories(out_dir);
  OutputGuard guard;
  const std::string provenance = provenance_line(cfg.fingerprint(), master);

  std::ostringstream summary;
  summary << provenance;
  summary << "budget,replications,mean_members,std_members,mean_steady_anchors,"
             "std_steady_anchors,mean_peak_anchors,audit_violations\n";
  std::ostringstream sweep;
  sweep << provenance;
  sweep << "budget,steady_network_size,method\n";

  for (const auto& budget_text : budgets) {
    PaConfig pa = pa_from_config(cfg, budget_text);
    pa.failure_iteration = failure_iter;
    pa.failure_count = failure_count;

    std::vector<double> members(reps), steady_anchors(reps), peak_anchors(reps);
    std::vector<long long> violations(reps, 0);
    std::vector<std::string> trace_bodies(reps), event_bodies(reps), member_bodies(reps);

    parallel_for(reps, workers, [&](long long rep) {
      const std::uint64_t graph_seed = derive_seed(master, rep, 0);
      const std::uint64_t labels_seed = derive_seed(master, rep, 1);
      const std::uint64_t chain_seed = derive_seed(master, rep, 2);
      const Graph g = plan.build(graph_seed);
      ResourceAssignment labels;
      const ResourceAssignment* labels_ptr = nullptr;
      if (kind == GameKind::Nsg) {
        labels = assign_resources(g, point.r, point.s, labels_seed);
        labels_ptr = &labels;
      }
      SimConfig config = dyn;
      config.seed = chain_seed;
      PaConfig pa_rep = pa;
      pa_rep.failure_seed = derive_seed(master, rep, 3);
      const AnchoredRun result = run_anchored(g, labels_ptr, spec, config, pa_rep);
      const auto member_flags = classify_steady_state(result.trace, config.steady_threshold);
      long long count = 0;
      for (auto flag : member_flags) count += flag;
      members[rep] = static_cast<double>(count);
      steady_anchors[rep] = tail_mean(result.trace.anchors, config.steady_window);
      peak_anchors[rep] = smoothed_peak(result.trace.anchors, 1000);
      violations[rep] = result.audit.budget_violations + result.audit.bijection_violations +
                        result.audit.grant_condition_violations +
                        result.audit.eviction_order_violations;
      const std::string comment = rep_comment(rep, graph_seed, labels_seed, chain_seed);
      trace_bodies[rep] = trace_csv(result.trace, stride, provenance + comment);
      event_bodies[rep] = anchor_events_csv(result.anchors, provenance + comment);
      member_bodies[rep] =
          membership_csv(result.trace, config.steady_threshold, provenance + comment);
    });

    const std::string tag = point.tag + "_b" + budget_text;
    for (long long rep = 0; rep < reps; ++rep) {
      const std::string stem = tag + "_rep" + std::to_string(rep);
      write_file(guard, (fs::path(out_dir) / ("trace_" + stem + ".csv")).string(),
                 trace_bodies[rep]);
      write_file(guard, (fs::path(out_dir) / ("anchors_" + stem + ".csv")).string(),
                 event_bodies[rep]);
      write_file(guard, (fs::path(out_dir) / ("membership_" + stem + ".csv")).string(),
                 member_bodies[rep]);
    }
    long long total_violations = 0;
    for (long long v : violations) total_violations += v;
    const auto member_stats = summarize(members);
    const auto anchor_stats = summarize(steady_anchors);
    const auto peak_stats = summarize(peak_anchors);
    summary << budget_text << ',' << reps << ',' << fmt(member_stats.mean) << ','
            << fmt(member_stats.stddev) << ',' << fmt(anchor_stats.mean) << ','
            << fmt(anchor_stats.stddev) << ',' << fmt(peak_stats.mean) << ','
            << total_violations << '\n';
    sweep << budget_text << ',' << fmt(member_stats.mean) << ",pa\n";

    if (run_greedy && budget_text != "unlimited") {
      std::vector<double> greedy_sizes(reps);
      parallel_for(reps, workers, [&](long long rep) {
        const Graph g = plan.build(derive_seed(master, rep, 0));
        ResourceAssignment labels;
        const ResourceAssignment* labels_ptr = nullptr;
        if (kind == GameKind::Nsg) {
          labels = assign_resources(g, point.r, point.s, derive_seed(master, rep, 1));
          labels_ptr = &labels;
        }
        GameSpec base = spec;
        base.variant = UtilityVariant::Base;
        greedy_sizes[rep] =
            greedy_anchored_core(g, labels_ptr, base, std::stoi(budget_text)).core_sizes.back();
      });
      sweep << budget_text << ',' << fmt(summarize(greedy_sizes).mean) << ",greedy\n";
    }
  }
  write_file(guard, (fs::path(out_dir) / "summary.csv").string(), summary.str());
  write_file(guard, (fs::path(out_dir) / "budget_sweep.csv").string(), sweep.str());
  guard.release();
}

void cmd_cores(const CoresArgs& args, const std::string& out_dir) {
  GraphPlan plan;
  plan.generator = args.generator;
  plan.n = args.n;
  plan.m = args.m;
  plan.p = args.p;
  plan.path = args.graph_file;
  plan.check();
  const Graph g = plan.build(args.seed);

  CoreResult result;
  std::string tag;
  if (args.kind == "npg") {
    result = k_core(g, args.k);
    tag = "k" + std::to_string(args.k);
  } else if (args.kind == "nsg") {
    const ResourceAssignment labels = assign_resources(g, args.r, args.s, args.labels_seed);
    result = rs_core(g, labels, args.r);
    tag = "rs" + std::to_string(args.r) + "_" + std::to_string(args.s);
  } else {
    throw ConfigError("cores: kind must be npg or nsg");
  }

  std::ostringstream meta;
  meta << args.generator << ' ' << args.n << ' ' << args.m << ' ' << args.p << ' ' << args.seed
       << ' ' << tag;
  const std::string provenance = provenance_line(fnv1a(meta.str()), args.seed);

  fs::create_directories(out_dir);
  OutputGuard guard;
  write_file(guard, (fs::path(out_dir) / ("cascade_" + tag + ".csv")).string(),
             cascade_csv(result.remaining_per_round, provenance));
  guard.release();
  std::cout << "core size " << result.size() << " after "
            << result.removed_per_round.size() << " rounds\n";
}

void cmd_stability(const StabilityArgs& args, const std::string& out_dir) {
  AlphaThresholdReport thresholds;
  Graph g;
  if (args.topology == "ring") {
    thresholds = alpha_thresholds_ring(args.size);
    g = gen_ring(args.size);
  } else if (args.topology == "wheel") {
    thresholds = alpha_thresholds_wheel(args.size);
    g = gen_wheel(args.size);
  } else if (args.topology == "grid") {
    thresholds = alpha_thresholds_grid(args.size);
    g = gen_grid(args.size);
  } else {
    throw ConfigError("stability: topology must be ring, wheel or grid");
  }

  std::vector<std::pair<std::string, double>> grid;
  grid.emplace_back("above_upper", thresholds.alpha_upper + args.epsilon);
  grid.emplace_back("below_lower", thresholds.alpha_lower - args.epsilon);
  for (double a : args.alphas) grid.emplace_back("value", a);

  std::ostringstream meta;
  meta << args.topology << ' ' << args.size << ' ' << args.temperature << ' ' << args.epsilon
       << ' ' << args.runs << ' ' << args.iterations;
  const std::string provenance = provenance_line(fnv1a(meta.str()), args.seed);

  std::ostringstream verdicts;
  verdicts << provenance;
  verdicts << "topology,size,alpha,alpha_kind,runs,full_runs,empty_runs,mean_members,"
              "mean_occupancy,mean_final_participating,alpha_upper,alpha_lower\n";

  for (const auto& [label, alpha] : grid) {
    if (!(alpha > 0)) throw ConfigError("stability: alpha grid left the positive range");
    GameSpec spec{GameKind::Npg, UtilityVariant::Base, 2, 0, 0, alpha};
    std::vector<double> members(args.runs), finals(args.runs), occupancy(args.runs);
    std::vector<int> full(args.runs, 0), empty(args.runs, 0);
    parallel_for(args.runs, args.workers, [&](long long run_index) {
      SimConfig config;
      config.temperature = args.temperature;
      config.iterations = args.iterations;
      config.steady_window = std::min(args.steady_window, args.iterations);
      config.steady_threshold = args.steady_threshold;
      config.init = InitialCondition::AllZero;
      config.seed = derive_seed(args.seed, run_index, fnv1a(label) ^ fnv1a(fmt(alpha)));
      const SimTrace trace = run(g, nullptr, spec, config);
      const auto member_flags = classify_steady_state(trace, config.steady_threshold);
      long long count = 0;
      for (auto flag : member_flags) count += flag;
      members[run_index] = static_cast<double>(count);
      finals[run_index] = trace.participating.back();
      // A run's outcome is judged by where the chain settles: the mean
      // participation over the trailing window.
      double tail = 0.0;
      const long long window = std::max<long long>(1, config.steady_window);
      for (long long t = static_cast<long long>(trace.participating.size()) - window;
           t < static_cast<long long>(trace.participating.size()); ++t)
        tail += trace.participating[t];
      tail /= window;
      occupancy[run_index] = tail;
      full[run_index] = tail >= 0.95 * g.n;
      empty[run_index] = tail <= 0.05 * g.n;
    });
    int full_runs = 0, empty_runs = 0;
    for (int f : full) full_runs += f;
    for (int e : empty) empty_runs += e;
    verdicts << args.topology << ',' << args.size << ',' << fmt(alpha) << ',' << label << ','
             << args.runs << ',' << full_runs << ',' << empty_runs << ','
             << fmt(summarize(members).mean) << ',' << fmt(summarize(occupancy).mean) << ','
             << fmt(summarize(finals).mean) << ',' << fmt(thresholds.alpha_upper) << ','
             << fmt(thresholds.alpha_lower) << '\n';
  }

  fs::create_directories(out_dir);
  OutputGuard guard;
  write_file(guard, (fs::path(out_dir) / "stability_verdicts.csv").string(), verdicts.str());

  // Brute-force certificate report for enumerable sizes.
  if (g.n <= kMaxPathPlayers) {
    GameSpec spec{GameKind::Npg, UtilityVariant::Base, 2, 0, 0,
                  thresholds.alpha_upper + args.epsilon};
    const auto report = rd_cr_report(g, nullptr, spec);
    write_file(guard, (fs::path(out_dir) / "rdcr_report.json").string(),
               rd_cr_report_json(report) + "\n");
  }
  guard.release();
}

bool cmd_oracle(const OracleArgs& args, const std::string& out_dir) {
  struct Entry {
    std::string name;
    oracle::CheckResult result;
  };
  std::vector<Entry> entries;
  entries.push_back({"exact_potential_npg",
                     oracle::exact_potential(GameKind::Npg, args.max_players, args.samples,
                                             derive_seed(args.seed, 0, 10), 1e-9)});
  entries.push_back({"exact_potential_nsg",
                     oracle::exact_potential(GameKind::Nsg, args.max_players, args.samples,
                                             derive_seed(args.seed, 0, 11), 1e-9)});
  entries.push_back(
      {"br_acyclicity", oracle::br_acyclicity(args.exhaustive_players, {1, 2, 3})});
  entries.push_back({"nash_closed_form",
                     oracle::nash_closed_form_agreement(args.max_players, args.samples,
                                                        derive_seed(args.seed, 0, 12))});
  entries.push_back({"chain_validity",
                     oracle::chain_validity(20000, derive_seed(args.seed, 0, 13))});
  entries.push_back({"stationary_consistency",
                     oracle::stationary_consistency(6, 0.8, 4000000, 0.02,
                                                    derive_seed(args.seed, 0, 14))});

  std::ostringstream report;
  bool all_pass = true;
  for (const auto& entry : entries) {
    report << (entry.result.pass ? "PASS" : "FAIL") << ' ' << entry.name << ": "
           << entry.result.detail << '\n';
    all_pass = all_pass && entry.result.pass;
  }
  std::cout << report.str();
  fs::create_directories(out_dir);
  OutputGuard guard;
  write_file(guard, (fs::path(out_dir) / "oracle_report.txt").string(), report.str());
  guard.release();
  return all_pass;
}

}  // namespace netgames
