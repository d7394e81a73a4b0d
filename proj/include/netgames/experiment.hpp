// Declarative experiment harness: sectioned key=value configs, seeded
// replication sweeps, CSV/JSON reporting.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "netgames/anchors.hpp"
#include "netgames/dynamics.hpp"

namespace netgames {

inline constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sectioned key=value text ('#' comments). Lookups are typed; consumers list
// the keys they understand per section and anything else is rejected.
class KvConfig {
 public:
  static KvConfig parse(std::istream& in);
  static KvConfig parse_string(const std::string& text);
  static KvConfig parse_file(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  long long get_int(const std::string& section, const std::string& key, long long fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(const std::string& section, const std::string& key) const;

  // Throws ConfigError when a section or key outside `allowed` appears.
  void require_known(const std::map<std::string, std::set<std::string>>& allowed) const;

  // Order-independent digest used in output provenance lines.
  std::uint64_t fingerprint() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
};

// Deterministic worker pool: fn(index) runs for every index in [0, count).
void parallel_for(long long count, int workers, const std::function<void(long long)>& fn);

struct SummaryStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
};
SummaryStats summarize(const std::vector<double>& values);

// Removes every registered path unless release() is called, so failed
// commands do not leave partial outputs behind.
class OutputGuard {
 public:
  ~OutputGuard();
  void track(const std::string& path);
  void release();

 private:
  std::vector<std::string> paths_;
  bool released_ = false;
};

// Command drivers backing the CLI; config errors raise ConfigError.
void cmd_simulate(const KvConfig& cfg, const std::string& out_dir, int workers,
                  std::uint64_t seed_override = 0, bool has_seed_override = false);
void cmd_anchors(const KvConfig& cfg, const std::string& out_dir, int workers,
                 std::uint64_t seed_override = 0, bool has_seed_override = false);

struct CoresArgs {
  std::string generator = "erdos_renyi";  // or line/ring/wheel/grid/file
  std::string graph_file;
  int n = 1000;
  int m = 5;
  double p = 0.01;
  std::uint64_t seed = 1;
  std::string kind = "npg";  // npg -> k-core, nsg -> coverage core
  int k = 2;
  int r = 0, s = 0;
  std::uint64_t labels_seed = 1;
};
void cmd_cores(const CoresArgs& args, const std::string& out_dir);

struct StabilityArgs {
  std::string topology = "ring";  // ring | wheel | grid
  int size = 6;                   // players for ring/wheel, side length for grid
  double temperature = 0.1;
  double epsilon = 0.1;
  std::vector<double> alphas;  // extra grid beyond threshold +/- epsilon
  int runs = 100;
  long long iterations = 300000;
  long long steady_window = 30000;
  double steady_threshold = 0.95;
  std::uint64_t seed = 1;
  int workers = 0;
};
void cmd_stability(const StabilityArgs& args, const std::string& out_dir);

struct OracleArgs {
  int max_players = 8;          // cap for sampled instances
  int exhaustive_players = 5;   // cap for the exhaustive path scan
  long long samples = 10000;
  std::uint64_t seed = 1;
};
// Returns true when every property holds; failures are reported with a
// counterexample dump.
bool cmd_oracle(const OracleArgs& args, const std::string& out_dir);

// CSV helpers shared by commands and tests.
std::string trace_csv(const SimTrace& trace, long long stride, const std::string& provenance);
std::string membership_csv(const SimTrace& trace, double threshold,
                           const std::string& provenance);
std::string cascade_csv(const std::vector<int>& remaining_per_round,
                        const std::string& provenance);
std::string anchor_events_csv(const AnchorTrace& trace, const std::string& provenance);

}  // namespace netgames
