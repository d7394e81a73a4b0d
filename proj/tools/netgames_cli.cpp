// Command-line front end: simulate | cores | anchors | stability | oracle.
// Exit codes: 0 success, 1 configuration error, 2 property-check failure.
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "netgames/experiment.hpp"

using namespace netgames;

int main(int argc, char** argv) {
  CLI::App app{"Network engagement game simulator and analysis toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  int workers = 0;
  std::uint64_t seed = 0;
  bool has_seed = false;

  auto add_common = [&](CLI::App* sub, bool with_config) {
    if (with_config)
      sub->add_option("--config", config_path, "experiment config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--workers", workers, "worker threads (0 = all cores)");
    sub->add_option("--seed", seed, "override the master seed")
        ->each([&](const std::string&) { has_seed = true; });
  };

  auto* simulate = app.add_subcommand("simulate", "replicated learning runs from a config");
  add_common(simulate, true);

  auto* anchors = app.add_subcommand("anchors", "principal-agent runs and budget sweeps");
  add_common(anchors, true);

  auto* cores = app.add_subcommand("cores", "cascading-withdrawal baselines");
  CoresArgs cores_args;
  cores->add_option("--generator", cores_args.generator, "erdos_renyi|line|ring|wheel|grid|file");
  cores->add_option("--graph-file", cores_args.graph_file, "edge-list path for generator=file");
  cores->add_option("--n", cores_args.n, "players");
  cores->add_option("--m", cores_args.m, "grid side length");
  cores->add_option("--p", cores_args.p, "edge probability");
  cores->add_option("--graph-seed", cores_args.seed, "graph seed");
  cores->add_option("--kind", cores_args.kind, "npg|nsg");
  cores->add_option("--k", cores_args.k, "participation threshold");
  cores->add_option("--r", cores_args.r, "total resources");
  cores->add_option("--s", cores_args.s, "resources per player");
  cores->add_option("--labels-seed", cores_args.labels_seed, "resource assignment seed");
  cores->add_option("--out", out_dir, "output directory");

  auto* stability = app.add_subcommand("stability", "thresholds plus simulation confirmation");
  StabilityArgs stability_args;
  stability->add_option("--topology", stability_args.topology, "ring|wheel|grid")->required();
  stability->add_option("--size", stability_args.size, "players (ring/wheel) or side (grid)")
      ->required();
  stability->add_option("--T", stability_args.temperature, "noise level");
  stability->add_option("--eps", stability_args.epsilon, "offset around the thresholds");
  stability->add_option("--alphas", stability_args.alphas, "extra payoff grid");
  stability->add_option("--runs", stability_args.runs, "runs per payoff value");
  stability->add_option("--iterations", stability_args.iterations, "revisions per run");
  stability->add_option("--window", stability_args.steady_window, "membership window");
  stability->add_option("--seed", stability_args.seed, "master seed");
  stability->add_option("--workers", stability_args.workers, "worker threads");
  stability->add_option("--out", out_dir, "output directory");

  auto* oracle = app.add_subcommand("oracle", "run the cross-check property suite");
  OracleArgs oracle_args;
  oracle->add_option("--max-n", oracle_args.max_players, "largest sampled instance");
  oracle->add_option("--exhaustive-n", oracle_args.exhaustive_players,
                     "largest exhaustively scanned size");
  oracle->add_option("--samples", oracle_args.samples, "random samples per property");
  oracle->add_option("--seed", oracle_args.seed, "master seed");
  oracle->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      cmd_simulate(KvConfig::parse_file(config_path), out_dir, workers, seed, has_seed);
    } else if (anchors->parsed()) {
      cmd_anchors(KvConfig::parse_file(config_path), out_dir, workers, seed, has_seed);
    } else if (cores->parsed()) {
      cmd_cores(cores_args, out_dir);
    } else if (stability->parsed()) {
      cmd_stability(stability_args, out_dir);
    } else if (oracle->parsed()) {
      if (!cmd_oracle(oracle_args, out_dir)) {
        std::cerr << "property checks failed\n";
        return 2;
      }
    }
  } catch (const ConfigError& error) {
    std::cerr << "config error: " << error.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& error) {
    std::cerr << "config error: " << error.what() << '\n';
    return 1;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 1;
  }
  return 0;
}
