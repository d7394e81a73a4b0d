// Python bindings for the main operations: graph generation, game utilities,
// learning runs, core decompositions, anchor protocols and stability reports.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "netgames/anchors.hpp"
#include "netgames/cores.hpp"
#include "netgames/dynamics.hpp"
#include "netgames/experiment.hpp"
#include "netgames/stability.hpp"

namespace py = pybind11;
using namespace netgames;

namespace {

const ResourceAssignment* opt_labels(const std::optional<ResourceAssignment>& labels) {
  return labels ? &*labels : nullptr;
}

}  // namespace

PYBIND11_MODULE(netgames, m) {
  m.doc() = "Network engagement games: log-linear learning, cores, anchors, stability";
  m.attr("__version__") = kVersion;

  py::enum_<GameKind>(m, "GameKind")
      .value("NPG", GameKind::Npg)
      .value("NSG", GameKind::Nsg);
  py::enum_<UtilityVariant>(m, "UtilityVariant")
      .value("BASE", UtilityVariant::Base)
      .value("GLOBAL_MCU", UtilityVariant::GlobalMcu)
      .value("PA_MODULATED", UtilityVariant::PaModulated);
  py::enum_<InitialCondition>(m, "InitialCondition")
      .value("ALL_ZERO", InitialCondition::AllZero)
      .value("ALL_ONE", InitialCondition::AllOne)
      .value("RANDOM_HALF", InitialCondition::RandomHalf)
      .value("EXPLICIT", InitialCondition::Explicit);
  py::enum_<TenureUnit>(m, "TenureUnit")
      .value("ITERATIONS", TenureUnit::Iterations)
      .value("PERIODS", TenureUnit::Periods);

  py::class_<Graph>(m, "Graph")
      .def_readonly("n", &Graph::n)
      .def_readonly("adjacency", &Graph::adj)
      .def("degree", &Graph::degree)
      .def("has_edge", &Graph::has_edge)
      .def("edge_count", &Graph::edge_count);

  m.def("gen_erdos_renyi", &gen_erdos_renyi, py::arg("n"), py::arg("p"), py::arg("seed"));
  m.def("gen_line", &gen_line, py::arg("n"));
  m.def("gen_ring", &gen_ring, py::arg("n"));
  m.def("gen_wheel", &gen_wheel, py::arg("n"));
  m.def("gen_grid", &gen_grid, py::arg("m"));
  m.def("graph_from_edges", &graph_from_edges, py::arg("n"), py::arg("edges"));

  py::class_<ResourceAssignment>(m, "ResourceAssignment")
      .def(py::init<>())
      .def_readwrite("r", &ResourceAssignment::r)
      .def_readwrite("s", &ResourceAssignment::s)
      .def_readwrite("labels", &ResourceAssignment::labels);
  m.def("assign_resources", &assign_resources, py::arg("graph"), py::arg("r"), py::arg("s"),
        py::arg("seed"));

  py::class_<GameSpec>(m, "GameSpec")
      .def(py::init<>())
      .def_readwrite("kind", &GameSpec::kind)
      .def_readwrite("variant", &GameSpec::variant)
      .def_readwrite("k", &GameSpec::k)
      .def_readwrite("r", &GameSpec::r)
      .def_readwrite("s", &GameSpec::s)
      .def_readwrite("alpha", &GameSpec::alpha)
      .def("validate", &GameSpec::validate);

  m.def("participating_neighbors", &participating_neighbors);
  m.def("accessible_resources", &accessible_resources);
  m.def(
      "utility",
      [](const Graph& g, const std::optional<ResourceAssignment>& labels, const GameSpec& spec,
         const ActionProfile& sigma, int i, int anchor_flag) {
        return utility(g, opt_labels(labels), spec, sigma, i, anchor_flag);
      },
      py::arg("graph"), py::arg("labels"), py::arg("spec"), py::arg("sigma"), py::arg("i"),
      py::arg("anchor_flag") = 0);
  m.def(
      "impact",
      [](const Graph& g, const std::optional<ResourceAssignment>& labels, const GameSpec& spec,
         const ActionProfile& sigma, int i) {
        return impact(g, opt_labels(labels), spec, sigma, i);
      },
      py::arg("graph"), py::arg("labels"), py::arg("spec"), py::arg("sigma"), py::arg("i"));
  m.def(
      "potential",
      [](const Graph& g, const std::optional<ResourceAssignment>& labels, const GameSpec& spec,
         const ActionProfile& sigma) { return potential(g, opt_labels(labels), spec, sigma); },
      py::arg("graph"), py::arg("labels"), py::arg("spec"), py::arg("sigma"));
  m.def(
      "best_response_set",
      [](const Graph& g, const std::optional<ResourceAssignment>& labels, const GameSpec& spec,
         const ActionProfile& sigma, int i, int anchor_flag) {
        return best_response_set(g, opt_labels(labels), spec, sigma, i, anchor_flag);
      },
      py::arg("graph"), py::arg("labels"), py::arg("spec"), py::arg("sigma"), py::arg("i"),
      py::arg("anchor_flag") = 0);

  py::class_<NashCheck>(m, "NashCheck")
      .def_readonly("nash", &NashCheck::nash)
      .def_readonly("deviator", &NashCheck::deviator)
      .def_readonly("closed_form", &NashCheck::closed_form);
  m.def(
      "is_nash",
      [](const Graph& g, const std::optional<ResourceAssignment>& labels, const GameSpec& spec,
         const ActionProfile& sigma) { return is_nash(g, opt_labels(labels), spec, sigma); },
      py::arg("graph"), py::arg("labels"), py::arg("spec"), py::arg("sigma"));

  m.def("lll_probabilities", &lll_probabilities, py::arg("utilities"), py::arg("T"));

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("temperature", &SimConfig::temperature)
      .def_readwrite("iterations", &SimConfig::iterations)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("steady_window", &SimConfig::steady_window)
      .def_readwrite("steady_threshold", &SimConfig::steady_threshold)
      .def_readwrite("init", &SimConfig::init)
      .def_readwrite("explicit_init", &SimConfig::explicit_init);

  py::class_<SimTrace>(m, "SimTrace")
      .def_readonly("participating", &SimTrace::participating)
      .def_readonly("anchors", &SimTrace::anchors)
      .def_readonly("potential", &SimTrace::potential)
      .def_readonly("frequency", &SimTrace::frequency)
      .def_readonly("final_profile", &SimTrace::final_profile)
      .def_readonly("steady_window", &SimTrace::steady_window);

  m.def(
      "run",
      [](const Graph& g, const std::optional<ResourceAssignment>& labels, const GameSpec& spec,
         const SimConfig& config) { return run(g, opt_labels(labels), spec, config); },
      py::arg("graph"), py::arg("labels"), py::arg("spec"), py::arg("config"));
  m.def("classify_steady_state", &classify_steady_state, py::arg("trace"), py::arg("threshold"));

  py::class_<CoreResult>(m, "CoreResult")
      .def_readonly("in_core", &CoreResult::in_core)
      .def_readonly("removed_per_round", &CoreResult::removed_per_round)
      .def_readonly("remaining_per_round", &CoreResult::remaining_per_round)
      .def("size", &CoreResult::size);
  m.def("k_core", &k_core, py::arg("graph"), py::arg("k"));
  m.def("rs_core", &rs_core, py::arg("graph"), py::arg("labels"), py::arg("r"));
  m.def("anchored_k_core", &anchored_k_core);
  m.def("anchored_rs_core", &anchored_rs_core);

  py::class_<PaConfig>(m, "PaConfig")
      .def(py::init<>())
      .def_readwrite("budget", &PaConfig::budget)
      .def_readwrite("t_th", &PaConfig::t_th)
      .def_readwrite("t_u", &PaConfig::t_u)
      .def_readwrite("tenure_unit", &PaConfig::tenure_unit)
      .def_readwrite("failure_iteration", &PaConfig::failure_iteration)
      .def_readwrite("failure_count", &PaConfig::failure_count)
      .def_readwrite("failure_seed", &PaConfig::failure_seed);

  py::enum_<AnchorEventKind>(m, "AnchorEventKind")
      .value("GRANT", AnchorEventKind::Grant)
      .value("REVOKE", AnchorEventKind::Revoke)
      .value("REPLACE", AnchorEventKind::Replace)
      .value("GRADUATE", AnchorEventKind::Graduate);
  py::class_<AnchorEvent>(m, "AnchorEvent")
      .def_readonly("iter", &AnchorEvent::iter)
      .def_readonly("kind", &AnchorEvent::kind)
      .def_readonly("player", &AnchorEvent::player)
      .def_readonly("impact", &AnchorEvent::impact)
      .def_readonly("anchors_after", &AnchorEvent::anchors_after);
  py::class_<AnchorTrace>(m, "AnchorTrace")
      .def_readonly("events", &AnchorTrace::events)
      .def_readonly("grants", &AnchorTrace::grants)
      .def_readonly("revocations", &AnchorTrace::revocations);
  py::class_<PaAudit>(m, "PaAudit")
      .def_readonly("steps", &PaAudit::steps)
      .def_readonly("budget_violations", &PaAudit::budget_violations)
      .def_readonly("grant_condition_violations", &PaAudit::grant_condition_violations)
      .def_readonly("bijection_violations", &PaAudit::bijection_violations)
      .def_readonly("eviction_order_violations", &PaAudit::eviction_order_violations);
  py::class_<AnchoredRun>(m, "AnchoredRun")
      .def_readonly("trace", &AnchoredRun::trace)
      .def_readonly("anchors", &AnchoredRun::anchors)
      .def_readonly("audit", &AnchoredRun::audit)
      .def_readonly("final_flags", &AnchoredRun::final_flags);
  m.def(
      "run_anchored",
      [](const Graph& g, const std::optional<ResourceAssignment>& labels, const GameSpec& spec,
         const SimConfig& config, const PaConfig& pa) {
        return run_anchored(g, opt_labels(labels), spec, config, pa);
      },
      py::arg("graph"), py::arg("labels"), py::arg("spec"), py::arg("config"), py::arg("pa"));

  py::class_<GreedyAnchoredCore>(m, "GreedyAnchoredCore")
      .def_readonly("anchors", &GreedyAnchoredCore::anchors)
      .def_readonly("core_sizes", &GreedyAnchoredCore::core_sizes)
      .def_readonly("in_core", &GreedyAnchoredCore::in_core);
  m.def(
      "greedy_anchored_core",
      [](const Graph& g, const std::optional<ResourceAssignment>& labels, const GameSpec& spec,
         int budget) { return greedy_anchored_core(g, opt_labels(labels), spec, budget); },
      py::arg("graph"), py::arg("labels"), py::arg("spec"), py::arg("budget"));

  m.def(
      "transition_resistance",
      [](const Graph& g, const std::optional<ResourceAssignment>& labels, const GameSpec& spec,
         const ActionProfile& from, const ActionProfile& to) {
        return transition_resistance(g, opt_labels(labels), spec, from, to);
      },
      py::arg("graph"), py::arg("labels"), py::arg("spec"), py::arg("from_profile"),
      py::arg("to_profile"));
  py::class_<ResistancePath>(m, "ResistancePath")
      .def_readonly("resistance", &ResistancePath::resistance)
      .def_readonly("profiles", &ResistancePath::profiles);
  m.def(
      "min_resistance",
      [](const Graph& g, const std::optional<ResourceAssignment>& labels, const GameSpec& spec,
         const ActionProfile& from, const ActionProfile& to) {
        return min_resistance(g, opt_labels(labels), spec, from, to);
      },
      py::arg("graph"), py::arg("labels"), py::arg("spec"), py::arg("from_profile"),
      py::arg("to_profile"));
  m.def(
      "basin_of_attraction",
      [](const Graph& g, const std::optional<ResourceAssignment>& labels, const GameSpec& spec,
         const ActionProfile& sigma) {
        return basin_of_attraction(g, opt_labels(labels), spec, sigma);
      },
      py::arg("graph"), py::arg("labels"), py::arg("spec"), py::arg("sigma"));
  m.def(
      "radius",
      [](const Graph& g, const std::optional<ResourceAssignment>& labels, const GameSpec& spec,
         const ActionProfile& sigma) { return radius(g, opt_labels(labels), spec, sigma); },
      py::arg("graph"), py::arg("labels"), py::arg("spec"), py::arg("sigma"));
  m.def(
      "coradius",
      [](const Graph& g, const std::optional<ResourceAssignment>& labels, const GameSpec& spec,
         const ActionProfile& sigma) { return coradius(g, opt_labels(labels), spec, sigma); },
      py::arg("graph"), py::arg("labels"), py::arg("spec"), py::arg("sigma"));

  py::class_<EquilibriumReport>(m, "EquilibriumReport")
      .def_readonly("profile", &EquilibriumReport::profile)
      .def_readonly("radius", &EquilibriumReport::radius)
      .def_readonly("coradius", &EquilibriumReport::coradius)
      .def_readonly("basin_size", &EquilibriumReport::basin_size)
      .def_readonly("stochastically_stable", &EquilibriumReport::stochastically_stable)
      .def_readonly("witness_escape", &EquilibriumReport::witness_escape);
  py::class_<RdCrReport>(m, "RdCrReport")
      .def_readonly("n", &RdCrReport::n)
      .def_readonly("equilibria", &RdCrReport::equilibria);
  m.def(
      "rd_cr_report",
      [](const Graph& g, const std::optional<ResourceAssignment>& labels, const GameSpec& spec) {
        return rd_cr_report(g, opt_labels(labels), spec);
      },
      py::arg("graph"), py::arg("labels"), py::arg("spec"));
  m.def("rd_cr_report_json", &rd_cr_report_json);

  py::class_<AlphaThresholdReport>(m, "AlphaThresholdReport")
      .def_readonly("alpha_upper", &AlphaThresholdReport::alpha_upper)
      .def_readonly("alpha_lower", &AlphaThresholdReport::alpha_lower)
      .def_readonly("alpha_upper_alt", &AlphaThresholdReport::alpha_upper_alt)
      .def_readonly("has_alt", &AlphaThresholdReport::has_alt);
  m.def("alpha_thresholds_ring", &alpha_thresholds_ring, py::arg("n"));
  m.def("alpha_thresholds_wheel", &alpha_thresholds_wheel, py::arg("n"));
  m.def("alpha_thresholds_grid", &alpha_thresholds_grid, py::arg("m"));

  m.def(
      "stationary_distribution",
      [](const Graph& g, const std::optional<ResourceAssignment>& labels, const GameSpec& spec,
         double T) { return stationary_distribution(g, opt_labels(labels), spec, T); },
      py::arg("graph"), py::arg("labels"), py::arg("spec"), py::arg("T"));

  m.def("profile_from_mask", &profile_from_mask, py::arg("mask"), py::arg("n"));
  m.def("mask_from_profile", &mask_from_profile, py::arg("sigma"));
}
