#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "upo/belief.hpp"
#include "upo/config.hpp"
#include "upo/errors.hpp"
#include "upo/harness.hpp"
#include "upo/local_model.hpp"
#include "upo/oracles.hpp"
#include "upo/pv_plant.hpp"

namespace py = pybind11;
using namespace upo;

namespace {

ExperimentConfig config_from(const std::optional<std::string>& text) {
  if (!text) return ExperimentConfig::defaults();
  std::istringstream in(*text);
  return parse_config(in, "<string>");
}

py::dict trace_to_dict(const RunTrace& t) {
  py::list k, index, u, y, value, index_star, value_star, decision;
  for (const auto& r : t.records) {
    k.append(r.k);
    index.append(r.index);
    u.append(r.u);
    y.append(r.y);
    value.append(r.value);
    index_star.append(r.index_star);
    value_star.append(r.value_star);
    decision.append(to_string(r.decision));
  }
  py::dict d;
  d["selector"] = t.selector;
  d["k"] = k;
  d["index"] = index;
  d["u"] = u;
  d["y"] = y;
  d["value"] = value;
  d["index_star"] = index_star;
  d["value_star"] = value_star;
  d["decision"] = decision;
  return d;
}

py::dict metrics_to_dict(const Metrics& m) {
  py::dict d;
  d["selector"] = m.selector;
  d["horizon"] = m.horizon;
  d["steps_off_optimum"] = m.steps_off_optimum;
  d["total_value"] = m.total_value;
  d["perturbation_count"] = m.perturbation_count;
  d["gain_vs_po_pct"] = m.gain_vs_po_pct;
  d["gain_vs_constant_pct"] = m.gain_vs_constant_pct;
  d["oracle_gap_pct"] = m.oracle_gap_pct;
  return d;
}

}  // namespace

PYBIND11_MODULE(pyupo, m) {
  m.doc() = "Uncertainty-based perturb and observe: belief model, selectors, PV plant and experiments";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", error.ptr());
  py::register_exception<BoundsError>(m, "BoundsError", error.ptr());
  py::register_exception<ContractViolation>(m, "ContractViolation", error.ptr());
  py::register_exception<NumericFailure>(m, "NumericFailure", error.ptr());
  py::register_exception<NonUniqueMaximizer>(m, "NonUniqueMaximizer", error.ptr());
  py::register_exception<AssumptionViolation>(m, "AssumptionViolation", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());

  m.def("zeta", &zeta, py::arg("j"), py::arg("k"), py::arg("q"), py::arg("lam"));
  m.def("omega", &omega, py::arg("j"), py::arg("k"), py::arg("lam"), py::arg("order"));

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("mean", &Estimate::mean)
      .def_readonly("variance", &Estimate::variance)
      .def("__repr__", [](const Estimate& e) {
        return "Estimate(mean=" + std::to_string(e.mean) + ", variance=" + std::to_string(e.variance) + ")";
      });

  py::class_<BeliefState>(m, "BeliefState")
      .def(py::init([](double lam, int order) { return BeliefState(WeightingOperator(lam, order)); }),
           py::arg("lam"), py::arg("order"))
      .def("update", &BeliefState::update, py::arg("k"), py::arg("index"), py::arg("y"))
      .def("estimate", &BeliefState::estimate, py::arg("index"), py::arg("rho"))
      .def("last_measured", &BeliefState::last_measured, py::arg("index"))
      .def_property_readonly("time", &BeliefState::time);

  m.def(
      "direct_estimate",
      [](const std::vector<std::pair<TimeIndex, double>>& history, double lam, int order, double rho,
         TimeIndex target) {
        std::vector<Measurement> h;
        for (const auto& [t, y] : history) h.push_back({t, y});
        return direct_estimate(h, lam, order, rho, target);
      },
      py::arg("history"), py::arg("lam"), py::arg("order"), py::arg("rho"), py::arg("target"));

  m.def(
      "solve_local",
      [](const std::array<std::optional<std::pair<double, double>>, 3>& est, double nu, double rho) {
        EstimateTriple t;
        for (int j = 0; j < 3; ++j) {
          if (est[j]) t[j] = Estimate{est[j]->first, est[j]->second};
        }
        return solve_local(0, t, LocalModelParams{nu, rho}).h;
      },
      py::arg("estimates"), py::arg("nu"), py::arg("rho"),
      "Local model values (left, center, right) from (mean, variance) pairs; None marks an unmeasured point.");

  py::class_<pv::SteadyState>(m, "SteadyState")
      .def_readonly("power", &pv::SteadyState::power)
      .def_readonly("voltage", &pv::SteadyState::voltage)
      .def_readonly("current", &pv::SteadyState::current);

  m.def(
      "pv_power",
      [](double u, double T, double S) { return pv::steady_state_power(pv::PvParams{}, pv::Conditions{T, S}, u); },
      py::arg("u"), py::arg("T") = 298.15, py::arg("S") = 1000.0,
      "Steady state of the default PV array and converter at duty cycle u.");
  m.def(
      "pv_light_current", [](double T, double S) { return pv::light_current(pv::PvParams{}, pv::Conditions{T, S}); },
      py::arg("T") = 298.15, py::arg("S") = 1000.0);
  m.def(
      "pv_conditions",
      [](TimeIndex k) {
        const auto c = pv::DayProfile{}.at(k);
        return std::make_pair(c.T, c.S);
      },
      py::arg("k"), "(T, S) of the default clear-day profile at step k.");

  m.def(
      "convergence_constants",
      [](double curvature, double drift, double delta_u, double rho, double tau, double nu_star, TimeIndex k0) {
        const auto c = convergence_constants({curvature, drift, delta_u, rho, tau, nu_star, k0});
        py::dict d;
        d["L_star"] = c.L_star;
        d["N"] = c.N_window;
        d["d"] = c.d;
        d["b"] = c.b_dead;
        d["gamma"] = c.gamma;
        d["c1"] = c.c1;
        d["c2"] = c.c2;
        d["lambda_star"] = c.lambda_star;
        return d;
      },
      py::arg("curvature"), py::arg("drift"), py::arg("delta_u"), py::arg("rho"), py::arg("tau"),
      py::arg("nu_star") = 3.0, py::arg("k0") = 1);

  m.def(
      "default_config",
      [] {
        std::ostringstream out;
        write_config(out, ExperimentConfig::defaults());
        return out.str();
      },
      "Default experiment config in the key = value format.");

  m.def(
      "run",
      [](const std::optional<std::string>& config, std::optional<std::uint64_t> seed,
         const std::optional<std::vector<std::string>>& selectors) {
        ExperimentConfig c = config_from(config);
        if (seed) c.seed = *seed;
        if (selectors) {
          c.selectors.clear();
          for (const auto& name : *selectors) {
            SelectorConfig s = SelectorConfig::defaults(parse_selector_kind(name));
            s.rho = c.rho;
            c.selectors.push_back(s);
          }
        }
        c.validate();
        std::vector<RunTrace> traces;
        {
          py::gil_scoped_release release;
          traces = run_experiment(c);
        }
        const References refs = compute_references(build_objective(c), c.scan_interval(), c.horizon);
        py::list out_traces, out_metrics;
        for (const auto& t : traces) out_traces.append(trace_to_dict(t));
        for (const auto& mt : compute_metrics(traces, refs)) out_metrics.append(metrics_to_dict(mt));
        py::dict result;
        result["traces"] = out_traces;
        result["metrics"] = out_metrics;
        result["oracle_total"] = refs.oracle_total;
        result["best_constant_total"] = refs.best_constant_total;
        return result;
      },
      py::arg("config") = py::none(), py::arg("seed") = py::none(), py::arg("selectors") = py::none(),
      "Run an experiment given config text (defaults when None); returns traces and metrics.");
}
