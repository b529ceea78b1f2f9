#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ehnet/analytic.hpp"
#include "ehnet/markov.hpp"
#include "ehnet/model.hpp"
#include "ehnet/optimize.hpp"
#include "ehnet/sim.hpp"

namespace py = pybind11;
using namespace ehnet;

namespace {

py::dict steady_state_dict(const SteadyState& s) {
    py::dict d;
    d["gamma1"] = s.grid.gamma1;
    d["gamma2"] = s.grid.gamma2;
    d["pi"] = s.pi;
    d["support"] = s.support;
    d["residual"] = s.residual;
    d["method"] = s.method == SolveMethod::linear_solve ? "linear-solve" : "cesaro-power-iteration";
    d["period"] = s.period;
    return d;
}

} // namespace

PYBIND11_MODULE(_ehnet, m) {
    m.doc() = "Throughput, simulation and threshold search for a two-node energy-harvesting random-access network";

    py::register_exception<Error>(m, "EhnetError", PyExc_ValueError);

    py::class_<EHProbabilities>(m, "EHProbabilities")
        .def(py::init<>())
        .def(py::init([](double p00, double p10, double p01, double p11) {
                 return EHProbabilities{p00, p10, p01, p11};
             }),
             py::arg("p00"), py::arg("p10"), py::arg("p01"), py::arg("p11"))
        .def_readwrite("p00", &EHProbabilities::p00)
        .def_readwrite("p10", &EHProbabilities::p10)
        .def_readwrite("p01", &EHProbabilities::p01)
        .def_readwrite("p11", &EHProbabilities::p11)
        .def("__repr__", [](const EHProbabilities& p) {
            return "EHProbabilities(" + std::to_string(p.p00) + ", " + std::to_string(p.p10) + ", " +
                   std::to_string(p.p01) + ", " + std::to_string(p.p11) + ")";
        });

    m.def("high_negative", &presets::high_negative, py::arg("p"));
    m.def("high_positive", &presets::high_positive, py::arg("p"));
    m.def("independent", &presets::independent);

    py::class_<NetworkConfig>(m, "NetworkConfig")
        .def(py::init([](Capacities caps, Thresholds gammas, double delta_prime, EHProbabilities probs) {
                 return NetworkConfig{caps, gammas, delta_prime, probs};
             }),
             py::arg("caps"), py::arg("gammas"), py::arg("delta_prime"), py::arg("probs"))
        .def_readwrite("caps", &NetworkConfig::caps)
        .def_readwrite("gammas", &NetworkConfig::gammas)
        .def_readwrite("delta_prime", &NetworkConfig::delta_prime)
        .def_readwrite("probs", &NetworkConfig::probs);

    m.def("validate", py::overload_cast<const EHProbabilities&>(&validate), py::arg("probs"));
    m.def("validate_config", py::overload_cast<const NetworkConfig&>(&validate), py::arg("config"));
    m.def("compute_delta_prime", &compute_delta_prime, py::arg("delta"), py::arg("epsilon"), py::arg("noise"));

    py::class_<SlotOutcome>(m, "SlotOutcome")
        .def_property_readonly("next_state", [](const SlotOutcome& s) { return s.next.level; })
        .def_readonly("tx", &SlotOutcome::tx)
        .def_readonly("collision", &SlotOutcome::collision)
        .def_readonly("rate", &SlotOutcome::rate);
    m.def(
        "step",
        [](std::array<int, 2> state, Harvest harvest, const NetworkConfig& config) {
            return step(BatteryState{state}, harvest, config);
        },
        py::arg("state"), py::arg("harvest"), py::arg("config"));

    py::class_<ThroughputReport>(m, "ThroughputReport")
        .def_property_readonly("r1", [](const ThroughputReport& r) { return r.rate[0]; })
        .def_property_readonly("r2", [](const ThroughputReport& r) { return r.rate[1]; })
        .def_readonly("total", &ThroughputReport::total)
        .def_property_readonly("source", [](const ThroughputReport& r) { return std::string(to_string(r.source)); })
        .def("__repr__", [](const ThroughputReport& r) {
            return "ThroughputReport(r1=" + std::to_string(r.rate[0]) + ", r2=" + std::to_string(r.rate[1]) +
                   ", source=" + std::string(to_string(r.source)) + ")";
        });

    m.def(
        "transition_matrix",
        [](const NetworkConfig& config) {
            const auto chain = build_chain(config);
            std::vector<std::vector<double>> dense(chain.dim(), std::vector<double>(chain.dim(), 0.0));
            for (std::size_t s = 0; s < chain.dim(); ++s) {
                for (const auto& t : chain.row(s)) dense[s][t.to] = t.prob;
            }
            return dense;
        },
        py::arg("config"), "Dense row-major transition matrix, state index i * gamma2 + j");
    m.def(
        "steady_state", [](const NetworkConfig& config) { return steady_state_dict(solve_steady_state(build_chain(config))); },
        py::arg("config"));
    m.def(
        "stationary_throughput",
        [](const NetworkConfig& config) { return markov_throughput(config); }, py::arg("config"));

    m.def("gcd", &ehnet::gcd, py::arg("a"), py::arg("b"));
    m.def("lcm", &ehnet::lcm, py::arg("a"), py::arg("b"));
    m.def("lemma1_throughput", &lemma1_throughput, py::arg("config"));
    m.def("objective_z", &objective_z, py::arg("config"));
    m.def("negative_corr_z", &negative_corr_z, py::arg("gamma1"), py::arg("gamma2"), py::arg("p"),
          py::arg("delta_prime"));
    m.def("renewal_throughput", &renewal_throughput, py::arg("gamma1"), py::arg("gamma2"), py::arg("p"),
          py::arg("delta_prime"));
    m.def("positive_small_delta_z", &positive_small_delta_z, py::arg("gamma1"), py::arg("gamma2"), py::arg("p"),
          py::arg("delta_prime"));
    m.def("positive_large_delta_z", &positive_large_delta_z, py::arg("gamma1"), py::arg("gamma2"), py::arg("p"),
          py::arg("delta_prime"));
    m.def(
        "model_throughput", [](const NetworkConfig& config) { return model_throughput(config); }, py::arg("config"));

    py::class_<SimulationResult>(m, "SimulationResult")
        .def_readonly("report", &SimulationResult::report)
        .def_readonly("std_error", &SimulationResult::std_error)
        .def_readonly("total_std_error", &SimulationResult::total_std_error)
        .def_readonly("successes", &SimulationResult::successes)
        .def_readonly("collisions", &SimulationResult::collisions)
        .def_readonly("horizon", &SimulationResult::horizon)
        .def_readonly("occupancy", &SimulationResult::occupancy);
    m.def(
        "simulate",
        [](const NetworkConfig& config, std::uint64_t horizon, std::uint64_t seed, std::size_t batches) {
            py::gil_scoped_release release;
            return run(SimulationConfig{horizon, seed, config, batches});
        },
        py::arg("config"), py::arg("horizon"), py::arg("seed") = 1, py::arg("batches") = 20);

    m.def(
        "compare",
        [](double analytic, double simulated) {
            const auto metrics = compare(analytic, simulated);
            return py::make_tuple(metrics.re_percent ? py::object(py::float_(*metrics.re_percent)) : py::none(),
                                  metrics.ae_percent);
        },
        py::arg("analytic"), py::arg("simulated"), "Returns (%RE or None, %AE)");

    py::class_<OptimizationOutcome>(m, "OptimizationOutcome")
        .def_readonly("best", &OptimizationOutcome::best)
        .def_readonly("best_value", &OptimizationOutcome::best_value)
        .def_readonly("ties", &OptimizationOutcome::ties)
        .def_readonly("evaluated", &OptimizationOutcome::evaluated)
        .def_property_readonly("model_used",
                               [](const OptimizationOutcome& o) { return std::string(to_string(o.model_used)); });
    m.def(
        "exhaustive_search",
        [](Capacities caps, const EHProbabilities& probs, double delta_prime) {
            return exhaustive_search(caps, probs, delta_prime);
        },
        py::arg("caps"), py::arg("probs"), py::arg("delta_prime"));
    m.def("closed_form_negative", &closed_form_negative, py::arg("caps"), py::arg("p"), py::arg("delta_prime"));
    m.def("closed_form_positive_small", &closed_form_positive_small, py::arg("caps"), py::arg("p"),
          py::arg("delta_prime"));
    m.def("closed_form_positive_large", &closed_form_positive_large, py::arg("caps"), py::arg("p"),
          py::arg("delta_prime"));
}
