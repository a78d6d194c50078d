#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cfqsim/chain.hpp"
#include "cfqsim/experiments.hpp"
#include "cfqsim/montecarlo.hpp"
#include "cfqsim/protocols.hpp"
#include "cfqsim/state.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Chained-Zeno counterfactual communication simulator";

    py::class_<cfqsim::TwoModeState>(m, "TwoModeState")
        .def(py::init<>())
        .def(py::init([](double alice, double channel) {
                 return cfqsim::TwoModeState{alice, channel};
             }),
             py::arg("alice_amp"), py::arg("channel_amp"))
        .def_readonly("alice_amp", &cfqsim::TwoModeState::alice_amp)
        .def_readonly("channel_amp", &cfqsim::TwoModeState::channel_amp)
        .def("norm_sq", &cfqsim::TwoModeState::norm_sq);

    py::class_<cfqsim::ThreeModeState>(m, "ThreeModeState")
        .def(py::init<>())
        .def_readonly("outer_amp", &cfqsim::ThreeModeState::outer_amp)
        .def_readonly("inner_amp", &cfqsim::ThreeModeState::inner_amp)
        .def_readonly("channel_amp", &cfqsim::ThreeModeState::channel_amp)
        .def("norm_sq", &cfqsim::ThreeModeState::norm_sq);

    m.def("rotate", &cfqsim::rotate, py::arg("state"), py::arg("theta"));
    m.def(
        "attenuate_channel",
        [](const cfqsim::TwoModeState& s, double c) {
            const auto r = cfqsim::attenuate_channel(s, c);
            return py::make_tuple(r.state, r.absorbed_prob);
        },
        py::arg("state"), py::arg("c"));
    m.def(
        "detect",
        [](const cfqsim::TwoModeState& s) {
            const auto probs = cfqsim::detect(s);
            return py::make_tuple(probs.d1, probs.d2);
        },
        py::arg("state"));

    py::class_<cfqsim::ChainModule>(m, "ChainModule")
        .def(py::init<std::vector<double>>(), py::arg("transmissivities"))
        .def_property_readonly("transmissivities", &cfqsim::ChainModule::transmissivities)
        .def("total_transmission", &cfqsim::ChainModule::total_transmission)
        .def("reflect_back_prob", &cfqsim::ChainModule::reflect_back_prob)
        .def("absorb_prob", &cfqsim::ChainModule::absorb_prob)
        .def("effective_return_rate", &cfqsim::ChainModule::effective_return_rate);
    m.def("uniform_for_target", &cfqsim::uniform_for_target, py::arg("n"),
          py::arg("t_target"));

    py::class_<cfqsim::DelayGeometry>(m, "DelayGeometry")
        .def(py::init([](std::size_t n, double l0, double l1) {
                 return cfqsim::DelayGeometry{n, l0, l1};
             }),
             py::arg("n"), py::arg("l0"), py::arg("l1"));
    m.def("od_lengths", &cfqsim::od_lengths, py::arg("geometry"));

    py::enum_<cfqsim::Protocol>(m, "Protocol")
        .value("Improved", cfqsim::Protocol::Improved)
        .value("Slaz", cfqsim::Protocol::Slaz);
    py::enum_<cfqsim::BobBit>(m, "BobBit")
        .value("Pass", cfqsim::BobBit::Pass)
        .value("Block", cfqsim::BobBit::Block);
    py::enum_<cfqsim::SlazNoise>(m, "SlazNoise")
        .value("PerSegment", cfqsim::SlazNoise::PerSegment)
        .value("PerOuterCycle", cfqsim::SlazNoise::PerOuterCycle);

    py::class_<cfqsim::DetectorDist>(m, "DetectorDist")
        .def_readonly("d1", &cfqsim::DetectorDist::d1)
        .def_readonly("d2", &cfqsim::DetectorDist::d2)
        .def_readonly("d3_module", &cfqsim::DetectorDist::d3_module)
        .def_readonly("d4_bob", &cfqsim::DetectorDist::d4_bob)
        .def_readonly("noise_absorbed", &cfqsim::DetectorDist::noise_absorbed)
        .def("total", &cfqsim::DetectorDist::total);

    py::class_<cfqsim::CounterfactualityVec>(m, "CounterfactualityVec")
        .def_readonly("c0", &cfqsim::CounterfactualityVec::c0)
        .def_readonly("c1", &cfqsim::CounterfactualityVec::c1)
        .def("a0", &cfqsim::CounterfactualityVec::a0)
        .def("a1", &cfqsim::CounterfactualityVec::a1);

    py::class_<cfqsim::ImprovedParams>(m, "ImprovedParams")
        .def(py::init<int>(), py::arg("cycles"))
        .def(py::init<int, cfqsim::ChainModule>(), py::arg("cycles"), py::arg("module"))
        .def_readonly("cycles", &cfqsim::ImprovedParams::cycles)
        .def_readonly("module", &cfqsim::ImprovedParams::module)
        .def_readonly("theta", &cfqsim::ImprovedParams::theta);

    py::class_<cfqsim::SlazParams>(m, "SlazParams")
        .def(py::init<int, int>(), py::arg("outer_cycles"), py::arg("inner_cycles"))
        .def_readonly("outer_cycles", &cfqsim::SlazParams::outer_cycles)
        .def_readonly("inner_cycles", &cfqsim::SlazParams::inner_cycles)
        .def_readonly("theta_outer", &cfqsim::SlazParams::theta_outer)
        .def_readonly("theta_inner", &cfqsim::SlazParams::theta_inner);

    m.def("theta_of", &cfqsim::theta_of, py::arg("cycles"));
    m.def("improved_c1", &cfqsim::improved_c1, py::arg("cycles"));
    m.def("improved_c0", &cfqsim::improved_c0, py::arg("cycles"), py::arg("transmission"));
    m.def("counterfactuality_improved", &cfqsim::counterfactuality_improved,
          py::arg("params"));
    m.def("improved_run", &cfqsim::improved_run, py::arg("params"), py::arg("bob"),
          py::arg("mask"), py::arg("return_rate") = 0.0);
    m.def("improved_single_block_d2", &cfqsim::improved_single_block_d2,
          py::arg("cycles"), py::arg("blocked_cycle"), py::arg("return_rate") = 0.0);
    m.def("slaz_run", &cfqsim::slaz_run, py::arg("params"), py::arg("bob"),
          py::arg("mask"));
    m.def("slaz_run_segments", &cfqsim::slaz_run_segments, py::arg("params"),
          py::arg("bob"), py::arg("mask"));
    m.def("slaz_p1", &cfqsim::slaz_p1, py::arg("outer_cycles"));
    m.def("slaz_p2", &cfqsim::slaz_p2, py::arg("outer_cycles"), py::arg("inner_cycles"));
    m.def("equivalent_distance", &cfqsim::equivalent_distance, py::arg("protocol"),
          py::arg("outer_cycles"), py::arg("inner_cycles"), py::arg("channel_length"));

    py::class_<cfqsim::NoiseSpec>(m, "NoiseSpec")
        .def(py::init([](double block_rate, double return_rate) {
                 return cfqsim::NoiseSpec{block_rate, return_rate};
             }),
             py::arg("block_rate"), py::arg("return_rate") = 0.0)
        .def_readonly("block_rate", &cfqsim::NoiseSpec::block_rate)
        .def_readonly("return_rate", &cfqsim::NoiseSpec::return_rate);

    py::class_<cfqsim::Seed>(m, "Seed")
        .def(py::init([](std::uint64_t master) { return cfqsim::Seed{master}; }),
             py::arg("master_seed"))
        .def_readonly("master_seed", &cfqsim::Seed::master_seed);

    py::class_<cfqsim::TrialStats>(m, "TrialStats")
        .def_readonly("n", &cfqsim::TrialStats::n)
        .def_readonly("mean", &cfqsim::TrialStats::mean)
        .def_readonly("variance", &cfqsim::TrialStats::variance)
        .def_readonly("stderr_mean", &cfqsim::TrialStats::stderr_mean)
        .def_readonly("ci95_half_width", &cfqsim::TrialStats::ci95_half_width);

    py::class_<cfqsim::McOptions>(m, "McOptions")
        .def(py::init([](int workers, cfqsim::SlazNoise slaz_noise) {
                 cfqsim::McOptions options;
                 options.workers = workers;
                 options.slaz_noise = slaz_noise;
                 return options;
             }),
             py::arg("workers") = 1,
             py::arg("slaz_noise") = cfqsim::SlazNoise::PerSegment)
        .def_readonly("workers", &cfqsim::McOptions::workers)
        .def_readonly("slaz_noise", &cfqsim::McOptions::slaz_noise);

    m.def(
        "run_mc",
        [](const cfqsim::ImprovedParams& params, const cfqsim::NoiseSpec& noise,
           std::size_t trials, cfqsim::Seed seed, const cfqsim::McOptions& options) {
            return cfqsim::run_mc(cfqsim::ProtocolParams(params), noise, trials, seed,
                                  options);
        },
        py::arg("params"), py::arg("noise"), py::arg("trials"), py::arg("seed"),
        py::arg("options") = cfqsim::McOptions{});
    m.def(
        "run_mc",
        [](const cfqsim::SlazParams& params, const cfqsim::NoiseSpec& noise,
           std::size_t trials, cfqsim::Seed seed, const cfqsim::McOptions& options) {
            return cfqsim::run_mc(cfqsim::ProtocolParams(params), noise, trials, seed,
                                  options);
        },
        py::arg("params"), py::arg("noise"), py::arg("trials"), py::arg("seed"),
        py::arg("options") = cfqsim::McOptions{});
    m.def(
        "exact_expected_success",
        [](const cfqsim::ImprovedParams& params, const cfqsim::NoiseSpec& noise,
           cfqsim::SlazNoise slaz_noise) {
            return cfqsim::exact_expected_success(cfqsim::ProtocolParams(params),
                                                  noise, slaz_noise);
        },
        py::arg("params"), py::arg("noise"),
        py::arg("slaz_noise") = cfqsim::SlazNoise::PerSegment);
    m.def(
        "exact_expected_success",
        [](const cfqsim::SlazParams& params, const cfqsim::NoiseSpec& noise,
           cfqsim::SlazNoise slaz_noise) {
            return cfqsim::exact_expected_success(cfqsim::ProtocolParams(params),
                                                  noise, slaz_noise);
        },
        py::arg("params"), py::arg("noise"),
        py::arg("slaz_noise") = cfqsim::SlazNoise::PerSegment);
}
