#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rgpucb/acquisition.hpp"
#include "rgpucb/benchmarks.hpp"
#include "rgpucb/experiment.hpp"
#include "rgpucb/gp.hpp"
#include "rgpucb/harness.hpp"
#include "rgpucb/sampling.hpp"

namespace py = pybind11;
using namespace rgpucb;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bayesian optimisation with Gamma-randomised GP-UCB";
    m.attr("__version__") = RGPUCB_VERSION;

    py::register_exception<IllConditionedKernelError>(m, "IllConditionedKernelError",
                                                      PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    // sampling
    py::class_<RngStream>(m, "RngStream")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def_static("for_repeat", &RngStream::for_repeat, py::arg("base_seed"),
                    py::arg("repeat_index"))
        .def("next_u64", &RngStream::next_u64)
        .def("uniform", py::overload_cast<>(&RngStream::uniform))
        .def_property_readonly("seed", &RngStream::seed);

    py::class_<GammaParams>(m, "GammaParams")
        .def(py::init([](double shape, double scale) {
                 return GammaParams{shape, scale};
             }),
             py::arg("shape"), py::arg("scale"))
        .def_readwrite("shape", &GammaParams::shape)
        .def_readwrite("scale", &GammaParams::scale);

    py::class_<Box>(m, "Box")
        .def(py::init([](Eigen::VectorXd lower, Eigen::VectorXd upper) {
                 Box box{std::move(lower), std::move(upper)};
                 box.validate();
                 return box;
             }),
             py::arg("lower"), py::arg("upper"))
        .def_static("cube", &Box::cube, py::arg("dimension"), py::arg("lo"), py::arg("hi"))
        .def_readonly("lower", &Box::lower)
        .def_readonly("upper", &Box::upper)
        .def_property_readonly("dimension", &Box::dimension)
        .def("contains", &Box::contains, py::arg("x"), py::arg("tol") = 0.0);

    m.def("normal_sample", &normal_sample, py::arg("rng"));
    m.def(
        "gamma_sample",
        [](double shape, double scale, RngStream& rng) {
            return gamma_sample({shape, scale}, rng);
        },
        py::arg("shape"), py::arg("scale"), py::arg("rng"));
    m.def(
        "gamma_cdf",
        [](double x, double shape, double scale) { return gamma_cdf(x, {shape, scale}); },
        py::arg("x"), py::arg("shape"), py::arg("scale"));
    m.def(
        "gamma_inverse_cdf",
        [](double p, double shape, double scale) { return gamma_inverse_cdf(p, {shape, scale}); },
        py::arg("p"), py::arg("shape"), py::arg("scale"));
    m.def("latin_hypercube", &latin_hypercube, py::arg("n"), py::arg("bounds"), py::arg("rng"));

    // gp_core
    py::class_<KernelParams>(m, "KernelParams")
        .def(py::init([](double lengthscale, double noise_std) {
                 KernelParams p{lengthscale, noise_std};
                 p.validate();
                 return p;
             }),
             py::arg("lengthscale"), py::arg("noise_std") = 0.0)
        .def_readwrite("lengthscale", &KernelParams::lengthscale)
        .def_readwrite("noise_std", &KernelParams::noise_std);

    py::class_<Dataset>(m, "Dataset")
        .def_static("empty", &Dataset::empty, py::arg("dimension"))
        .def_static("from_rows", &Dataset::from_rows, py::arg("points"), py::arg("values"))
        .def_readonly("points", &Dataset::points)
        .def_readonly("values", &Dataset::values)
        .def_readonly("dimension", &Dataset::dimension)
        .def_property_readonly("size", &Dataset::size);

    py::class_<PosteriorMoments>(m, "PosteriorMoments")
        .def_readonly("mean", &PosteriorMoments::mean)
        .def_readonly("variance", &PosteriorMoments::variance);

    py::class_<GpModel>(m, "GpModel")
        .def_property_readonly("chol", &GpModel::chol)
        .def_property_readonly("size", &GpModel::size);

    m.def("se_kernel", &se_kernel, py::arg("xi"), py::arg("xj"), py::arg("params"));
    m.def("fit", &fit, py::arg("data"), py::arg("params"));
    m.def("posterior", &posterior, py::arg("model"), py::arg("x"));
    m.def("joint_posterior_draw", &joint_posterior_draw, py::arg("model"),
          py::arg("candidates"), py::arg("rng"));

    // acquisition
    py::class_<GammaBetaSchedule>(m, "GammaBetaSchedule")
        .def(py::init([](double theta, double shape_floor) {
                 return GammaBetaSchedule{theta, shape_floor};
             }),
             py::arg("theta"), py::arg("shape_floor") = 1e-3)
        .def_readwrite("theta", &GammaBetaSchedule::theta)
        .def_readwrite("shape_floor", &GammaBetaSchedule::shape_floor);

    py::class_<SrinivasBetaParams>(m, "SrinivasBetaParams")
        .def(py::init([](double delta, double a, double b, double r, int d) {
                 return SrinivasBetaParams{delta, a, b, r, d};
             }),
             py::arg("delta") = 0.1, py::arg("a") = 1.0, py::arg("b") = 1.0,
             py::arg("r") = 1.0, py::arg("d") = 1)
        .def_readwrite("delta", &SrinivasBetaParams::delta)
        .def_readwrite("a", &SrinivasBetaParams::a)
        .def_readwrite("b", &SrinivasBetaParams::b)
        .def_readwrite("r", &SrinivasBetaParams::r)
        .def_readwrite("d", &SrinivasBetaParams::d);

    py::class_<AcquisitionChoice>(m, "AcquisitionChoice")
        .def_readonly("point", &AcquisitionChoice::point)
        .def_readonly("acquisition_value", &AcquisitionChoice::acquisition_value)
        .def_readonly("beta_used", &AcquisitionChoice::beta_used)
        .def_readonly("sigma_at_choice", &AcquisitionChoice::sigma_at_choice);

    py::class_<MaximizerBudget>(m, "MaximizerBudget")
        .def(py::init<>())
        .def_readwrite("probes_per_dim", &MaximizerBudget::probes_per_dim)
        .def_readwrite("starts", &MaximizerBudget::starts)
        .def_readwrite("tol_fraction", &MaximizerBudget::tol_fraction)
        .def_readwrite("max_passes", &MaximizerBudget::max_passes);

    m.def("kappa", &kappa, py::arg("t"), py::arg("theta"));
    m.def("rgp_ucb_beta", &rgp_ucb_beta, py::arg("t"), py::arg("schedule"), py::arg("rng"));
    m.def("srinivas_beta", &srinivas_beta, py::arg("t"), py::arg("params"));
    m.def(
        "ucb_value",
        [](double mean, double variance, double beta) {
            return ucb_value({mean, variance}, beta);
        },
        py::arg("mean"), py::arg("variance"), py::arg("beta"));
    m.def(
        "ei_value",
        [](double mean, double variance, double incumbent) {
            return ei_value({mean, variance}, incumbent);
        },
        py::arg("mean"), py::arg("variance"), py::arg("incumbent"));
    m.def("thompson_select", &thompson_select, py::arg("model"), py::arg("candidates"),
          py::arg("rng"));
    m.def(
        "maximize_acquisition",
        [](const PointSurface& surface, const Box& bounds, RngStream& rng,
           const MaximizerBudget& budget) {
            return maximize_acquisition(surface, bounds, rng, budget);
        },
        py::arg("surface"), py::arg("bounds"), py::arg("rng"),
        py::arg("budget") = MaximizerBudget{});

    // benchmarks
    py::class_<BenchmarkProblem>(m, "BenchmarkProblem")
        .def_readonly("name", &BenchmarkProblem::name)
        .def_readonly("dimension", &BenchmarkProblem::dimension)
        .def_readonly("bounds", &BenchmarkProblem::bounds)
        .def_readonly("optimum_value", &BenchmarkProblem::optimum_value)
        .def_readonly("optimum_point", &BenchmarkProblem::optimum_point)
        .def_readwrite("noise_std", &BenchmarkProblem::noise_std);

    py::class_<NoisyObservation>(m, "NoisyObservation")
        .def_readonly("x", &NoisyObservation::x)
        .def_readonly("y", &NoisyObservation::y);

    m.def("benchmark_names", [] { return benchmark_names(); });
    m.def("make_problem", &make_problem, py::arg("name"));
    m.def("evaluate", &evaluate, py::arg("problem"), py::arg("x"));
    m.def("noisy_evaluate", &noisy_evaluate, py::arg("problem"), py::arg("x"), py::arg("rng"));

    // experiment
    py::enum_<AcquisitionKind>(m, "AcquisitionKind")
        .value("RGP_UCB", AcquisitionKind::RgpUcb)
        .value("GP_UCB", AcquisitionKind::GpUcb)
        .value("EI", AcquisitionKind::Ei)
        .value("THOMPSON", AcquisitionKind::Thompson);

    py::class_<MethodSpec>(m, "MethodSpec")
        .def_static("parse", &MethodSpec::parse, py::arg("name"))
        .def("name", &MethodSpec::name)
        .def_readwrite("kind", &MethodSpec::kind)
        .def_readwrite("gamma", &MethodSpec::gamma)
        .def_readwrite("srinivas", &MethodSpec::srinivas)
        .def_readwrite("fixed_beta", &MethodSpec::fixed_beta);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("problem", &ExperimentConfig::problem)
        .def_readwrite("method", &ExperimentConfig::method)
        .def_readwrite("iterations", &ExperimentConfig::iterations)
        .def_readwrite("initial_points", &ExperimentConfig::initial_points)
        .def_readwrite("repeats", &ExperimentConfig::repeats)
        .def_readwrite("lengthscale", &ExperimentConfig::lengthscale)
        .def_readwrite("noise_std", &ExperimentConfig::noise_std)
        .def_readwrite("base_seed", &ExperimentConfig::base_seed)
        .def_readwrite("standardize", &ExperimentConfig::standardize)
        .def_readwrite("budget", &ExperimentConfig::budget)
        .def("resolve_defaults", &ExperimentConfig::resolve_defaults);

    py::class_<IterationRecord>(m, "IterationRecord")
        .def_readonly("t", &IterationRecord::t)
        .def_readonly("x", &IterationRecord::x)
        .def_readonly("y", &IterationRecord::y)
        .def_readonly("noiseless_f", &IterationRecord::noiseless_f)
        .def_readonly("best_so_far", &IterationRecord::best_so_far)
        .def_readonly("beta", &IterationRecord::beta)
        .def_readonly("kappa", &IterationRecord::kappa)
        .def_readonly("sigma_at_choice", &IterationRecord::sigma_at_choice);

    py::class_<RegretTrace>(m, "RegretTrace")
        .def_readonly("per_t_regret", &RegretTrace::per_t_regret)
        .def_readonly("cumulative", &RegretTrace::cumulative);

    py::class_<BoundReport>(m, "BoundReport")
        .def_readonly("T", &BoundReport::T)
        .def_readonly("theta", &BoundReport::theta)
        .def_readonly("kappa_used", &BoundReport::kappa_used)
        .def_readonly("empirical_bayes_regret", &BoundReport::empirical_bayes_regret)
        .def_readonly("bound_value", &BoundReport::bound_value)
        .def_readonly("r1_term", &BoundReport::r1_term)
        .def_readonly("r2_term", &BoundReport::r2_term)
        .def_readonly("r34_term", &BoundReport::r34_term)
        .def_readonly("expected_max_beta_approx", &BoundReport::expected_max_beta_approx)
        .def_readonly("mgf_mc_exp_half_beta", &BoundReport::mgf_mc_exp_half_beta)
        .def_readonly("mgf_mc_exp_half_sqrt_beta", &BoundReport::mgf_mc_exp_half_sqrt_beta)
        .def_readonly("mgf_closed_form", &BoundReport::mgf_closed_form);

    py::class_<AggregateSummary>(m, "AggregateSummary")
        .def_readonly("mean", &AggregateSummary::mean)
        .def_readonly("std", &AggregateSummary::std)
        .def_readonly("final_mean", &AggregateSummary::final_mean)
        .def_readonly("final_std", &AggregateSummary::final_std);

    m.def("bo_loop", &bo_loop, py::arg("config"), py::arg("repeat_index"),
          py::call_guard<py::gil_scoped_release>());
    m.def("cumulative_regret", &cumulative_regret, py::arg("records"), py::arg("optimum"));
    m.def("bayes_regret_estimate", &bayes_regret_estimate, py::arg("traces"));
    m.def("expected_max_beta", &expected_max_beta, py::arg("T"), py::arg("kappa"),
          py::arg("theta"));
    m.def("theorem3_bound", &theorem3_bound, py::arg("records"), py::arg("theta"), py::arg("T"));
    m.def(
        "prior_function_check",
        [](double lengthscale, int grid_size, int T, double theta, int repeats,
           RngStream& rng, int dimension, double noise_std) {
            py::gil_scoped_release release;
            return prior_function_check(lengthscale, grid_size, T, theta, repeats, rng,
                                        dimension, noise_std);
        },
        py::arg("lengthscale"), py::arg("grid_size"), py::arg("T"), py::arg("theta"),
        py::arg("repeats"), py::arg("rng"), py::arg("dimension") = 1,
        py::arg("noise_std") = 0.01);
    m.def("aggregate", &aggregate, py::arg("best_so_far_traces"));

    // harness
    m.def(
        "run_from_config",
        [](const std::string& config_path, const std::string& out_dir, int jobs) {
            RunConfig config = parse_config_file(config_path);
            validate_config(config);
            py::gil_scoped_release release;
            run_experiments(config, out_dir, jobs);
        },
        py::arg("config_path"), py::arg("out_dir"), py::arg("jobs") = 1);
}
