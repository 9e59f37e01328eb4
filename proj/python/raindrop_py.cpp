#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "raindrop/analysis.hpp"
#include "raindrop/engine.hpp"
#include "raindrop/objectives.hpp"
#include "raindrop/oracle.hpp"

namespace py = pybind11;
using namespace raindrop;

namespace {

// Wraps a Python callable taking a list of floats. The engine may call it
// from worker threads with the GIL released, so take it back per call.
Objective from_callable(std::string name, std::size_t arity, py::function fn)
{
    auto shared = std::make_shared<py::function>(std::move(fn));
    auto holder = std::shared_ptr<py::function>(shared.get(), [shared](py::function*) mutable {
        py::gil_scoped_acquire gil;
        shared.reset();
    });
    return Objective(std::move(name), arity, [holder](std::span<const double> x) {
        py::gil_scoped_acquire gil;
        return (*holder)(std::vector<double>(x.begin(), x.end())).cast<double>();
    });
}

// Objective plus domain resolved from either a registered name or a callable.
struct Problem {
    Objective objective;
    BoxDomain domain;
};

Problem resolve(const py::object& objective, std::size_t dim, const std::optional<Point>& lower,
                const std::optional<Point>& upper)
{
    if (lower.has_value() != upper.has_value())
        throw std::invalid_argument("lower and upper must be given together");
    if (py::isinstance<py::str>(objective)) {
        ObjectiveSpec spec = lookup(objective.cast<std::string>(), lower ? lower->size() : dim);
        return {spec.objective, lower ? BoxDomain(*lower, *upper) : spec.default_domain};
    }
    if (py::isinstance<Objective>(objective)) {
        if (!lower)
            throw std::invalid_argument("an Objective needs lower and upper bounds");
        auto f = objective.cast<Objective>();
        return {f, BoxDomain(*lower, *upper)};
    }
    if (!PyCallable_Check(objective.ptr()))
        throw std::invalid_argument("objective must be a name, an Objective or a callable");
    if (!lower)
        throw std::invalid_argument("a callable objective needs lower and upper bounds");
    BoxDomain domain(*lower, *upper);
    return {from_callable("python", domain.dimension(), objective.cast<py::function>()), domain};
}

} // namespace

PYBIND11_MODULE(pyraindrop, m)
{
    m.doc() = "Raindrop derivative-free optimizer";

    py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

    py::class_<BoxDomain>(m, "BoxDomain")
        .def(py::init<Point, Point>(), py::arg("lower"), py::arg("upper"))
        .def_static("cube", &BoxDomain::cube, py::arg("n"), py::arg("lower"), py::arg("upper"))
        .def_property_readonly("dimension", &BoxDomain::dimension)
        .def_property_readonly("lower", &BoxDomain::lower)
        .def_property_readonly("upper", &BoxDomain::upper)
        .def_property_readonly("measure", &BoxDomain::measure)
        .def("contains", [](const BoxDomain& b, const Point& x) { return b.contains(x); })
        .def("__eq__", [](const BoxDomain& a, const BoxDomain& b) { return a == b; });

    py::class_<Objective>(m, "Objective")
        .def(py::init(&from_callable), py::arg("name"), py::arg("arity"), py::arg("fn"))
        .def_property_readonly("name", &Objective::name)
        .def_property_readonly("arity", &Objective::arity)
        .def("__call__", [](const Objective& f, const Point& x) { return f(x); });

    py::class_<KnownOptimum>(m, "KnownOptimum")
        .def_readonly("point", &KnownOptimum::point)
        .def_readonly("value", &KnownOptimum::value);

    py::class_<ObjectiveSpec>(m, "ObjectiveSpec")
        .def_readonly("objective", &ObjectiveSpec::objective)
        .def_readonly("default_domain", &ObjectiveSpec::default_domain)
        .def_readonly("known_optimum", &ObjectiveSpec::known_optimum)
        .def_property_readonly("name", &ObjectiveSpec::name)
        .def_property_readonly("dimension", &ObjectiveSpec::dimension);

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init([](std::size_t n, double v0, double epsilon, std::size_t max_iterations,
                         std::uint64_t seed) { return RunConfig{n, v0, epsilon, max_iterations, seed}; }),
             py::arg("n_raindrops") = 30, py::arg("v0") = 1.0, py::arg("epsilon") = 1e-3,
             py::arg("max_iterations") = 10000, py::arg("seed") = 0)
        .def_readwrite("n_raindrops", &RunConfig::n_raindrops)
        .def_readwrite("v0", &RunConfig::v0)
        .def_readwrite("epsilon", &RunConfig::epsilon)
        .def_readwrite("max_iterations", &RunConfig::max_iterations)
        .def_readwrite("seed", &RunConfig::seed)
        .def("validate", &RunConfig::validate);

    py::class_<Raindrop>(m, "Raindrop")
        .def_readonly("position", &Raindrop::position)
        .def_readonly("speed", &Raindrop::speed)
        .def_readonly("halvings", &Raindrop::halvings);

    py::class_<Direction>(m, "Direction")
        .def_readonly("axis", &Direction::axis)
        .def_readonly("sign", &Direction::sign)
        .def("__repr__", [](const Direction& d) {
            return std::string(d.sign > 0 ? "+" : "-") + "e" + std::to_string(d.axis);
        });

    py::class_<IterationTrace>(m, "IterationTrace")
        .def_readonly("iteration", &IterationTrace::iteration)
        .def_readonly("velocity_l2", &IterationTrace::velocity_l2)
        .def_readonly("best_f", &IterationTrace::best_f)
        .def_readonly("best_x", &IterationTrace::best_x);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("final_raindrops", &RunResult::final_raindrops)
        .def_readonly("trace", &RunResult::trace)
        .def_readonly("global_best_x", &RunResult::global_best_x)
        .def_readonly("global_best_f", &RunResult::global_best_f)
        .def_readonly("iterations_used", &RunResult::iterations_used)
        .def_readonly("converged", &RunResult::converged);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init([](std::size_t resolution, std::size_t max_evaluations) {
                 return GridSpec{resolution, max_evaluations};
             }),
             py::arg("resolution") = 201, py::arg("max_evaluations") = 10'000'000)
        .def_readwrite("resolution", &GridSpec::resolution)
        .def_readwrite("max_evaluations", &GridSpec::max_evaluations);

    py::class_<GridMinimum>(m, "GridMinimum")
        .def_readonly("point", &GridMinimum::point)
        .def_readonly("value", &GridMinimum::value);

    py::class_<VicinityMeasure>(m, "VicinityMeasure")
        .def_readonly("t_measure", &VicinityMeasure::t_measure)
        .def_readonly("s_measure", &VicinityMeasure::s_measure)
        .def_readonly("ratio", &VicinityMeasure::ratio);

    py::class_<SuccessEstimate>(m, "SuccessEstimate")
        .def_readonly("trials", &SuccessEstimate::trials)
        .def_readonly("successes", &SuccessEstimate::successes)
        .def_readonly("rate", &SuccessEstimate::rate)
        .def_readonly("tolerance", &SuccessEstimate::tolerance)
        .def_property_readonly("standard_error", &SuccessEstimate::standard_error);

    py::class_<LocalOptimum>(m, "LocalOptimum")
        .def_readonly("point", &LocalOptimum::point)
        .def_readonly("value", &LocalOptimum::value)
        .def_readonly("multiplicity", &LocalOptimum::multiplicity);

    m.def("available_objectives", &available_objectives);
    m.def("lookup", &lookup, py::arg("name"), py::arg("dimension") = 2);
    m.def("sinc2d", [](double x, double y) { return sinc2d(std::vector<double>{x, y}); });
    m.def("candidate_directions", &candidate_directions, py::arg("n"));
    m.def("default_initial_speed", &default_initial_speed, py::arg("domain"));

    m.def(
        "run",
        [](const py::object& objective, std::size_t n_raindrops, std::optional<double> v0, double epsilon,
           std::size_t max_iterations, std::uint64_t seed, std::size_t dim, std::optional<Point> lower,
           std::optional<Point> upper, unsigned threads) {
            const Problem p = resolve(objective, dim, lower, upper);
            RunConfig config{n_raindrops, v0.value_or(default_initial_speed(p.domain)), epsilon, max_iterations,
                             seed};
            RunOptions options;
            options.threads = threads;
            py::gil_scoped_release release;
            return run(config, p.objective, p.domain, options);
        },
        py::arg("objective"), py::arg("n_raindrops") = 30, py::arg("v0") = py::none(),
        py::arg("epsilon") = 1e-3, py::arg("max_iterations") = 10000, py::arg("seed") = 0, py::arg("dim") = 2,
        py::arg("lower") = py::none(), py::arg("upper") = py::none(), py::arg("threads") = 1,
        "Minimize a registered objective (by name), an Objective or a Python callable. "
        "v0 defaults to a quarter of the longest box side.");

    m.def("theoretical_success_probability",
          py::overload_cast<double, std::size_t>(&theoretical_success_probability), py::arg("ratio"),
          py::arg("n_raindrops"));
    m.def("empirical_success_probability", &empirical_success_probability, py::arg("config"), py::arg("spec"),
          py::arg("trials"), py::arg("success_radius"), py::arg("master_seed"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("expected_halvings", &expected_halvings, py::arg("v0"), py::arg("epsilon"), py::arg("n_raindrops"));
    m.def("default_cluster_radius", &default_cluster_radius, py::arg("epsilon"), py::arg("dimension"));
    m.def(
        "cluster_local_optima",
        [](const std::vector<Raindrop>& drops, const Objective& f, double radius) {
            py::gil_scoped_release release;
            return cluster_local_optima(drops, f, radius);
        },
        py::arg("drops"), py::arg("objective"), py::arg("radius"));

    m.def("grid_search", &grid_search, py::arg("objective"), py::arg("domain"), py::arg("grid") = GridSpec{},
          py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
    m.def("basin_measure_estimate", &basin_measure_estimate, py::arg("spec"), py::arg("config"),
          py::arg("grid") = GridSpec{}, py::arg("success_radius") = 0.1, py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
}
