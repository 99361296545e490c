#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "coverwalk/acceptance.hpp"
#include "coverwalk/chain.hpp"
#include "coverwalk/cli.hpp"
#include "coverwalk/concentration.hpp"
#include "coverwalk/decompose.hpp"
#include "coverwalk/dynamics.hpp"
#include "coverwalk/errors.hpp"
#include "coverwalk/functional.hpp"
#include "coverwalk/json_io.hpp"
#include "coverwalk/measure.hpp"
#include "coverwalk/negdep.hpp"

namespace py = pybind11;
using namespace coverwalk;

namespace {

// Reports cross the boundary as plain Python objects mirroring the JSON
// documents the CLI prints, so both interfaces answer identically.
py::object to_py(const Json& v) {
    switch (v.type()) {
        case Json::value_t::object: {
            py::dict d;
            for (auto it = v.begin(); it != v.end(); ++it)
                d[py::str(it.key())] = to_py(it.value());
            return d;
        }
        case Json::value_t::array: {
            py::list l;
            for (const auto& e : v) l.append(to_py(e));
            return l;
        }
        case Json::value_t::string:
            return py::str(v.get<std::string>());
        case Json::value_t::boolean:
            return py::bool_(v.get<bool>());
        case Json::value_t::number_integer:
            return py::int_(v.get<long long>());
        case Json::value_t::number_unsigned:
            return py::int_(v.get<unsigned long long>());
        case Json::value_t::number_float:
            return py::float_(v.get<double>());
        default:
            return py::none();
    }
}

Json from_py(const py::object& obj) {
    if (py::isinstance<py::str>(obj))
        return parse_json(obj.cast<std::string>(), "python document");
    py::object dumps = py::module_::import("json").attr("dumps");
    return parse_json(dumps(obj).cast<std::string>(), "python document");
}

int start_index(const Generator& g, const std::optional<std::string>& start) {
    if (!start) {
        int best = 0;
        const BooleanMeasure& m = g.measure();
        for (int i = 1; i < m.size(); ++i)
            if (m.weight(i) < m.weight(best)) best = i;
        return best;
    }
    int i = g.measure().index_of(BitVector::from_string(*start));
    if (i < 0) throw InputError("state " + *start + " is not in the support");
    return i;
}

SobolevKind sobolev_kind(const std::string& kind) {
    if (kind == "mlsi") return SobolevKind::Mlsi;
    if (kind == "lsi") return SobolevKind::Lsi;
    throw InputError("unknown estimate kind '" + kind + "' (mlsi or lsi)");
}

Target target_of(const std::string& name) {
    if (name == "lambda") return Target::Lambda;
    if (name == "alpha") return Target::Alpha;
    if (name == "rho") return Target::Rho;
    throw InputError("unknown target '" + name + "' (lambda, alpha or rho)");
}

}  // namespace

PYBIND11_MODULE(coverwalk, m) {
    m.doc() = "functional inequalities for reversible walks on the boolean lattice";

    // mirrors of the C++ error taxonomy; subclasses registered last match first
    static py::exception<Error> base(m, "Error");
    py::register_exception<InputError>(m, "InputError", base);
    py::register_exception<ValidationError>(m, "ValidationError", base);
    py::register_exception<DomainError>(m, "DomainError", base);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", base);
    py::register_exception<EstimationError>(m, "EstimationError", base);

    py::class_<BooleanMeasure>(m, "Measure")
        .def_static(
            "from_document",
            [](const py::object& doc) { return measure_from_json(from_py(doc)); },
            py::arg("doc"),
            "Build from a measure document (dict or JSON text).")
        .def_property_readonly("n", &BooleanMeasure::dim)
        .def_property_readonly("size", &BooleanMeasure::size)
        .def_property_readonly("exact", &BooleanMeasure::is_exact)
        .def_property_readonly("homogeneity",
                               [](const BooleanMeasure& mm) -> py::object {
                                   if (auto k = mm.homogeneity()) return py::int_(*k);
                                   return py::none();
                               })
        .def("states",
             [](const BooleanMeasure& mm) {
                 std::vector<std::string> out;
                 for (const auto& x : mm.support()) out.push_back(x.to_string());
                 return out;
             })
        .def("weights", [](const BooleanMeasure& mm) { return mm.weights(); })
        .def("to_document",
             [](const BooleanMeasure& mm) { return to_py(measure_to_json(mm)); })
        .def("__repr__", [](const BooleanMeasure& mm) {
            return "<Measure n=" + std::to_string(mm.dim()) + " states=" +
                   std::to_string(mm.size()) + ">";
        });

    py::class_<Generator>(m, "Walk")
        .def_property_readonly("measure", &Generator::measure)
        .def_property_readonly("size", &Generator::size)
        .def_property_readonly("exact", &Generator::is_exact)
        .def("rate", &Generator::rate, py::arg("i"), py::arg("j"))
        .def("to_document",
             [](const Generator& g) { return to_py(generator_to_json(g)); })
        .def("__repr__", [](const Generator& g) {
            return "<Walk states=" + std::to_string(g.size()) + ">";
        });

    m.def(
        "condition",
        [](const BooleanMeasure& mm, const std::map<int, int>& assignment) {
            ConditionResult r = condition(mm, assignment);
            return py::make_tuple(r.measure, r.kept);
        },
        py::arg("measure"), py::arg("assignment"),
        "Condition on coordinate assignments; returns (measure, kept).");

    m.def(
        "split",
        [](const BooleanMeasure& mm, int coordinate) {
            SplitResult s = split(mm, coordinate);
            return py::make_tuple(py::make_tuple(s.pibar[0], s.pibar[1]), s.block0,
                                  s.block1);
        },
        py::arg("measure"), py::arg("coordinate"),
        "Two-block split; returns (pibar, block0, block1).");

    m.def(
        "scp_check",
        [](const BooleanMeasure& mm, const std::string& mode, std::uint64_t seed,
           long samples) {
            ScpOptions opts;
            if (mode == "sampled")
                opts.mode = ScpMode::Sampled;
            else if (mode != "full")
                throw InputError("mode must be 'full' or 'sampled'");
            opts.seed = seed;
            opts.samples = samples;
            return to_py(scp_to_json(check_scp(mm, opts)));
        },
        py::arg("measure"), py::arg("mode") = "full", py::arg("seed") = 0,
        py::arg("samples") = 10000);

    m.def("walk_mcmc", &build_mcmc, py::arg("measure"));
    m.def("walk_bases_exchange", &build_bases_exchange, py::arg("measure"));
    m.def(
        "walk_synthesize",
        [](const BooleanMeasure& mm) {
            SynthesisResult s = synthesize_flip_swap(mm);
            if (!s.normalized)
                throw DomainError("the synthesized walk is identically zero");
            return *s.normalized;
        },
        py::arg("measure"), "The normalized walk assembled by the split recursion.");
    m.def(
        "synthesize",
        [](const BooleanMeasure& mm) { return to_py(synthesis_to_json(synthesize_flip_swap(mm))); },
        py::arg("measure"), "Full synthesis report with per-node audits.");

    m.def("stats",
          [](const Generator& g) { return to_py(stats_to_json(validate(g))); },
          py::arg("walk"));

    m.def(
        "spectral_gap",
        [](const Generator& g) { return to_py(estimate_to_json(poincare_exact(g))); },
        py::arg("walk"));

    m.def(
        "sobolev_estimate",
        [](const Generator& g, const std::string& kind, int restarts,
           std::uint64_t seed) {
            EstimateOptions opts;
            opts.restarts = restarts;
            opts.seed = seed;
            return to_py(estimate_to_json(sobolev_estimate(g, sobolev_kind(kind), opts)));
        },
        py::arg("walk"), py::arg("kind"), py::arg("restarts") = 32,
        py::arg("seed") = 0);

    m.def(
        "two_state",
        [](double a, double b) { return to_py(two_state_to_json(two_state_constants(a, b))); },
        py::arg("a"), py::arg("b"));

    m.def(
        "certify",
        [](const Generator& g, const std::string& target) {
            return to_py(certificate_to_json(certify_main(g, target_of(target))));
        },
        py::arg("walk"), py::arg("target") = "lambda");

    m.def(
        "forms",
        [](const Generator& g, const Observable& f) {
            return to_py(forms_to_json(evaluate_forms(g, f)));
        },
        py::arg("walk"), py::arg("observable"));

    m.def(
        "evolve",
        [](const Generator& g, const std::optional<std::string>& start, double t) {
            return evolve(g, start_index(g, start), t);
        },
        py::arg("walk"), py::arg("start"), py::arg("t"));

    m.def("tv", &tv, py::arg("mu"), py::arg("nu"));

    m.def(
        "mixing_time",
        [](const Generator& g, const std::optional<std::string>& start, double epsilon) {
            return mixing_time(g, start_index(g, start), epsilon);
        },
        py::arg("walk"), py::arg("start") = py::none(), py::arg("epsilon") = 0.25);

    m.def(
        "mixing_report",
        [](const Generator& g, const std::optional<std::string>& start, double epsilon) {
            return to_py(mixing_to_json(mixing_report(g, start_index(g, start), epsilon)));
        },
        py::arg("walk"), py::arg("start") = py::none(), py::arg("epsilon") = 0.25);

    m.def(
        "mixing_bound",
        [](const std::string& kind, double constant, double pi_x, double epsilon) {
            BoundKind k;
            if (kind == "pi")
                k = BoundKind::Pi;
            else if (kind == "mlsi")
                k = BoundKind::Mlsi;
            else
                throw InputError("kind must be 'pi' or 'mlsi'");
            BoundReport b = mixing_bound(k, constant, pi_x, epsilon);
            py::dict out;
            out["value"] = b.value;
            out["floored"] = b.floored;
            return out;
        },
        py::arg("kind"), py::arg("constant"), py::arg("pi_x"),
        py::arg("epsilon") = 0.25);

    m.def(
        "herbst",
        [](const Generator& g, const Observable& f, double alpha_lb) {
            return to_py(tail_to_json(herbst_check(g, f, alpha_lb)));
        },
        py::arg("walk"), py::arg("observable"), py::arg("alpha"));

    m.def(
        "pemantle_peres",
        [](const BooleanMeasure& mm, const Observable& f) {
            return to_py(tail_to_json(pemantle_peres_check(mm, f)));
        },
        py::arg("measure"), py::arg("observable"));

    m.def(
        "suite",
        [](const std::vector<int>& criteria, std::uint64_t seed) {
            return to_py(suite_to_json(run_suite(criteria, seed)));
        },
        py::arg("criteria") = std::vector<int>{}, py::arg("seed") = 0);

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            CommandResult r = dispatch(args);
            return py::make_tuple(r.exit_code, r.out, r.err);
        },
        py::arg("args"), "Run a CLI invocation in-process; returns (code, out, err).");
}
