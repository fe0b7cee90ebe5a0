#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "commands.hpp"
#include "et14/coeffs.hpp"
#include "et14/family.hpp"
#include "et14/io.hpp"
#include "et14/kinetic.hpp"
#include "et14/potentials.hpp"
#include "et14/verify.hpp"

namespace py = pybind11;
using namespace et14;

namespace {

// Structured values cross the boundary as plain dicts/lists with the same
// schema as the CLI's JSON output.
py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_py(const py::handle& obj) {
  return Json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

EquilibriumPoint point(double lambda, double lambda_ll, double lambda_ppqq) {
  return {lambda, lambda_ll, lambda_ppqq};
}

cli::FamilySpec family_spec(const std::string& name, double amplitude, double scale, int s_max) {
  cli::FamilySpec spec;
  spec.name = name;
  spec.params.amplitude = amplitude;
  spec.params.scale = scale;
  spec.params.s_max = s_max;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Arbitrary-order closure of the 14-moment system";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", error);
  py::register_exception<TruncationError>(m, "TruncationError", error);
  py::register_exception<FamilyError>(m, "FamilyError", error);
  py::register_exception<DecayError>(m, "DecayError", error);
  py::register_exception<AccuracyError>(m, "AccuracyError", error);
  py::register_exception<ParityError>(m, "ParityError", error);

  py::class_<GeneratingFamily>(m, "GeneratingFamily")
      .def_property_readonly("name", &GeneratingFamily::name)
      .def_property_readonly("s_max", &GeneratingFamily::s_max)
      .def_property_readonly("n_max", &GeneratingFamily::n_max)
      .def("member", &GeneratingFamily::member, py::arg("s"), py::arg("n"), py::arg("lambda_"))
      .def("ktilde", &GeneratingFamily::ktilde, py::arg("s"), py::arg("lambda_"))
      .def("__repr__",
           [](const GeneratingFamily& f) { return "<GeneratingFamily " + f.name() + ">"; });

  m.def(
      "family",
      [](const std::string& name, double amplitude, double scale, int s_max) {
        return cli::build_family(family_spec(name, amplitude, scale, s_max), {});
      },
      py::arg("name") = "exponential", py::arg("amplitude") = 1.0, py::arg("scale") = 1.0,
      py::arg("s_max") = 12,
      "Built-in family: exponential, poly-exponential, kinetic or faulty-exponential.");
  m.def(
      "custom_family",
      [](const std::string& name, std::function<double(int, int, double)> member, int s_max,
         int n_max) {
        return GeneratingFamily::checked(name, FamilyKind::kCustom, std::move(member), s_max,
                                         n_max);
      },
      py::arg("name"), py::arg("member"), py::arg("s_max"), py::arg("n_max"),
      "Family from member(s, n, lambda) = d^n ktilde_s / dlambda^n; runs the ladder gate.");
  m.def("ladder_residual", &ladder_residual, py::arg("family"), py::arg("s"), py::arg("lambda_"));

  m.def(
      "k_pq",
      [](const GeneratingFamily& f, int p, int q, double lambda, double lambda_ll,
         double lambda_ppqq, int S) { return k_pq(f, p, q, point(lambda, lambda_ll, lambda_ppqq), S); },
      py::arg("family"), py::arg("p"), py::arg("q"), py::arg("lambda_") = 0.0,
      py::arg("lambda_ll") = 1.0, py::arg("lambda_ppqq") = 0.0, py::arg("S") = 4);
  m.def(
      "h_pqr",
      [](const GeneratingFamily& f, int p, int q, int r, double lambda, double lambda_ll,
         double lambda_ppqq, int S) {
        return h_pqr(f, {p, q, r, S}, point(lambda, lambda_ll, lambda_ppqq));
      },
      py::arg("family"), py::arg("p"), py::arg("q"), py::arg("r"), py::arg("lambda_") = 0.0,
      py::arg("lambda_ll") = 1.0, py::arg("lambda_ppqq") = 0.0, py::arg("S") = 4);
  m.def(
      "phi_pqr",
      [](const GeneratingFamily& f, int p, int q, int r, double lambda, double lambda_ll,
         double lambda_ppqq, int S) {
        return phi_pqr(f, {p, q, r, S}, point(lambda, lambda_ll, lambda_ppqq));
      },
      py::arg("family"), py::arg("p"), py::arg("q"), py::arg("r"), py::arg("lambda_") = 0.0,
      py::arg("lambda_ll") = 1.0, py::arg("lambda_ppqq") = 0.0, py::arg("S") = 4);
  m.def(
      "k00",
      [](const GeneratingFamily& f, double lambda, double lambda_ll, double lambda_ppqq, int S) {
        return k00(f, point(lambda, lambda_ll, lambda_ppqq), S);
      },
      py::arg("family"), py::arg("lambda_") = 0.0, py::arg("lambda_ll") = 1.0,
      py::arg("lambda_ppqq") = 0.0, py::arg("S") = 4);
  m.def(
      "reduce_to_13",
      [](const GeneratingFamily& f, int q_max, double lambda) {
        const SubsystemTable t = reduce_to_13(f, q_max, lambda);
        return py::make_tuple(t.I, t.c);
      },
      py::arg("family"), py::arg("q_max"), py::arg("lambda_") = 0.0,
      "Returns ({q: I_q}, {q: c_q}).");

  m.def(
      "eval_potentials",
      [](const GeneratingFamily& f, const py::dict& state, int N, int S) {
        const MultiplierState s = state_from_json(from_py(state));
        PotentialPair p{eval_h_hat(f, s, N, S), eval_phi_hat(f, s, N, S), N, S};
        return to_py(to_json(p));
      },
      py::arg("family"), py::arg("state"), py::arg("N") = 6, py::arg("S") = 4);
  m.def(
      "moments",
      [](const GeneratingFamily& f, const py::dict& state, int N, int S) {
        return to_py(to_json(moments_from_potentials(f, state_from_json(from_py(state)), N, S)));
      },
      py::arg("family"), py::arg("state"), py::arg("N") = 6, py::arg("S") = 4);
  m.def(
      "hat_multipliers",
      [](const py::dict& lab, const Vec3& v) {
        return to_py(to_json(hat_multipliers(state_from_json(from_py(lab)), {v})));
      },
      py::arg("lab_state"), py::arg("v"));
  m.def(
      "lab_potentials",
      [](const GeneratingFamily& f, const py::dict& lab, const Vec3& v, int N, int S) {
        return to_py(to_json(lab_potentials(f, state_from_json(from_py(lab)), {v}, N, S)));
      },
      py::arg("family"), py::arg("lab_state"), py::arg("v"), py::arg("N") = 6,
      py::arg("S") = 4);
  m.def(
      "lab_moments_from_rest",
      [](const py::dict& rest, const Vec3& v) {
        return to_py(to_json(lab_moments_from_rest(moments_from_json(from_py(rest)), {v})));
      },
      py::arg("rest_moments"), py::arg("v"));

  m.def(
      "kinetic_kpq",
      [](const std::string& kernel, int p, int q, double lambda, double lambda_ll,
         double lambda_ppqq) {
        const auto k = cli::family_kernel(family_spec(kernel, 1.0, 1.0, 12));
        if (!k) throw Error("no kinetic kernel for \"" + kernel + "\"");
        return kinetic_kpq(*k, p, q, point(lambda, lambda_ll, lambda_ppqq), {});
      },
      py::arg("kernel"), py::arg("p"), py::arg("q"), py::arg("lambda_") = 0.0,
      py::arg("lambda_ll") = 1.0, py::arg("lambda_ppqq") = 0.0,
      "Velocity-integral k_pq for the kernel of a built-in family.");

  m.def(
      "verify",
      [](const std::string& family, int N, int S, std::uint64_t seed) {
        const cli::FamilySpec spec = family_spec(family, 1.0, 1.0, 12);
        VerifyConfig vc;
        vc.N = N;
        vc.S = S;
        vc.points.seed = seed;
        vc.kernel = cli::family_kernel(spec);
        return to_py(to_json(run_all(cli::build_family(spec, vc.quadrature), vc)));
      },
      py::arg("family") = "exponential", py::arg("N") = 6, py::arg("S") = 4,
      py::arg("seed") = 0, "Runs the full verification suite; returns the report as a dict.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"et14"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
