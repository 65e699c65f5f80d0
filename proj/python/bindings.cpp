#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "jetcheck/analysis.hpp"
#include "jetcheck/conditions.hpp"
#include "jetcheck/config.hpp"
#include "jetcheck/functionals.hpp"
#include "jetcheck/parser.hpp"
#include "jetcheck/perturbation.hpp"
#include "jetcheck/report.hpp"
#include "jetcheck/sampling.hpp"
#include "jetcheck/sigma.hpp"

namespace py = pybind11;
using namespace jetcheck;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

ConditionTag tag_of(const std::string& name) {
  const auto tag = parse_condition_tag(name);
  if (!tag) throw InputError("unknown condition '" + name + "'");
  return *tag;
}

SigmaSet zero_set(const std::vector<std::string>& equations, std::size_t n) {
  std::vector<RealPolynomial> polys;
  for (const auto& e : equations) polys.push_back(parse_polynomial(e, n).cast<double>());
  return SigmaSet::polynomial_zero_set(std::move(polys));
}

}  // namespace

PYBIND11_MODULE(_jetcheck, m) {
  m.doc() = "Relative jet sufficiency checks for polynomial map germs";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "JetcheckError", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<CapabilityError>(m, "CapabilityError", base.ptr());
  py::register_exception<EstimationError>(m, "EstimationError", base.ptr());

  py::class_<PolyMap>(m, "PolyMap")
      .def(py::init([](const std::vector<std::string>& components, std::optional<std::size_t> n) {
             std::size_t dim = n.value_or(0);
             if (!n)
               for (const auto& c : components) dim = std::max(dim, max_variable_index(c));
             return parse_map(components, dim);
           }),
           py::arg("components"), py::arg("n") = py::none())
      .def_property_readonly("n", &PolyMap::n)
      .def_property_readonly("p", &PolyMap::p)
      .def("__call__", [](const PolyMap& f, const Eigen::VectorXd& x) { return eval_map(f, x); })
      .def("jacobian", [](const PolyMap& f, const Eigen::VectorXd& x) { return jacobian(f, x).matrix(); })
      .def("__str__", &PolyMap::to_string)
      .def("__repr__", [](const PolyMap& f) { return "PolyMap('" + f.to_string() + "')"; });

  m.def("kuo_distance", [](const Eigen::MatrixXd& t) { return kuo_distance(LinearMap(t)); });
  m.def("rabier_nu", [](const Eigen::MatrixXd& t) { return rabier_nu(LinearMap(t)); });
  m.def("eta", [](const Eigen::MatrixXd& t) { return eta(LinearMap(t)); });
  m.def("eta_tilde", [](const Eigen::MatrixXd& t) { return eta_tilde(LinearMap(t)); });
  m.def("gram_ratio", [](const Eigen::MatrixXd& t) { return gram_ratio(LinearMap(t)); });
  m.def("dual_apply", [](const Eigen::MatrixXd& t, const Eigen::VectorXd& y) { return dual_apply(LinearMap(t), y); });
  m.def("gram_det", &gram_det, py::arg("vectors"), "Gram determinant of the columns.");
  m.def("jacobian_minor_sum", &jacobian_minor_sum, py::arg("f"), py::arg("x"));

  py::class_<SigmaSet>(m, "Sigma")
      .def_static("origin", &SigmaSet::origin, py::arg("n"))
      .def_static("linear_subspace", &SigmaSet::linear_subspace, py::arg("spanning"))
      .def_static("zero_set", &zero_set, py::arg("equations"), py::arg("n"))
      .def_property_readonly("n", &SigmaSet::ambient_dim)
      .def_property_readonly("is_linear", &SigmaSet::is_linear)
      .def("distance", [](const SigmaSet& s, const Eigen::VectorXd& x) { return distance_to_sigma(s, x); });

  py::class_<ShellSample>(m, "ShellSample")
      .def_readonly("alpha", &ShellSample::alpha)
      .def_readonly("seed", &ShellSample::seed)
      .def("__len__", &ShellSample::size)
      .def_property_readonly("shell_count", [](const ShellSample& s) { return s.shells.size(); })
      .def("points", [](const ShellSample& s, std::size_t k) {
        if (k >= s.shells.size()) throw py::index_error("shell index out of range");
        const auto& pts = s.shells[k].points;
        Eigen::MatrixXd out(static_cast<Eigen::Index>(pts.size()), pts.empty() ? 0 : pts.front().x.size());
        for (std::size_t i = 0; i < pts.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = pts[i].x.transpose();
        return out;
      }, py::arg("shell"));

  m.def("sample_shells",
        py::overload_cast<const SigmaSet&, double, int, int, std::uint64_t>(&sample_shells),
        py::arg("sigma"), py::arg("alpha") = 0.5, py::arg("shells") = 12, py::arg("points_per_shell") = 512,
        py::arg("seed") = 1);

  py::class_<Thresholds>(m, "Thresholds")
      .def(py::init<>())
      .def_readwrite("slope_tol", &Thresholds::slope_tol)
      .def_readwrite("delta_floor", &Thresholds::delta_floor)
      .def_readwrite("margin_floor", &Thresholds::margin_floor)
      .def_readwrite("rank_tol", &Thresholds::rank_tol)
      .def_readwrite("containment_tol", &Thresholds::containment_tol)
      .def_readwrite("min_r2", &Thresholds::min_r2)
      .def_readwrite("w_bar", &Thresholds::w_bar)
      .def_readwrite("refine_per_shell", &Thresholds::refine_per_shell)
      .def_readwrite("refine_evaluations", &Thresholds::refine_evaluations)
      .def_readwrite("max_witnesses", &Thresholds::max_witnesses);

  m.def(
      "check",
      [](const std::string& condition, const PolyMap& f, const SigmaSet& sigma, int r, const ShellSample& sample,
         std::optional<Thresholds> th, std::vector<double> amplitudes) {
        const ConditionTag tag = tag_of(condition);
        std::optional<PerturbationFamily> family;
        if (tag == ConditionTag::KDelta || tag == ConditionTag::KTildeDelta)
          family = make_perturbation_family(f, sigma, r, amplitudes);
        ConditionVerdict v;
        {
          py::gil_scoped_release release;
          v = run_check(tag, f, sigma, r, sample, th.value_or(Thresholds{}), family);
        }
        return to_python(verdict_to_json(v));
      },
      py::arg("condition"), py::arg("f"), py::arg("sigma"), py::arg("r"), py::arg("sample"),
      py::arg("thresholds") = py::none(), py::arg("amplitudes") = std::vector<double>{-1.0, 1.0},
      "Run one condition and return the verdict as a dict.");

  py::class_<AnalysisReport>(m, "Report")
      .def_property_readonly("exit_code", &AnalysisReport::exit_code)
      .def("to_dict", [](const AnalysisReport& r) { return to_python(report_to_json(r)); })
      .def("emit", [](const AnalysisReport& r, const std::string& format) {
        return emit_report(r, parse_report_format(format));
      }, py::arg("format") = "json")
      .def("write", [](const AnalysisReport& r, const std::filesystem::path& path, const std::string& format) {
        write_report(r, parse_report_format(format), path);
      }, py::arg("path"), py::arg("format") = "json");

  m.def(
      "analyze",
      [](const std::string& text) {
        const ProblemConfig cfg = parse_config(text);
        py::gil_scoped_release release;
        return run_analysis(cfg);
      },
      py::arg("config"), "Run the full pipeline on a YAML or JSON configuration string.");
  m.def(
      "analyze_file",
      [](const std::filesystem::path& path) {
        const ProblemConfig cfg = load_config(path);
        py::gil_scoped_release release;
        return run_analysis(cfg);
      },
      py::arg("path"));
}
