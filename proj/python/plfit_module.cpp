#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "plfit/cli.hpp"
#include "plfit/dataset.hpp"
#include "plfit/errors.hpp"
#include "plfit/estimation.hpp"
#include "plfit/models.hpp"
#include "plfit/report.hpp"
#include "plfit/synthesis.hpp"

namespace py = pybind11;
using namespace plfit;

namespace {

py::object to_py(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Json from_py(const py::object& obj) {
  return Json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

LosProbParams los_params(const std::string& kind, std::optional<double> d1, std::optional<double> d2) {
  const LosModelKind k = parse_los_model_kind(kind);
  if (k == LosModelKind::uma_3gpp && !d1 && !d2) return LosProbParams::uma_3gpp();
  if (!d1 || !d2) throw py::value_error("d1 and d2 are required for LOS model " + kind);
  return LosProbParams::make(k, *d1, *d2);
}

std::pair<Dataset, std::vector<std::pair<std::size_t, std::string>>> to_result(ParseResult r) {
  std::vector<std::pair<std::size_t, std::string>> rejections;
  for (auto& rej : r.rejections) rejections.emplace_back(rej.line, std::move(rej.reason));
  return {std::move(r.dataset), std::move(rejections)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Large-scale path loss, LOS probability and shadow fading models";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<SingularDesignError>(m, "SingularDesignError", PyExc_ArithmeticError);
  py::register_exception<EmptyDatasetError>(m, "EmptyDatasetError", PyExc_ValueError);

  m.def("fspl_1m", [](double f) { return fspl_1m(Frequency(f)); }, py::arg("freq_ghz"));
  m.def("ci_path_loss",
        [](double f, double d, double ple) { return ci_path_loss(Frequency(f), Distance3D(d), {ple}); },
        py::arg("freq_ghz"), py::arg("distance_m"), py::arg("ple"));
  m.def("abg_path_loss",
        [](double f, double d, double a, double b, double g) {
          return abg_path_loss(Frequency(f), Distance3D(d), {a, b, g});
        },
        py::arg("freq_ghz"), py::arg("distance_m"), py::arg("alpha"), py::arg("beta"), py::arg("gamma"));
  m.def("fi_path_loss", [](double d, double a, double b) { return fi_path_loss(Distance3D(d), {a, b}); },
        py::arg("distance_m"), py::arg("alpha"), py::arg("beta"));
  m.def("ci_dual_path_loss",
        [](double f, double d, double n1, double n2, double d_th) {
          return ci_dual_path_loss(Frequency(f), Distance3D(d), {n1, n2, d_th});
        },
        py::arg("freq_ghz"), py::arg("distance_m"), py::arg("n1"), py::arg("n2"), py::arg("d_th"));
  m.def("fi_dual_path_loss",
        [](double d, double a1, double b1, double b2, double d_th) {
          return fi_dual_path_loss(Distance3D(d), {a1, b1, b2, d_th});
        },
        py::arg("distance_m"), py::arg("alpha1"), py::arg("beta1"), py::arg("beta2"), py::arg("d_th"));
  m.def("mean_path_loss",
        [](double f, double d, const py::dict& params) {
          return mean_path_loss(Frequency(f), Distance3D(d), path_loss_params_from_json(from_py(params)));
        },
        py::arg("freq_ghz"), py::arg("distance_m"), py::arg("params"));
  m.def("los_probability",
        [](double d, const std::string& kind, std::optional<double> d1, std::optional<double> d2) {
          return los_probability(d, los_params(kind, d1, d2));
        },
        py::arg("distance_m"), py::arg("kind"), py::arg("d1") = py::none(), py::arg("d2") = py::none());
  m.def("sf_line", [](double d, double a, double b) { return sf_line(Distance3D(d), {a, b}); },
        py::arg("distance_m"), py::arg("a"), py::arg("b"));
  m.def("derive_distance",
        [](const Point3& tx, const Point3& rx) { return derive_distance(tx, rx).meters(); },
        py::arg("tx"), py::arg("rx"));

  py::class_<Dataset>(m, "Dataset")
      .def("__len__", &Dataset::size)
      .def_property_readonly("source", [](const Dataset& d) { return d.metadata.source; })
      .def("distances", [](const Dataset& d) {
        std::vector<double> v;
        for (const auto& r : d.records) v.push_back(r.distance_3d.meters());
        return v;
      })
      .def("path_loss", [](const Dataset& d) {
        std::vector<double> v;
        for (const auto& r : d.records) v.push_back(r.path_loss_db);
        return v;
      })
      .def("frequencies", [](const Dataset& d) {
        std::vector<double> v;
        for (const auto& r : d.records) v.push_back(r.frequency.ghz());
        return v;
      })
      .def("los_flags", [](const Dataset& d) {
        std::vector<bool> v;
        for (const auto& r : d.records) v.push_back(r.los);
        return v;
      })
      .def("to_csv", [](const Dataset& d) {
        std::ostringstream out;
        serialize_csv(d, out);
        return out.str();
      });

  m.def("parse_csv",
        [](const std::string& text) {
          std::istringstream in(text);
          return to_result(parse_csv(in, "<string>"));
        },
        py::arg("text"), "Returns (Dataset, [(line, reason), ...]).");
  m.def("read_csv", [](const std::string& path) { return to_result(read_csv_file(path)); },
        py::arg("path"));
  m.def("partition", &partition, py::arg("dataset"));

  py::class_<FitReport>(m, "FitReport")
      .def_property_readonly("family", [](const FitReport& r) { return std::string(to_string(r.family())); })
      .def_property_readonly("params", [](const FitReport& r) {
        Json j = to_json(r.params);
        j.erase("model");
        return to_py(j);
      })
      .def_readonly("sigma", &FitReport::sigma)
      .def_readonly("n_samples", &FitReport::n_samples)
      .def_readonly("warnings", &FitReport::warnings)
      .def_property_readonly("residuals", [](const FitReport& r) {
        std::vector<std::pair<double, double>> v;
        for (const auto& e : r.residuals) v.emplace_back(e.distance_m, e.residual_db);
        return v;
      })
      .def("to_dict", [](const FitReport& r) { return to_py(to_json(r)); });

  m.def("fit", [](const Dataset& ds, const std::string& family) { return fit(ds, parse_model_family(family)); },
        py::arg("dataset"), py::arg("family"));

  py::class_<EmpiricalLosCurve>(m, "EmpiricalLosCurve")
      .def("__len__", [](const EmpiricalLosCurve& c) { return c.points.size(); })
      .def_property_readonly("points", [](const EmpiricalLosCurve& c) {
        std::vector<std::tuple<double, double, std::size_t>> v;
        for (const auto& p : c.points) v.emplace_back(p.distance_m, p.probability, p.support);
        return v;
      });

  m.def("empirical_los_curve", [](const Dataset& ds) {
    const auto samples = los_samples(ds);
    return empirical_los_curve(samples);
  }, py::arg("dataset"));
  m.def("fit_los_model",
        [](const EmpiricalLosCurve& curve, const std::string& kind) {
          return to_py(to_json(fit_los_model(curve, parse_los_model_kind(kind))));
        },
        py::arg("curve"), py::arg("kind"));
  m.def("shadow_fading_profile",
        [](const FitReport& report, double bin_width, const std::string& stat) {
          const auto profile = shadow_fading_profile(report, bin_width, parse_sf_statistic(stat));
          py::dict out = to_py(to_json(profile));
          std::vector<std::tuple<double, double, std::size_t>> bins;
          for (const auto& b : profile.bins) bins.emplace_back(b.center_m, b.magnitude_db, b.count);
          out["bins"] = bins;
          return out;
        },
        py::arg("report"), py::arg("bin_width") = 1.0, py::arg("stat") = "mean");

  m.def("generate_pathloss",
        [](const py::dict& spec) { return generate_pathloss(synth_spec_from_json(from_py(spec))); },
        py::arg("spec"));
  m.attr("GENERATOR") = std::string(kGeneratorName);

  m.def("run_cli",
        [](std::vector<std::string> args) {
          args.insert(args.begin(), std::string(cli::kToolName));
          std::ostringstream out, err;
          const int code = cli::run(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the plfit command line in-process; returns (exit_code, stdout, stderr).");

  m.attr("__version__") = std::string(cli::kToolVersion);
}
