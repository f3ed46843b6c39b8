#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "volclust/dvc.hpp"
#include "volclust/error.hpp"
#include "volclust/garch.hpp"
#include "volclust/ingest.hpp"
#include "volclust/io.hpp"
#include "volclust/surrogate.hpp"
#include "volclust/symbolize.hpp"

namespace py = pybind11;
using namespace volclust;

namespace {

py::array_t<double> to_array(std::span<const double> v) { return py::array_t<double>(v.size(), v.data()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Volatility clustering measurement, GARCH(1,1) tools and surrogate series";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<PipelineError>(m, "PipelineError", base.ptr());

  // ingest
  py::class_<PriceSeries>(m, "PriceSeries")
      .def(py::init<std::vector<std::string>, std::vector<double>>(), py::arg("timestamps"), py::arg("prices"))
      .def_property_readonly("timestamps", &PriceSeries::timestamps)
      .def_property_readonly("prices", [](const PriceSeries& p) { return to_array(p.prices()); })
      .def("__len__", &PriceSeries::size);

  py::class_<ReturnSeries>(m, "ReturnSeries")
      .def(py::init<std::vector<double>>(), py::arg("values"))
      .def_property_readonly("values", [](const ReturnSeries& r) { return to_array(r.values()); })
      .def_property_readonly("mean", &ReturnSeries::mean)
      .def_property_readonly("stdev", &ReturnSeries::stdev)
      .def("__len__", &ReturnSeries::size)
      .def("__getitem__", [](const ReturnSeries& r, std::size_t i) {
        if (i >= r.size()) throw py::index_error();
        return r[i];
      })
      .def("__eq__", [](const ReturnSeries& a, const ReturnSeries& b) { return a == b; })
      .def("to_csv", [](const ReturnSeries& r) {
        std::ostringstream out;
        write_returns_csv(out, r);
        return out.str();
      });

  m.def("load_prices", py::overload_cast<const std::filesystem::path&>(&load_prices), py::arg("path"));
  m.def(
      "load_prices_text",
      [](const std::string& text) {
        std::istringstream in(text);
        return load_prices(in);
      },
      py::arg("text"));
  m.def("compute_returns", &compute_returns, py::arg("prices"));
  m.def("standardize", &standardize, py::arg("returns"));

  // symbolize
  py::class_<BinningScheme>(m, "BinningScheme")
      .def(py::init<std::vector<double>>(), py::arg("edges"))
      .def_property_readonly("n_bins", &BinningScheme::n_bins)
      .def_property_readonly("edges", &BinningScheme::edges)
      .def_property_readonly("centers", &BinningScheme::centers)
      .def("symbol_of", &BinningScheme::symbol_of, py::arg("value"))
      .def("to_json", [](const BinningScheme& s) { return to_json(s).dump(); });

  py::class_<SymbolicSeries>(m, "SymbolicSeries")
      .def(py::init<std::vector<Symbol>, BinningScheme>(), py::arg("indices"), py::arg("scheme"))
      .def_property_readonly("indices", &SymbolicSeries::indices)
      .def_property_readonly("scheme", &SymbolicSeries::scheme)
      .def("__len__", &SymbolicSeries::size);

  m.def("build_bins", &build_bins, py::arg("returns"), py::arg("n_bins") = 41, py::arg("clip_sigmas") = 3.0);
  m.def("symbolize", &symbolize, py::arg("returns"), py::arg("scheme"));
  m.def("symbol_value", &symbol_value, py::arg("scheme"), py::arg("index"));

  // dvc
  py::class_<AnalysisConfig>(m, "AnalysisConfig")
      .def(py::init([](int n_bins, double clip_sigmas, std::int64_t min_count, bool standardize_first) {
             AnalysisConfig c{n_bins, clip_sigmas, min_count, standardize_first};
             c.validate();
             return c;
           }),
           py::arg("n_bins") = 41, py::arg("clip_sigmas") = 3.0, py::arg("min_count") = 100,
           py::arg("standardize_first") = true)
      .def_readwrite("n_bins", &AnalysisConfig::n_bins)
      .def_readwrite("clip_sigmas", &AnalysisConfig::clip_sigmas)
      .def_readwrite("min_count", &AnalysisConfig::min_count)
      .def_readwrite("standardize_first", &AnalysisConfig::standardize_first);

  py::class_<ConditionalDistribution>(m, "ConditionalDistribution")
      .def_readonly("conditioning_symbol", &ConditionalDistribution::conditioning_symbol)
      .def_readonly("probabilities", &ConditionalDistribution::probabilities)
      .def_readonly("support_count", &ConditionalDistribution::support_count);

  py::class_<ProfilePoint>(m, "ProfilePoint")
      .def(py::init<double, double, std::int64_t>(), py::arg("s_value"), py::arg("abs_mean"), py::arg("count"))
      .def_readonly("s_value", &ProfilePoint::s_value)
      .def_readonly("abs_mean", &ProfilePoint::abs_mean)
      .def_readonly("count", &ProfilePoint::count);

  py::class_<DvcProfile>(m, "DvcProfile")
      .def(py::init([](std::vector<ProfilePoint> pts) { return DvcProfile{std::move(pts)}; }), py::arg("points"))
      .def_readonly("points", &DvcProfile::points)
      .def("to_csv", [](const DvcProfile& p) {
        std::ostringstream out;
        write_profile_csv(out, p);
        return out.str();
      });

  py::class_<DvcResult>(m, "DvcResult")
      .def_readonly("dvc_p", &DvcResult::dvc_p)
      .def_readonly("dvc_n", &DvcResult::dvc_n)
      .def_readonly("intercept_p", &DvcResult::intercept_p)
      .def_readonly("intercept_n", &DvcResult::intercept_n)
      .def_readonly("profile", &DvcResult::profile)
      .def_readonly("n_points_pos", &DvcResult::n_points_pos)
      .def_readonly("n_points_neg", &DvcResult::n_points_neg)
      .def("to_json", [](const DvcResult& r) { return to_json(r).dump(2); });

  m.def("conditional_distribution",
        py::overload_cast<const SymbolicSeries&, Symbol>(&conditional_distribution), py::arg("symbols"),
        py::arg("conditioning_symbol"));
  m.def("conditional_abs_mean", &conditional_abs_mean, py::arg("distribution"), py::arg("scheme"));
  m.def("dvc_profile", &dvc_profile, py::arg("symbols"), py::arg("min_count") = 100);
  m.def("fit_dvc", &fit_dvc, py::arg("profile"));
  m.def("analyze", &analyze, py::arg("returns"), py::arg("config") = AnalysisConfig{},
        py::call_guard<py::gil_scoped_release>());

  // garch
  py::class_<GarchParams>(m, "GarchParams")
      .def(py::init<double, double, double>(), py::arg("omega"), py::arg("alpha"), py::arg("beta"))
      .def_property_readonly("omega", &GarchParams::omega)
      .def_property_readonly("alpha", &GarchParams::alpha)
      .def_property_readonly("beta", &GarchParams::beta)
      .def_property_readonly("unconditional_variance", &GarchParams::unconditional_variance)
      .def("__repr__", [](const GarchParams& p) {
        std::ostringstream s;
        s << "GarchParams(omega=" << p.omega() << ", alpha=" << p.alpha() << ", beta=" << p.beta() << ")";
        return s.str();
      });

  py::class_<GarchFit>(m, "GarchFit")
      .def_readonly("params", &GarchFit::params)
      .def_readonly("log_likelihood", &GarchFit::log_likelihood)
      .def_property_readonly("conditional_variances",
                             [](const GarchFit& f) { return to_array(f.conditional_variances); })
      .def_readonly("converged", &GarchFit::converged)
      .def_readonly("iterations", &GarchFit::iterations)
      .def("to_json", [](const GarchFit& f) { return to_json(f).dump(); });

  m.def(
      "simulate",
      [](const GarchParams& p, std::size_t n, std::uint64_t seed) { return simulate(p, n, Seed{seed}); },
      py::arg("params"), py::arg("n"), py::arg("seed"), py::call_guard<py::gil_scoped_release>());
  m.def("neg_log_likelihood", py::overload_cast<const GarchParams&, const ReturnSeries&>(&neg_log_likelihood),
        py::arg("params"), py::arg("returns"));
  m.def("fit", &fit, py::arg("returns"), py::arg("initial") = std::nullopt,
        py::call_guard<py::gil_scoped_release>());
  m.def("filter", &filter, py::arg("returns"), py::arg("fit"));

  // surrogate
  m.def(
      "shuffle", [](const ReturnSeries& r, std::uint64_t seed) { return shuffle(r, Seed{seed}); },
      py::arg("returns"), py::arg("seed"));
  m.def(
      "iid_gaussian",
      [](std::size_t n, double sigma, std::uint64_t seed) { return iid_gaussian(n, sigma, Seed{seed}); },
      py::arg("n"), py::arg("sigma"), py::arg("seed"));
}
