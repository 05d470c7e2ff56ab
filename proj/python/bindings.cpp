#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sftroof/io.hpp"
#include "sftroof/pressure.hpp"
#include "sftroof/subadditive.hpp"
#include "sftroof/suspension.hpp"

namespace py = pybind11;
using namespace sftroof;

namespace {

TransitionMatrix to_matrix_arg(const std::vector<std::vector<int>>& rows) {
  return TransitionMatrix::from_rows(rows);
}

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

RoofOptions make_options(std::optional<double> c, double alpha) {
  RoofOptions options;
  options.c = c;
  options.alpha = alpha;
  return options;
}

}  // namespace

PYBIND11_MODULE(_sftroof, m) {
  m.doc() = "Roof functions over subshifts of finite type";

  py::register_exception<Error>(m, "SftroofError", PyExc_ValueError);

  m.def("entropy", [](const std::vector<std::vector<int>>& rows) {
    return entropy_spectral(to_matrix_arg(rows)).entropy();
  }, py::arg("matrix"));

  m.def("language_counts", [](const std::vector<std::vector<int>>& rows, std::size_t n_max) {
    const LanguageTable t = language_table(to_matrix_arg(rows), n_max);
    std::vector<std::string> out;
    for (std::size_t n = 1; n <= n_max; ++n) out.push_back(t.count(n).str());
    return out;
  }, py::arg("matrix"), py::arg("n_max"));

  m.def("essentialize", [](const std::vector<std::vector<int>>& rows) {
    return essentialize(to_matrix_arg(rows)).rows();
  }, py::arg("matrix"));

  m.def("components", [](const std::vector<std::vector<int>>& rows) {
    py::list out;
    for (const Component& c : irreducible_components(to_matrix_arg(rows))) {
      out.append(py::make_tuple(c.symbols, c.entropy));
    }
    return out;
  }, py::arg("matrix"));

  m.def("parry_measure", [](const std::vector<std::vector<int>>& rows) {
    const ParryMeasure mu = parry_measure(to_matrix_arg(rows));
    return py::make_tuple(mu.stationary, mu.kernel, mu.entropy());
  }, py::arg("matrix"));

  m.def("load_sft", [](const std::filesystem::path& path) {
    return json_to_py(io::sft_to_json(io::load_sft_file(path)));
  }, py::arg("path"));

  py::class_<RoofSpec>(m, "Roof")
      .def(py::init([](const std::vector<std::vector<int>>& rows, std::optional<double> c,
                       double alpha) {
             return build_roof(to_matrix_arg(rows), make_options(c, alpha));
           }),
           py::arg("matrix"), py::arg("c") = std::nullopt, py::arg("alpha") = 0.5)
      .def_static("from_file", [](const std::filesystem::path& path, std::optional<double> c,
                                  double alpha) {
             return build_roof(io::load_sft_file(path), make_options(c, alpha));
           },
           py::arg("path"), py::arg("c") = std::nullopt, py::arg("alpha") = 0.5)
      .def_property_readonly("h_y", &RoofSpec::h_y)
      .def_property_readonly("c", &RoofSpec::c)
      .def_property_readonly("alphabet_size", &RoofSpec::alphabet_size)
      .def_property_readonly("beta", [](const RoofSpec& s) { return s.beta().successor; })
      .def("a", [](const RoofSpec& s, std::size_t j) { return s.aj().value(j); }, py::arg("j"))
      .def("g", [](const RoofSpec& s, const Word& w) {
             const PotentialEval e = g_eval(s, w);
             return py::make_tuple(e.lo, e.hi);
           }, py::arg("word"))
      .def("birkhoff_sup", [](const RoofSpec& s, const Word& w, double scale) {
             return birkhoff_sup(s, w, scale).value;
           }, py::arg("word"), py::arg("scale") = 1.0)
      .def("log_partition_sum", &log_partition_sum, py::arg("n"), py::arg("scale") = 1.0)
      .def("q", [](const RoofSpec& s, std::size_t r_max) {
             std::vector<double> out;
             for (const QRow& row : q_table(s, r_max).rows) out.push_back(row.q);
             return out;
           }, py::arg("r_max"))
      .def("pressure", [](const RoofSpec& s, std::size_t n_max, double scale) {
             py::list out;
             for (const PartitionRow& r : pressure_estimate(s, n_max, scale).rows) {
               out.append(py::make_tuple(r.n, r.pressure, r.lower_bound, r.upper_bound));
             }
             return out;
           }, py::arg("n_max"), py::arg("scale") = 1.0)
      .def("pressure_root", [](const RoofSpec& s, std::size_t n, double tol) {
             const PressureRoot r = pressure_root(s, n, tol);
             return py::make_tuple(r.result.root, r.result.residual, r.enclosure_lo,
                                   r.enclosure_hi);
           }, py::arg("n") = 60, py::arg("tol") = 1e-10)
      .def("report", [](const RoofSpec& s, std::size_t n, std::size_t m_max) {
             ReportOptions options;
             options.n = n;
             options.m_max = m_max;
             return json_to_py(to_json(mme_report(s, options)));
           }, py::arg("n") = 60, py::arg("m_max") = 200);

  m.def("lemma_inequality", [](const std::vector<double>& b, std::size_t n, std::size_t k) {
    const auto r = lemma_inequality(std::span<const double>(b), n, k);
    return py::make_tuple(r.lhs, r.rhs, r.holds);
  }, py::arg("b"), py::arg("n"), py::arg("k"));

  m.def("random_subadditive", [](std::size_t length, std::uint64_t seed) {
    const auto v = random_subadditive(length, seed).values();
    return std::vector<double>(v.begin(), v.end());
  }, py::arg("length"), py::arg("seed"));
}
