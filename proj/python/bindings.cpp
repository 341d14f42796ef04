#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "steinrmt/chebyshev.hpp"
#include "steinrmt/ensembles.hpp"
#include "steinrmt/errors.hpp"
#include "steinrmt/rational.hpp"
#include "steinrmt/stein_certifier.hpp"
#include "steinrmt/trace_algebra.hpp"
#include "steinrmt/wick_oracle.hpp"

namespace py = pybind11;
using namespace steinrmt;

namespace {

// Coefficients as (numerator, denominator) string pairs keep them exact.
std::vector<std::pair<std::string, std::string>> exact_coefficients(const UnivariatePolynomial& p) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& c : p.coefficients()) out.emplace_back(c.get_num().get_str(), c.get_den().get_str());
  return out;
}

std::string laurent_str(const LaurentPolynomial& l) { return l.str(); }

ScaleMode parse_mode(const std::string& m) {
  if (m == "scaled") return ScaleMode::scaled;
  if (m == "raw") return ScaleMode::raw;
  throw std::invalid_argument("mode must be 'scaled' or 'raw'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<DegreeCapExceeded>(m, "DegreeCapExceeded", PyExc_ValueError);
  py::register_exception<ScaleMismatch>(m, "ScaleMismatch", PyExc_ValueError);
  py::register_exception<UnsupportedEnsemble>(m, "UnsupportedEnsemble", PyExc_ValueError);

  m.def("chebyshev_t", [](int p) { return exact_coefficients(chebyshev_T(p)); });
  m.def("chebyshev_u", [](int p) { return exact_coefficients(chebyshev_U(p)); });
  m.def("chebyshev_t_str", [](int p) { return chebyshev_T(p).str(); });
  m.def("catalan", [](int p) { return py::int_(py::str(catalan(p).get_str())); });
  m.def("semicircle_moment", [](int k) { return to_string(semicircle_moment(k)); });
  m.def("semicircle_inner_product_u", [](int p, int q) {
    const Rational half(1, 2);
    return to_string(semicircle_inner_product(chebyshev_U(p).scale_argument(half), chebyshev_U(q).scale_argument(half)));
  });

  py::class_<TracePolynomial>(m, "TracePolynomial")
      .def(py::init([](const std::string& text, const std::string& mode) { return TracePolynomial::parse(text, parse_mode(mode)); }),
           py::arg("text"), py::arg("mode") = "scaled")
      .def_static("trace_power", [](int k, const std::string& mode) { return TracePolynomial::trace_power(k, parse_mode(mode)); },
                  py::arg("k"), py::arg("mode") = "scaled")
      .def_property_readonly("mode", [](const TracePolynomial& u) { return u.mode() == ScaleMode::scaled ? "scaled" : "raw"; })
      .def_property_readonly("degree", &TracePolynomial::degree)
      .def("to_raw", &TracePolynomial::to_raw)
      .def("to_scaled", &TracePolynomial::to_scaled)
      .def("generator", [](const TracePolynomial& u) { return generator(u); })
      .def("laplacian", [](const TracePolynomial& u) { return laplacian(u); })
      .def("gradient_inner", [](const TracePolynomial& u, const TracePolynomial& v) { return gradient_inner(u, v); })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(-py::self)
      .def(py::self == py::self)
      .def("__str__", &TracePolynomial::str)
      .def("__repr__", [](const TracePolynomial& u) { return "TracePolynomial('" + u.str() + "')"; });

  py::class_<WickOracle>(m, "WickOracle")
      .def(py::init<int>(), py::arg("degree_cap") = kDefaultTraceDegreeCap)
      .def("expect", [](const WickOracle& o, const TracePolynomial& u) { return laurent_str(o.expect(u)); })
      .def("expect_at", [](const WickOracle& o, const TracePolynomial& u, double n) { return o.expect(u).evaluate(n); })
      .def("expect_trace_monomial",
           [](const WickOracle& o, std::vector<int> powers) { return laurent_str(o.expect_trace_monomial(powers)); })
      .def("scaled_even_moment", [](const WickOracle& o, int p) { return laurent_str(o.scaled_even_moment(p)); });

  m.def(
      "certify",
      [](int d, int n, std::size_t mc_replicas, std::uint64_t seed) {
        WickOracle oracle(std::max(kDefaultTraceDegreeCap, 2 * d + 2));
        SteinCertifier cert(oracle);
        return to_json(cert.certify(d, n, mc_replicas, seed));
      },
      py::arg("d"), py::arg("n"), py::arg("mc_replicas") = 0, py::arg("seed") = 0);

  m.def(
      "chebyshev_statistics",
      [](const std::string& kind, int n, int d, std::size_t replicas, std::uint64_t seed) {
        const EnsembleKind k = parse_ensemble_kind(kind);
        if (k != EnsembleKind::GUE) throw UnsupportedEnsemble("only the GUE has exact centering");
        WickOracle oracle(std::max(kDefaultTraceDegreeCap, 2 * d + 2));
        const auto centering = gue_centering(n, d, oracle);
        py::array_t<double> out({static_cast<py::ssize_t>(replicas), static_cast<py::ssize_t>(d)});
        auto view = out.mutable_unchecked<2>();
        EnsembleSpec spec{k, n, seed};
        for (std::size_t i = 0; i < replicas; ++i) {
          const auto s = chebyshev_statistics(sample_replica(spec, i), centering);
          for (int p = 0; p < d; ++p) view(i, p) = s.values[p];
        }
        return out;
      },
      py::arg("kind"), py::arg("n"), py::arg("d"), py::arg("replicas"), py::arg("seed") = 0);
}
