#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "robust_reserve/asymptotics.hpp"
#include "robust_reserve/bounded.hpp"
#include "robust_reserve/cli.hpp"
#include "robust_reserve/errors.hpp"
#include "robust_reserve/io.hpp"
#include "robust_reserve/oracle.hpp"
#include "robust_reserve/revenue.hpp"
#include "robust_reserve/sampling.hpp"
#include "robust_reserve/variance.hpp"

namespace py = pybind11;
using namespace robust_reserve;

// Structured values cross the boundary as JSON text; the Python side decodes.
namespace {

AuctionSetting make_setting(const std::string& kind, int bidders, double cost, double mean, double bound) {
  if (kind == "bounded") return AuctionSetting::bounded(bidders, cost, mean, bound);
  if (kind == "variance") return AuctionSetting::variance_bound(bidders, cost, mean, bound);
  throw DomainError("invalid_setting", "setting must be 'bounded' or 'variance'");
}

Distribution parse_dist(const std::string& text) { return distribution_from_json(Json::parse(text)); }

OracleConfig parse_config(const std::string& text) {
  return text.empty() ? OracleConfig{} : oracle_config_from_json(Json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  // Kept alive for the life of the interpreter.
  static PyObject* domain_error = py::exception<DomainError>(m, "DomainError", PyExc_ValueError).inc_ref().ptr();
  py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DomainError& e) {
      py::object err = py::reinterpret_borrow<py::object>(domain_error)(e.what());
      err.attr("code") = e.code();
      PyErr_SetObject(domain_error, err.ptr());
    } catch (const Json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("maxmin", [](const std::string& kind, int n, double c, double mean, double bound) {
    const auto s = make_setting(kind, n, c, mean, bound);
    return (s.is_bounded() ? to_json(maxmin_bounded(s)) : to_json(maxmin_variance(s))).dump();
  });

  m.def("worst_case", [](const std::string& kind, int n, double c, double mean, double bound) {
    const auto s = make_setting(kind, n, c, mean, bound);
    return to_json(s.is_bounded() ? worst_case_bounded(s) : worst_case_variance(s)).dump();
  });

  m.def("threat", [](const std::string& kind, int n, double c, double mean, double bound, double r) {
    const auto s = make_setting(kind, n, c, mean, bound);
    const auto t = s.is_bounded() ? threat_bounded(r, s) : threat_variance(r, s);
    const double revenue = expected_revenue(t.distribution, r, s, t.tie);
    return std::make_tuple(to_json(t.distribution).dump(), std::string(to_string(t.tie)), revenue);
  });

  m.def("expected_revenue", [](const std::string& dist, double r, int n, double c, const std::string& tie) {
    return expected_revenue(parse_dist(dist), r, n, c, tie_rule_from_string(tie));
  });

  m.def("expected_revenue_quadrature", [](const std::string& dist, double r, int n, double c, const std::string& tie) {
    return expected_revenue_quadrature(parse_dist(dist), r, n, c, tie_rule_from_string(tie));
  });

  m.def("moments", [](const std::string& dist) {
    const auto mo = moments(parse_dist(dist));
    return std::make_tuple(mo.mean, mo.variance);
  });

  m.def("monte_carlo_revenue", [](const std::string& dist, double r, int n, double c, const std::string& tie,
                                  std::int64_t samples, std::uint64_t seed) {
    const auto d = parse_dist(dist);
    if (n < 2) throw DomainError("invalid_bidders", "need at least two bidders");
    if (!(c >= 0.0)) throw DomainError("invalid_setting", "cost must be non-negative");
    // Only n and c enter the auction; the constraint is a placeholder.
    AuctionSetting s;
    s.bidders = n;
    s.cost = c;
    MonteCarloEstimate mc;
    {
      py::gil_scoped_release release;
      mc = monte_carlo_revenue(d, r, s, tie_rule_from_string(tie), samples, seed);
    }
    return std::make_tuple(mc.estimate, mc.std_error);
  });

  m.def("minimize_revenue", [](const std::string& kind, int n, double c, double mean, double bound, double r,
                               const std::string& tie, const std::string& config) {
    const auto s = make_setting(kind, n, c, mean, bound);
    const auto cfg = parse_config(config);
    py::gil_scoped_release release;
    return to_json(minimize_revenue(r, s, tie_rule_from_string(tie), cfg)).dump();
  });

  m.def("verify_maxmin", [](const std::string& kind, int n, double c, double mean, double bound, int r_grid,
                            const std::string& config) {
    const auto s = make_setting(kind, n, c, mean, bound);
    const auto cfg = parse_config(config);
    py::gil_scoped_release release;
    return to_json(verify_maxmin(s, r_grid, cfg)).dump();
  });

  m.def("alpha_n", &alpha_n);
  m.def("gamma_n", &gamma_n);
  m.def("correlated_gap", &correlated_gap);
  m.def("rate_table", [](double mean, double vmax, double sigma, int n_max) {
    return to_json(rate_table(mean, vmax, sigma, n_max)).dump();
  });

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = 0;
    {
      py::gil_scoped_release release;
      code = run_cli(args, out, err);
    }
    return std::make_tuple(code, out.str(), err.str());
  });
}
