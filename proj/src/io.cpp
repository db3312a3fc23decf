#include "robust_reserve/io.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "robust_reserve/errors.hpp"

namespace robust_reserve {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void bad_json(const std::string& msg) { throw DomainError("invalid_json", msg); }

double number(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_number()) bad_json(std::string("missing numeric field '") + key + "'");
  return doc.at(key).get<double>();
}

int integer(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_number_integer())
    bad_json(std::string("missing integer field '") + key + "'");
  return doc.at(key).get<int>();
}

std::vector<double> numbers(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_array()) bad_json(std::string("missing array field '") + key + "'");
  std::vector<double> out;
  for (const auto& x : doc.at(key)) {
    if (!x.is_number()) bad_json(std::string("non-numeric entry in '") + key + "'");
    out.push_back(x.get<double>());
  }
  return out;
}

Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

}  // namespace

std::string format_number(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

Json to_json(const GParams& p) {
  return Json{{"rho", p.rho},         {"q", p.q}, {"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"n", p.n},
              {"m", p.m},             {"sigma", p.sigma}, {"tail_mass", p.tail_mass}};
}

Json to_json(const Distribution& dist) {
  Json out{{"type", std::string(dist.type_name())}};
  std::visit(overloaded{
                 [&](const PointMass& d) { out["a"] = d.at; },
                 [&](const Binary& d) {
                   out["low"] = d.low;
                   out["high"] = d.high;
                   out["p_low"] = d.p_low;
                 },
                 [&](const AtomQuantileTail& d) { out.update(to_json(d.params)); },
                 [&](const AtomUniformTail& d) {
                   out["atom_point"] = d.atom_point;
                   out["atom_mass"] = d.atom_mass;
                   out["tail_low"] = d.tail_low;
                   out["tail_high"] = d.tail_high;
                 },
                 [&](const DiscreteCdf& d) {
                   out["grid"] = d.grid;
                   out["cdf"] = d.cdf;
                 },
             },
             dist.variant());
  return out;
}

Distribution distribution_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("type") || !doc.at("type").is_string()) bad_json("missing 'type'");
  const auto type = doc.at("type").get<std::string>();
  if (type == "point") return Distribution::point(number(doc, "a"));
  if (type == "binary") return Distribution::binary(number(doc, "low"), number(doc, "high"), number(doc, "p_low"));
  if (type == "atom_uniform")
    return Distribution::atom_uniform(number(doc, "atom_point"), number(doc, "atom_mass"), number(doc, "tail_low"),
                                      number(doc, "tail_high"));
  if (type == "discrete") return Distribution::discrete(numbers(doc, "grid"), numbers(doc, "cdf"));
  if (type == "g_tail") {
    GParams p;
    p.rho = number(doc, "rho");
    p.q = number(doc, "q");
    p.lambda1 = number(doc, "lambda1");
    p.lambda2 = number(doc, "lambda2");
    p.n = integer(doc, "n");
    p.m = number(doc, "m");
    p.sigma = number(doc, "sigma");
    p.tail_mass = doc.contains("tail_mass") ? number(doc, "tail_mass") : 1.0 - p.q;
    return Distribution::g_tail(p);
  }
  bad_json("unknown distribution type '" + type + "'");
}

Json to_json(const AuctionSetting& s) {
  Json out{{"bidders", s.bidders}, {"cost", s.cost}};
  if (s.is_bounded()) {
    out["setting"] = "bounded";
    out["mean"] = s.bounded_values().mean;
    out["vmax"] = s.bounded_values().vmax;
  } else {
    out["setting"] = "variance";
    out["mean"] = s.variance_bound().mean;
    out["sigma"] = s.sigma();
  }
  return out;
}

Json to_json(const PriceSet& set) {
  return Json{{"low", set.low}, {"high", set.high}, {"may_extend_above", set.may_extend_above}};
}

Json to_json(const BoundedSolution& s) {
  return Json{{"v_min_star", s.v_min_star},
              {"q_star", s.q_star},
              {"lambda_star", s.lambda_star},
              {"maxmin_revenue", s.maxmin_revenue},
              {"price_set", to_json(s.price_set)},
              {"unique", s.unique},
              {"worst_case", to_json(s.worst_case)}};
}

Json to_json(const VarianceSolution& s) {
  return Json{{"v_min_star2", s.v_min_star2},
              {"gamma_n", optional_number(s.gamma_n)},
              {"maxmin_revenue", s.maxmin_revenue},
              {"price_set", to_json(s.price_set)},
              {"unique", s.unique},
              {"worst_case", to_json(s.worst_case)}};
}

Json to_json(const RevenueReport& r) {
  return Json{{"analytic", optional_number(r.analytic)}, {"quadrature", r.quadrature}, {"mc_estimate", r.mc_estimate},
              {"mc_stderr", r.mc_stderr},                {"samples", r.samples},       {"seed", r.seed}};
}

Json to_json(const OracleConfig& c) {
  Json families = Json::array();
  for (Family f : c.families) families.push_back(std::string(to_string(f)));
  return Json{{"value_grid_size", c.value_grid_size},
              {"value_grid_max", optional_number(c.value_grid_max)},
              {"sigma_multiple", c.sigma_multiple},
              {"families", families},
              {"max_iterations", c.max_iterations},
              {"tolerance", c.tolerance},
              {"starts", c.starts},
              {"seed", c.seed}};
}

OracleConfig oracle_config_from_json(const Json& doc) {
  if (!doc.is_object()) bad_json("oracle config must be an object");
  OracleConfig c;
  if (doc.contains("value_grid_size")) c.value_grid_size = integer(doc, "value_grid_size");
  if (doc.contains("value_grid_max") && !doc.at("value_grid_max").is_null())
    c.value_grid_max = number(doc, "value_grid_max");
  if (doc.contains("sigma_multiple")) c.sigma_multiple = number(doc, "sigma_multiple");
  if (doc.contains("families")) {
    c.families.clear();
    for (const auto& f : doc.at("families")) {
      if (!f.is_string()) bad_json("family names must be strings");
      c.families.push_back(family_from_string(f.get<std::string>()));
    }
  }
  if (doc.contains("max_iterations")) c.max_iterations = integer(doc, "max_iterations");
  if (doc.contains("tolerance")) c.tolerance = number(doc, "tolerance");
  if (doc.contains("starts")) c.starts = integer(doc, "starts");
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) bad_json("seed must be a non-negative integer");
    c.seed = doc.at("seed").get<std::uint64_t>();
  }
  c.validate();
  return c;
}

Json to_json(const OracleResult& r) {
  return Json{{"best_revenue", r.best_revenue},
              {"family_tag", std::string(to_string(r.family))},
              {"constraint_residuals", Json{{"mean", r.mean_residual}, {"bound", r.bound_residual}}},
              {"iterations", r.iterations},
              {"best_distribution", to_json(r.best_distribution)}};
}

Json to_json(const VerificationReport& r) {
  Json points = Json::array();
  for (const auto& p : r.points)
    points.push_back(Json{{"r", p.r},
                          {"oracle_revenue", p.oracle_revenue},
                          {"closed_form_bound", p.closed_form_bound},
                          {"family_tag", std::string(to_string(p.family))}});
  return Json{{"passed", r.passed},
              {"maxmin_revenue", r.maxmin_revenue},
              {"cost", r.cost},
              {"envelope_tolerance", r.envelope_tolerance},
              {"at_cost_tolerance", r.at_cost_tolerance},
              {"max_excess", r.max_excess},
              {"oracle_at_cost", r.oracle_at_cost},
              {"envelope_ok", r.envelope_ok},
              {"at_cost_ok", r.at_cost_ok},
              {"argmax", r.argmax},
              {"empirical_unique", r.empirical_unique},
              {"claimed_unique", r.claimed_unique},
              {"points", points}};
}

Json to_json(const std::vector<RateTableRow>& rows) {
  Json out = Json::array();
  for (const auto& row : rows)
    out.push_back(Json{{"n", row.n},
                       {"gap_bounded", row.gap_bounded},
                       {"gap_variance", row.gap_variance},
                       {"gap_correlated", row.gap_correlated},
                       {"n_sq_alpha", row.n_sq_alpha}});
  return out;
}

Json to_json(const std::vector<ThreatCurvePoint>& curve) {
  Json out = Json::array();
  for (const auto& p : curve)
    out.push_back(Json{{"r", p.r}, {"threat_revenue", p.threat_revenue}, {"maxmin_revenue", p.maxmin_revenue}});
  return out;
}

std::string threat_curve_csv(const std::vector<ThreatCurvePoint>& curve) {
  std::ostringstream os;
  os << "r,threat_revenue,maxmin_revenue\n";
  for (const auto& p : curve)
    os << format_number(p.r) << ',' << format_number(p.threat_revenue) << ',' << format_number(p.maxmin_revenue)
       << '\n';
  return os.str();
}

std::string rate_table_csv(const std::vector<RateTableRow>& rows) {
  std::ostringstream os;
  os << "n,gap_bounded,gap_variance,gap_correlated,n_sq_alpha\n";
  for (const auto& row : rows)
    os << row.n << ',' << format_number(row.gap_bounded) << ',' << format_number(row.gap_variance) << ','
       << format_number(row.gap_correlated) << ',' << format_number(row.n_sq_alpha) << '\n';
  return os.str();
}

std::string verification_csv(const VerificationReport& report) {
  std::ostringstream os;
  os << "r,oracle_revenue,closed_form_bound,family_tag\n";
  for (const auto& p : report.points)
    os << format_number(p.r) << ',' << format_number(p.oracle_revenue) << ',' << format_number(p.closed_form_bound)
       << ',' << to_string(p.family) << '\n';
  return os.str();
}

}  // namespace robust_reserve
