#pragma once

// JSON and CSV forms of the library's inputs and results. Field names are
// part of the CLI contract; see README.md for the schemas.

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "robust_reserve/asymptotics.hpp"
#include "robust_reserve/bounded.hpp"
#include "robust_reserve/distribution.hpp"
#include "robust_reserve/oracle.hpp"
#include "robust_reserve/revenue.hpp"
#include "robust_reserve/setting.hpp"
#include "robust_reserve/variance.hpp"

namespace robust_reserve {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that reads back to the same double.
std::string format_number(double x);

Json to_json(const Distribution& dist);
/// Throws DomainError("invalid_json") on a malformed document and
/// DomainError("invalid_distribution") on invalid parameters.
Distribution distribution_from_json(const Json& doc);

Json to_json(const GParams& params);
Json to_json(const AuctionSetting& setting);
Json to_json(const PriceSet& set);
Json to_json(const BoundedSolution& solution);
Json to_json(const VarianceSolution& solution);
Json to_json(const RevenueReport& report);
Json to_json(const OracleConfig& config);
OracleConfig oracle_config_from_json(const Json& doc);
Json to_json(const OracleResult& result);
Json to_json(const VerificationReport& report);
Json to_json(const std::vector<RateTableRow>& rows);

struct ThreatCurvePoint {
  double r = 0.0;
  double threat_revenue = 0.0;
  double maxmin_revenue = 0.0;
};

Json to_json(const std::vector<ThreatCurvePoint>& curve);

/// Header "r,threat_revenue,maxmin_revenue".
std::string threat_curve_csv(const std::vector<ThreatCurvePoint>& curve);
/// Header "n,gap_bounded,gap_variance,gap_correlated,n_sq_alpha".
std::string rate_table_csv(const std::vector<RateTableRow>& rows);
/// Header "r,oracle_revenue,closed_form_bound,family_tag".
std::string verification_csv(const VerificationReport& report);

}  // namespace robust_reserve
