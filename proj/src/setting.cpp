#include "robust_reserve/setting.hpp"

#include <cmath>
#include <string>

#include "robust_reserve/errors.hpp"

namespace robust_reserve {

AuctionSetting AuctionSetting::bounded(int bidders, double cost, double mean, double vmax) {
  AuctionSetting s{bidders, cost, BoundedValues{mean, vmax}};
  s.validate();
  return s;
}

AuctionSetting AuctionSetting::variance_bound(int bidders, double cost, double mean, double sigma) {
  AuctionSetting s{bidders, cost, VarianceBound{mean, sigma * sigma}};
  s.validate();
  return s;
}

double AuctionSetting::mean() const {
  return std::visit([](const auto& c) { return c.mean; }, constraint);
}

const BoundedValues& AuctionSetting::bounded_values() const {
  if (const auto* b = std::get_if<BoundedValues>(&constraint)) return *b;
  throw DomainError("wrong_setting", "setting has no upper bound on values");
}

const VarianceBound& AuctionSetting::variance_bound() const {
  if (const auto* v = std::get_if<VarianceBound>(&constraint)) return *v;
  throw DomainError("wrong_setting", "setting has no variance bound");
}

double AuctionSetting::sigma() const { return std::sqrt(variance_bound().variance); }

void AuctionSetting::validate() const {
  auto fail = [](const std::string& msg) { throw DomainError("invalid_setting", msg); };
  const double m = mean();
  if (bidders < 2) fail("need at least two bidders");
  if (!std::isfinite(cost) || !std::isfinite(m)) fail("non-finite parameter");
  if (!(cost >= 0.0 && cost < m)) fail("require 0 <= cost < mean");
  if (const auto* b = std::get_if<BoundedValues>(&constraint)) {
    if (!(b->vmax > m) || !std::isfinite(b->vmax)) fail("require mean < vmax");
  } else {
    const auto& v = std::get<VarianceBound>(constraint);
    if (!(v.variance > 0.0) || !std::isfinite(v.variance)) fail("require variance > 0");
  }
}

std::string_view to_string(TieRule tie) {
  return tie == TieRule::SaleAtReserve ? "sale_at_reserve" : "no_sale_at_reserve";
}

TieRule tie_rule_from_string(std::string_view name) {
  if (name == "sale_at_reserve" || name == "sale") return TieRule::SaleAtReserve;
  if (name == "no_sale_at_reserve" || name == "no_sale") return TieRule::NoSaleAtReserve;
  throw DomainError("invalid_tie_rule", std::string(name));
}

}  // namespace robust_reserve
