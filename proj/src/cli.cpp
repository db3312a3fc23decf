#include "robust_reserve/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "robust_reserve/asymptotics.hpp"
#include "robust_reserve/bounded.hpp"
#include "robust_reserve/errors.hpp"
#include "robust_reserve/io.hpp"
#include "robust_reserve/oracle.hpp"
#include "robust_reserve/revenue.hpp"
#include "robust_reserve/variance.hpp"

namespace robust_reserve {

namespace {

struct Common {
  std::string setting;
  std::optional<double> mean, vmax, sigma;
  double cost = 0.0;
  int bidders = 0;
  std::string format;
  std::string out;
  std::uint64_t seed = 0;
};

struct VerifyFlags {
  int r_grid = 41;
  int value_grid = 400;
  int starts = 10;
  int max_iterations = 400;
  std::vector<std::string> families;
};

struct SimulateFlags {
  std::string dist;
  double reserve = 0.0;
  std::string tie = "no_sale_at_reserve";
  std::int64_t samples = 1000000;
};

struct AsymptoticsFlags {
  int n_max = 1000;
};

struct CurveFlags {
  int grid = 200;
  std::optional<double> r_max;
};

void add_common(CLI::App* cmd, Common& c, bool with_setting, const char* default_format) {
  c.format = default_format;
  if (with_setting) {
    cmd->add_option("--setting", c.setting, "bounded or variance")->check(CLI::IsMember({"bounded", "variance"}));
    cmd->add_option("--mean", c.mean, "mean value m");
    cmd->add_option("--vmax", c.vmax, "upper bound on values (bounded)");
    cmd->add_option("--sigma", c.sigma, "standard deviation bound (variance)");
  }
  cmd->add_option("--cost", c.cost, "seller valuation c")->capture_default_str();
  cmd->add_option("--bidders", c.bidders, "number of bidders n");
  cmd->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  cmd->add_option("--out", c.out, "write output to this path");
  cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
}

AuctionSetting build_setting(const Common& c) {
  if (c.setting.empty()) throw DomainError("invalid_flags", "--setting is required");
  if (!c.mean) throw DomainError("invalid_flags", "--mean is required");
  if (c.bidders == 0) throw DomainError("invalid_flags", "--bidders is required");
  AuctionSetting s;
  if (c.setting == "bounded") {
    if (!c.vmax) throw DomainError("invalid_flags", "--setting bounded requires --vmax");
    if (c.sigma) throw DomainError("invalid_flags", "--sigma does not apply to --setting bounded");
    s = AuctionSetting::bounded(c.bidders, c.cost, *c.mean, *c.vmax);
  } else {
    if (!c.sigma) throw DomainError("invalid_flags", "--setting variance requires --sigma");
    if (c.vmax) throw DomainError("invalid_flags", "--vmax does not apply to --setting variance");
    s = AuctionSetting::variance_bound(c.bidders, c.cost, *c.mean, *c.sigma);
  }
  s.validate();
  return s;
}

void require_json(const Common& c, const char* command) {
  if (c.format != "json") throw DomainError("invalid_flags", std::string(command) + " supports only --format json");
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

std::string maxmin_output(const AuctionSetting& s) {
  Json doc{{"setting", to_json(s)}};
  doc.update(s.is_bounded() ? to_json(maxmin_bounded(s)) : to_json(maxmin_variance(s)));
  return dump(doc);
}

std::string threat_curve_output(const AuctionSetting& s, const CurveFlags& f, const std::string& format) {
  if (f.grid < 2) throw DomainError("invalid_flags", "--grid must be at least 2");
  const double r_max = f.r_max.value_or(1.5 * s.mean());
  if (!(r_max > 0.0)) throw DomainError("invalid_flags", "--r-max must be positive");
  const double maxmin = s.is_bounded() ? maxmin_bounded(s).maxmin_revenue : maxmin_variance(s).maxmin_revenue;
  std::vector<ThreatCurvePoint> curve;
  for (int i = 0; i < f.grid; ++i) {
    const double r = r_max * i / (f.grid - 1);
    const double threat = s.is_bounded() ? threat_revenue_bounded(r, s) : threat_revenue_variance(r, s);
    curve.push_back({r, threat, maxmin});
  }
  return format == "csv" ? threat_curve_csv(curve) : dump(to_json(curve));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("io_error", "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust reserve prices for second-price auctions", "robust-reserve"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Common maxmin_c, worst_c, curve_c, verify_c, asym_c, sim_c;
  CurveFlags curve_f;
  VerifyFlags verify_f;
  AsymptoticsFlags asym_f;
  SimulateFlags sim_f;

  auto* maxmin = app.add_subcommand("maxmin", "Maxmin price set, revenue and worst case");
  add_common(maxmin, maxmin_c, true, "json");
  auto* worst = app.add_subcommand("worst-case", "Worst-case distribution at r = c");
  add_common(worst, worst_c, true, "json");
  auto* curve = app.add_subcommand("threat-curve", "Threat revenue over a reserve grid");
  add_common(curve, curve_c, true, "csv");
  curve->add_option("--grid", curve_f.grid, "number of reserve prices")->capture_default_str();
  curve->add_option("--r-max", curve_f.r_max, "largest reserve (default 1.5 m)");
  auto* verify = app.add_subcommand("verify", "Check the maxmin revenue against the numerical adversary");
  add_common(verify, verify_c, true, "json");
  verify->add_option("--r-grid", verify_f.r_grid, "reserve grid size")->capture_default_str();
  verify->add_option("--value-grid", verify_f.value_grid, "value grid size")->capture_default_str();
  verify->add_option("--starts", verify_f.starts, "random starts")->capture_default_str();
  verify->add_option("--max-iterations", verify_f.max_iterations, "iterations per start")->capture_default_str();
  verify->add_option("--families", verify_f.families, "comma-separated oracle families (default all)")
      ->delimiter(',');
  auto* asym = app.add_subcommand("asymptotics", "Revenue gaps as n grows");
  add_common(asym, asym_c, true, "csv");
  asym->add_option("--n-max", asym_f.n_max, "largest bidder count")->capture_default_str();
  auto* sim = app.add_subcommand("simulate", "Revenue of a given distribution three ways");
  add_common(sim, sim_c, true, "json");
  sim->add_option("--dist", sim_f.dist, "distribution JSON file")->required();
  sim->add_option("--reserve", sim_f.reserve, "reserve price")->capture_default_str();
  sim->add_option("--tie", sim_f.tie, "no_sale_at_reserve or sale_at_reserve")
      ->check(CLI::IsMember({"no_sale_at_reserve", "sale_at_reserve"}))
      ->capture_default_str();
  sim->add_option("--samples", sim_f.samples, "Monte Carlo auctions")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  std::string text;
  const Common* common = nullptr;
  int status = 0;
  try {
    if (maxmin->parsed()) {
      common = &maxmin_c;
      require_json(maxmin_c, "maxmin");
      text = maxmin_output(build_setting(maxmin_c));
    } else if (worst->parsed()) {
      common = &worst_c;
      require_json(worst_c, "worst-case");
      const auto s = build_setting(worst_c);
      text = dump(to_json(s.is_bounded() ? worst_case_bounded(s) : worst_case_variance(s)));
    } else if (curve->parsed()) {
      common = &curve_c;
      text = threat_curve_output(build_setting(curve_c), curve_f, curve_c.format);
    } else if (verify->parsed()) {
      common = &verify_c;
      const auto s = build_setting(verify_c);
      OracleConfig config;
      config.value_grid_size = verify_f.value_grid;
      config.starts = verify_f.starts;
      config.max_iterations = verify_f.max_iterations;
      if (!verify_f.families.empty()) {
        config.families.clear();
        for (const auto& name : verify_f.families) config.families.push_back(family_from_string(name));
      }
      config.seed = verify_c.seed;
      const auto report = verify_maxmin(s, verify_f.r_grid, config);
      if (verify_c.format == "csv") {
        text = verification_csv(report);
      } else {
        Json doc{{"setting", to_json(s)}, {"config", to_json(config)}, {"r_grid_size", verify_f.r_grid}};
        doc.update(to_json(report));
        text = dump(doc);
      }
      if (!report.passed) status = 3;
    } else if (asym->parsed()) {
      common = &asym_c;
      if (asym_f.n_max < 3) throw DomainError("invalid_flags", "--n-max must be at least 3");
      const double m = asym_c.mean.value_or(1.0);
      const double vmax = asym_c.vmax.value_or(2.0 * m);
      const double sigma = asym_c.sigma.value_or(m);
      if (!(m > 0.0 && vmax > m && sigma > 0.0))
        throw DomainError("invalid_flags", "asymptotics needs mean > 0, vmax > mean and sigma > 0");
      const auto rows = rate_table(m, vmax, sigma, asym_f.n_max);
      text = asym_c.format == "csv" ? rate_table_csv(rows) : dump(to_json(rows));
    } else if (sim->parsed()) {
      common = &sim_c;
      require_json(sim_c, "simulate");
      if (sim_c.bidders < 2) throw DomainError("invalid_flags", "--bidders must be at least 2");
      if (!(sim_c.cost >= 0.0)) throw DomainError("invalid_flags", "--cost must be non-negative");
      if (sim_f.samples < 1000) throw DomainError("invalid_flags", "--samples must be at least 1000");
      if (!(sim_f.reserve >= 0.0)) throw DomainError("invalid_flags", "--reserve must be non-negative");
      Json doc;
      try {
        doc = Json::parse(read_file(sim_f.dist));
      } catch (const Json::parse_error& e) {
        throw DomainError("invalid_json", e.what());
      }
      const auto dist = distribution_from_json(doc);
      AuctionSetting s;
      if (!sim_c.setting.empty()) {
        s = build_setting(sim_c);
      } else {
        s.bidders = sim_c.bidders;
        s.cost = sim_c.cost;
      }
      const auto report = revenue_report(dist, sim_f.reserve, s, tie_rule_from_string(sim_f.tie), sim_f.samples,
                                         sim_c.seed);
      text = dump(Json{{"distribution", to_json(dist)}, {"reserve", sim_f.reserve}, {"tie", sim_f.tie},
                       {"bidders", s.bidders}, {"cost", s.cost}, {"report", to_json(report)}});
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }

  if (common && !common->out.empty()) {
    std::ofstream file(common->out, std::ios::binary);
    if (!file) {
      err << "error: io_error: cannot write " << common->out << "\n";
      return 2;
    }
    file << text;
  } else {
    out << text;
  }
  return status;
}

}  // namespace robust_reserve
