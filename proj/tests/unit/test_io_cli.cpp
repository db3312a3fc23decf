#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "robust_reserve/bounded.hpp"
#include "robust_reserve/cli.hpp"
#include "robust_reserve/errors.hpp"
#include "robust_reserve/io.hpp"
#include "robust_reserve/variance.hpp"

using namespace robust_reserve;
using doctest::Approx;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "robust_reserve_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("format_number round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 7.0 / 16.0, 1e-300, 123456789.123456789, 0.0})
    CHECK(std::stod(format_number(x)) == x);
}

TEST_CASE("distribution JSON round-trips exactly") {
  const std::vector<Distribution> dists{
      Distribution::point(0.5),
      Distribution::binary(1.0 / 3.0, 1.0, 0.75),
      Distribution::atom_uniform(0.5, 11.0 / 15.0, 0.5, 4.25),
      Distribution::discrete({0.1, 0.7, 2.0}, {0.2, 0.5, 1.0}),
      worst_case_variance(AuctionSetting::variance_bound(4, 0.1, 1.0, 0.4)),
  };
  for (const auto& d : dists) {
    const auto text = to_json(d).dump();
    const auto back = distribution_from_json(Json::parse(text));
    CHECK(back.type_name() == d.type_name());
    CHECK(to_json(back).dump() == text);
    for (double v : {0.0, 0.3, 0.5, 0.9, 1.2, 3.0}) CHECK(cdf_eval(back, v) == cdf_eval(d, v));
  }
}

TEST_CASE("malformed distribution JSON is rejected") {
  auto code = [](const char* text) {
    try {
      distribution_from_json(Json::parse(text));
    } catch (const DomainError& e) {
      return e.code();
    }
    return std::string("none");
  };
  CHECK(code(R"({"a": 1})") == "invalid_json");
  CHECK(code(R"({"type": "triangle"})") == "invalid_json");
  CHECK(code(R"({"type": "binary", "low": 0})") == "invalid_json");
  CHECK(code(R"({"type": "binary", "low": 1, "high": 0, "p_low": 0.5})") == "invalid_distribution");
}

TEST_CASE("oracle config JSON round-trips") {
  OracleConfig c;
  c.value_grid_size = 123;
  c.value_grid_max = 4.5;
  c.families = {Family::Binary, Family::ClosedFormSeed};
  c.seed = 99;
  const auto back = oracle_config_from_json(to_json(c));
  CHECK(back.value_grid_size == 123);
  CHECK(back.value_grid_max == 4.5);
  CHECK(back.families == c.families);
  CHECK(back.seed == 99);
  CHECK(to_json(back).dump() == to_json(c).dump());
}

TEST_CASE("cli maxmin examples") {
  const auto b = run({"maxmin", "--setting", "bounded", "--mean", "0.5", "--vmax", "1", "--cost", "0", "--bidders", "3"});
  REQUIRE(b.code == 0);
  const auto bj = Json::parse(b.out);
  CHECK(bj["maxmin_revenue"].get<double>() == Approx(7.0 / 16.0).epsilon(1e-15));
  CHECK(bj["price_set"]["low"].get<double>() == 0.0);
  CHECK(bj["price_set"]["high"].get<double>() == 0.0);
  CHECK(bj["worst_case"]["type"] == "binary");
  CHECK(bj["setting"]["setting"] == "bounded");

  const auto v = run({"maxmin", "--setting", "variance", "--mean", "1", "--sigma", "1", "--cost", "0", "--bidders", "2"});
  REQUIRE(v.code == 0);
  const auto vj = Json::parse(v.out);
  CHECK(vj["maxmin_revenue"].get<double>() == Approx(4.0 / 9.0).epsilon(1e-13));
  CHECK(vj["unique"] == true);
  CHECK(vj["gamma_n"].is_null());
}

TEST_CASE("cli threat-curve example") {
  const auto r = run({"threat-curve", "--setting", "bounded", "--mean", "0.5", "--vmax", "1", "--cost", "0.4",
                      "--bidders", "3", "--grid", "200"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 201);
  CHECK(rows[0] == "r,threat_revenue,maxmin_revenue");
  std::vector<double> rs, rev;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream in(rows[i]);
    std::string a, b, c;
    std::getline(in, a, ',');
    std::getline(in, b, ',');
    std::getline(in, c, ',');
    rs.push_back(std::stod(a));
    rev.push_back(std::stod(b));
    CHECK(std::stod(c) == Approx(4.0 / 9.0).epsilon(1e-15));
  }
  for (std::size_t i = 1; i < rs.size(); ++i) {
    if (rs[i - 1] > 1.0 / 3.0 && rs[i] < 0.4) CHECK(rev[i] > rev[i - 1]);
    if (rs[i - 1] >= 0.4 && rs[i] < 0.5) CHECK(rev[i] < rev[i - 1]);
    if (rs[i] >= 0.5) CHECK(rev[i] == Approx(0.4).epsilon(1e-15));
  }
}

TEST_CASE("cli asymptotics header and size") {
  const auto r = run({"asymptotics", "--n-max", "50"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  CHECK(rows[0] == "n,gap_bounded,gap_variance,gap_correlated,n_sq_alpha");
  CHECK(rows.size() == 50);
  CHECK(rows[1].rfind("2,", 0) == 0);
}

TEST_CASE("cli worst-case feeds simulate") {
  const auto path = scratch("worst.json");
  const auto w = run({"worst-case", "--setting", "variance", "--mean", "1", "--sigma", "0.5", "--cost", "0.2",
                      "--bidders", "3", "--out", path.string()});
  REQUIRE(w.code == 0);
  CHECK(w.out.empty());
  const auto sim = run({"simulate", "--dist", path.string(), "--bidders", "3", "--cost", "0.2", "--reserve", "0.2",
                        "--samples", "400000", "--seed", "5"});
  REQUIRE(sim.code == 0);
  const auto j = Json::parse(sim.out)["report"];
  const double truth = maxmin_variance(AuctionSetting::variance_bound(3, 0.2, 1.0, 0.5)).maxmin_revenue;
  CHECK(j["analytic"].get<double>() == Approx(truth).epsilon(1e-12));
  CHECK(j["quadrature"].get<double>() == Approx(truth).epsilon(1e-8));
  CHECK(std::abs(j["mc_estimate"].get<double>() - truth) <= 4.0 * j["mc_stderr"].get<double>());
  CHECK(j["samples"] == 400000);
}

TEST_CASE("cli exit codes") {
  CHECK(run({"maxmin", "--setting", "bounded", "--mean", "0.5", "--bidders", "3"}).code == 2);
  CHECK(run({"maxmin", "--setting", "variance", "--mean", "1", "--vmax", "2", "--sigma", "1", "--bidders", "2"}).code == 2);
  CHECK(run({"maxmin", "--setting", "bounded", "--mean", "0.5", "--vmax", "1", "--bidders", "3", "--bogus"}).code == 2);
  CHECK(run({"maxmin", "--setting", "bounded", "--mean", "0.5", "--vmax", "0.4", "--bidders", "3"}).code == 2);
  CHECK(run({"maxmin", "--setting", "bounded", "--mean", "0.5", "--vmax", "1", "--bidders", "1"}).code == 2);
  CHECK(run({"maxmin", "--setting", "bounded", "--mean", "0.5", "--vmax", "1", "--cost", "0.6", "--bidders", "3"})
            .code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"simulate", "--dist", scratch("missing.json").string(), "--bidders", "2"}).code == 2);
  CHECK(run({"simulate", "--dist", scratch("missing.json").string(), "--bidders", "2", "--samples", "10"}).code == 2);
  const auto bad = run({"maxmin", "--setting", "bounded", "--mean", "0.5", "--bidders", "3"});
  CHECK(bad.err.rfind("error: ", 0) == 0);
  CHECK(bad.out.empty());
}

TEST_CASE("cli verify exits 3 when the searched families cannot reach the bound") {
  const std::vector<std::string> base{"verify", "--setting", "variance", "--mean", "1", "--sigma", "0.5",
                                      "--bidders", "3", "--r-grid", "20", "--format", "csv"};
  auto narrow = base;
  narrow.insert(narrow.end(), {"--families", "binary"});
  const auto r = run(narrow);
  CHECK(r.code == 3);
  CHECK(lines(r.out)[0] == "r,oracle_revenue,closed_form_bound,family_tag");
  auto unknown = base;
  unknown.insert(unknown.end(), {"--families", "bogus"});
  CHECK(run(unknown).code == 2);
}

TEST_CASE("cli output is identical across runs and worker counts") {
  const std::vector<std::vector<std::string>> commands{
      {"maxmin", "--setting", "variance", "--mean", "1", "--sigma", "0.5", "--cost", "0.1", "--bidders", "4"},
      {"worst-case", "--setting", "bounded", "--mean", "0.5", "--vmax", "1", "--bidders", "3"},
      {"threat-curve", "--setting", "variance", "--mean", "1", "--sigma", "1", "--bidders", "2", "--grid", "50"},
      {"asymptotics", "--n-max", "200"},
      {"verify", "--setting", "bounded", "--mean", "0.5", "--vmax", "1", "--cost", "0.4", "--bidders", "3",
       "--r-grid", "20", "--starts", "3", "--seed", "8"},
  };
  const auto path = scratch("binary.json");
  std::ofstream(path) << R"({"type": "binary", "low": 0.2, "high": 1.4, "p_low": 0.6})";
  auto all = commands;
  all.push_back({"simulate", "--dist", path.string(), "--bidders", "3", "--reserve", "0.3", "--samples", "200000",
                 "--seed", "3"});
  for (const auto& cmd : all) {
    ::setenv("ROBUST_RESERVE_THREADS", "1", 1);
    const auto a = run(cmd);
    ::setenv("ROBUST_RESERVE_THREADS", "5", 1);
    const auto b = run(cmd);
    ::unsetenv("ROBUST_RESERVE_THREADS");
    const auto c = run(cmd);
    INFO(cmd[0]);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
  }
}
