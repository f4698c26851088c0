#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mcf/errors.hpp"
#include "mcf/scenario.hpp"

using namespace mcf;

namespace {

const char* kSphere = R"({
  "spec": 1, "name": "s", "n": 2, "N": 32,
  "initial": {"kind": "sphere", "kappa0": 0.5},
  "flow": {"dt": 1e-3, "t_end": 0.01},
  "checks": ["harnack", {"kind": "reflection", "delta": 0.1}]
})";

std::string config_message(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parse a sphere scenario") {
  const auto sc = parse_scenario(kSphere);
  CHECK(sc.name == "s");
  CHECK(sc.intervals == 32);
  CHECK(sc.initial.kind == InitialData::Kind::Sphere);
  CHECK(sc.flow.t_end == 0.01);
  REQUIRE(sc.checks.size() == 2);
  CHECK(sc.checks[1].kind == "reflection");
  CHECK(sc.checks[1].params.at("delta") == 0.1);
  CHECK_FALSE(sc.corrupt_sign);
}

TEST_CASE("config diagnostics name the line or the field") {
  CHECK(config_message("{\n  \"spec\": 1,\n  \"n\" 2\n}").find("line 3") != std::string::npos);
  CHECK(config_message(R"({"spec": 2, "name": "x", "n": 2, "initial": {"kind": "equator"}})").find("spec") !=
        std::string::npos);
  CHECK(config_message(R"({"spec": 1, "name": "x", "n": 2, "initial": {"kind": "sphere"}})")
            .find("initial.kappa0") != std::string::npos);
  CHECK(config_message(R"({"spec": 1, "name": "x", "n": 2, "initial": {"kind": "equator"}, "flow": {"dt": "a"}})")
            .find("flow.dt") != std::string::npos);
  CHECK(config_message(R"({"spec": 1, "name": "x", "n": 2, "initial": {"kind": "equator"}, "checks": ["nope"]})")
            .find("checks[0]") != std::string::npos);
  CHECK(config_message(R"({"spec": 1, "name": "x", "n": 2, "initial": {"kind": "equator"}, "bogus": 1})")
            .find("bogus") != std::string::npos);
  CHECK(config_message(R"({"spec": 1, "name": "x", "n": 2, "initial": {"kind": "profile", "a0": 2.0}})")
            .find("initial") != std::string::npos);
  CHECK(config_message(R"({"spec": 1, "name": "x", "n": 2, "initial": {"kind": "equator"}, "checks": ["decay"]})")
            .find("sphere") != std::string::npos);
  CHECK(config_message(
            R"({"spec": 1, "name": "x", "n": 2, "initial": {"kind": "equator"}, "checks": [{"kind": "identities", "levels": 2}]})")
            .find("levels") != std::string::npos);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), Error);
}

TEST_CASE("exit codes and status combination") {
  CHECK(exit_code(CheckStatus::Pass) == 0);
  CHECK(exit_code(CheckStatus::Fail) == 2);
  CHECK(exit_code(CheckStatus::Inconclusive) == 3);
  CHECK(combine(CheckStatus::Pass, CheckStatus::Inconclusive) == CheckStatus::Inconclusive);
  CHECK(combine(CheckStatus::Inconclusive, CheckStatus::Fail) == CheckStatus::Fail);
}

TEST_CASE("report JSON round-trips") {
  RunReport r;
  r.scenario = "x";
  r.termination = "reached_t_end";
  r.states = 11;
  r.t_final = 0.1 + 0.2;  // not exactly representable in short decimal
  r.checks.push_back({"harnack", CheckStatus::Pass, {{"global_min", 1.0 / 3.0}, {"worst_node", 4}}});
  r.checks.push_back({"reflection", CheckStatus::Fail, {{"min_defect", nullptr}}});
  r.sphere_oracle = SphereOracle{0.2, 0.7459123455, 0.7459123456, 1.3e-10};
  r.warnings = {"w"};
  r.status = CheckStatus::Fail;
  r.config = {{"spec", 1}};
  const auto text = to_json(r).dump(2);
  CHECK(report_from_json(nlohmann::json::parse(text)) == r);

  r.sphere_oracle.reset();
  CHECK(report_from_json(to_json(r)) == r);
}

TEST_CASE("execute writes trajectory and report") {
  const auto sc = parse_scenario(kSphere);
  RunOptions opt;
  opt.output_dir = std::filesystem::temp_directory_path() / "mcf_scenario_test";
  const auto rep = execute(sc, opt);
  CHECK(rep.status == CheckStatus::Pass);
  CHECK(rep.states == 11);
  REQUIRE(rep.sphere_oracle.has_value());
  CHECK(rep.sphere_oracle->relative_error < 1e-8);
  REQUIRE(rep.checks.size() == 2);
  CHECK(rep.checks[0].kind == "harnack");

  std::ifstream csv(*opt.output_dir / "trajectory.csv");
  std::string header, row;
  std::getline(csv, header);
  CHECK(header == "t,k,u_k,rho_k,H_k,kappa1_k,kappa2_k,A_sq_k,Q_k");
  std::getline(csv, row);
  CHECK(std::count(row.begin(), row.end(), ',') == 8);
  CHECK(row.back() != ',');  // Q present on a strictly convex state

  std::ifstream js(*opt.output_dir / "report.json");
  const auto parsed = report_from_json(nlohmann::json::parse(js));
  CHECK(parsed == rep);
}

TEST_CASE("Q column is empty when not strictly convex") {
  Trajectory traj;
  traj.states.push_back(
      FlowState::at(0.0, ProfileGrid::constant(2, 16, std::numbers::pi / 2, EquatorFrame::standard(2))));
  std::ostringstream out;
  write_trajectory_csv(out, traj);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line.back() == ',');
}

TEST_CASE("oracle closed forms") {
  const auto rows = oracle_table(2, 0.5, {0.0, -1.0});
  CHECK(rows[0].r == doctest::Approx(1.04720).epsilon(1e-5));
  CHECK(rows[0].H == doctest::Approx(1.15470).epsilon(1e-5));
  CHECK(rows[0].A_sq == doctest::Approx(2.0 / 3.0));
  CHECK(std::abs(rows[1].H - 0.135646) < 1e-6);
  CHECK(rows[1].H_bound == doctest::Approx(rows[0].H * std::exp(-2.0)).epsilon(1e-14));
  CHECK(std::abs(rows[1].H_bound - 0.156272) < 1e-6);
  CHECK(rows[1].H <= rows[1].H_bound);
  CHECK(rows[0].harnack_min == doctest::Approx(std::pow(rows[0].H, 3) / 2));
  CHECK_THROWS_AS(oracle_table(2, 0.5, {0.4}), Error);
  CHECK_THROWS_AS(oracle_table(2, 0.5, {-1.0}, 0.0), Error);
  const auto with_origin = oracle_table(2, 0.5, {0.1}, 0.0);
  CHECK(with_origin[0].harnack_min > std::pow(with_origin[0].H, 3) / 2);

  std::ostringstream out;
  write_oracle_csv(out, rows);
  CHECK(out.str().rfind("t,r,H,A_sq,harnack_min,H_bound\n", 0) == 0);
}
