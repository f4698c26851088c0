#pragma once

// Scenario files, run reports and the file outputs behind the mcfsim
// subcommands. Scenario JSON carries "spec": 1; everything else is optional
// except name, n and initial.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcf/flow.hpp"
#include "mcf/verifier.hpp"

namespace mcf {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kScenarioSpec = 1;

struct InitialData {
  enum class Kind { Equator, Sphere, Profile };
  Kind kind = Kind::Sphere;
  double kappa0 = 0.5;         // sphere: cos r(0)
  double center_offset = 0.0;  // sphere: tilt of the center towards axis_a
  double a0 = 0.0;             // profile: rho = pi/2 - a0 - sum a_m cos(m u)
  std::vector<double> coefficients;
};

struct CheckRequest {
  std::string kind;  // harnack, q_ode, identities, inequalities, decay, reflection, fit_equator
  nlohmann::json params = nlohmann::json::object();
};

struct Scenario {
  std::string name;
  int n = 2;
  int intervals = 128;  // "N"
  InitialData initial;
  FlowConfig flow;
  std::vector<CheckRequest> checks;
  std::string output_dir = ".";
  bool corrupt_sign = false;  // test fixture: flips the sign of the n H term in the harnack check
  nlohmann::json source;      // the parsed document, echoed into the report

  /// Grid of the initial data at the given resolution.
  ProfileGrid initial_grid(int intervals) const;
};

/// Throws ConfigError with "line L: ..." or "field: ..." diagnostics.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& file);

struct CheckOutcome {
  std::string kind;
  CheckStatus status = CheckStatus::Fail;
  nlohmann::json details = nlohmann::json::object();

  bool operator==(const CheckOutcome&) const = default;
};

struct SphereOracle {
  double t = 0.0;
  double cos_r_simulated = 0.0, cos_r_exact = 0.0;
  double relative_error = 0.0;

  bool operator==(const SphereOracle&) const = default;
};

struct RunReport {
  std::string scenario;
  std::string tool_version = kToolVersion;
  std::string termination;
  int states = 0;
  double t_final = 0.0;
  std::vector<CheckOutcome> checks;
  std::optional<SphereOracle> sphere_oracle;
  std::vector<std::string> warnings;
  CheckStatus status = CheckStatus::Pass;
  nlohmann::json config = nlohmann::json::object();

  bool operator==(const RunReport&) const = default;
};

nlohmann::json to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

/// Worst status wins: Fail over Inconclusive over Pass.
CheckStatus combine(CheckStatus a, CheckStatus b);
/// 0 pass, 2 fail, 3 inconclusive only.
int exit_code(CheckStatus status);

/// Columns t,k,u_k,rho_k,H_k,kappa1_k,kappa2_k,A_sq_k,Q_k at 17 digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Max over nodes of |cos d(X_k, c) - kappa0 e^{n t}| / (kappa0 e^{n t}) at
/// the last state. Empty unless the initial data is a sphere.
std::optional<SphereOracle> sphere_oracle(const Scenario& sc, const Trajectory& traj);

struct RunOptions {
  std::optional<std::filesystem::path> output_dir;  // overrides the scenario
  std::uint64_t seed = 0;
  std::optional<int> levels;  // identities check
};

/// Flows the scenario, runs the requested checks concurrently and writes
/// trajectory.csv and report.json.
RunReport execute(const Scenario& sc, const RunOptions& options = {});

/// Per-identity order table over levels N = base, 2 base, ...
IdentityReport convergence(const Scenario& sc, int levels, int base_intervals = 64);
void write_convergence_csv(std::ostream& out, const IdentityReport& report);

struct OracleRow {
  double t, r, H, A_sq, harnack_min, H_bound;
};
/// Closed forms of the shrinking-sphere family. harnack_min uses t_origin
/// when given, the ancient limit H^3/n otherwise. Throws Collapsed for
/// t >= t*, InvalidArgument for kappa0 outside (0, 1) or t <= t_origin.
std::vector<OracleRow> oracle_table(int n, double kappa0, const std::vector<double>& times,
                                    std::optional<double> t_origin = std::nullopt);
void write_oracle_csv(std::ostream& out, const std::vector<OracleRow>& rows);

}  // namespace mcf
