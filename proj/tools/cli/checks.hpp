#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace chaplie::app {

/// One row of a verification table. `pass` is empty for informational rows.
struct CheckResult {
  std::string group;
  std::string name;
  Json value;
  std::string relation;  // "<", ">", "==", "in" or "" for information only
  Json threshold;
  std::optional<bool> pass;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  Json extra = Json::object();  // group-level detail (verdicts, witnesses, ladders)

  bool all_pass() const;
  Json to_json() const;
};

/// -[Ad(s)u, w0] evaluated on raw matrices for so(n,1), compared with the
/// ball rolling map u -> -omega v0 on R^n (v0 the R^n vector of w0).
double ball_connection_residual(const ChaplyginModel& model, const PhaseState& x);

/// Distances between the compressed and full-system trajectories.
struct OracleRun {
  double distance = 0.0;
  double constraint = 0.0;
  std::vector<double> ladder_distances;
  bool monotone = true;
};
OracleRun run_oracle(const ChaplyginModel& model, const PhaseState& x0, const OracleConfig& cfg);

VerificationReport run_verifications(const RunConfig& cfg, const ChaplyginModel& model);

}  // namespace chaplie::app
