#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <chaplie/chaplie.hpp>

namespace chaplie::app {

/// How the initial phase-space point is chosen.
struct InitialState {
  enum class Group { identity, random, explicit_matrix };
  Group group = Group::random;
  Matrix s;                        // explicit_matrix only
  std::optional<Vector> u;         // adapted coordinates; random when empty
  double scale = 1.0;              // spread of random draws
  bool zero_momentum = false;      // project onto J_H = 0 after drawing
};

struct OracleConfig {
  double h = 1e-4;
  double T = 1.0;
  double tolerance = 1e-6;
  std::vector<double> ladder{0.1, 0.05, 0.025};
  std::optional<Vector> position;  // V-coordinates over Phi; zero when empty
};

struct SampleCounts {
  int states = 20;             // measure / truncation / exactness
  int connection_states = 100;
  int ham_samples = 20;        // random group elements besides the identity
  int rubber_states = 20;
};

struct RunConfig {
  std::string algebra;
  AlgebraSpec spec{};
  std::optional<Vector> w0;          // coordinates in a_basis; family default when empty
  std::optional<Matrix> w0_matrix;   // alternative explicit matrix form
  InertiaSpec inertia;
  std::vector<double> jovanovic_a;   // kind == jovanovic
  IntegratorConfig integrator;
  OracleConfig oracle;
  InitialState initial;
  SampleCounts samples;
  std::uint64_t seed = 0;
  std::string out_dir;               // empty: print only
  std::string prefix = "run";
  std::vector<std::string> verifications;  // empty: every applicable check
  std::map<std::string, double> thresholds;
  std::optional<std::string> expect_ham;   // "pass" / "fail": makes the verdict a checked item
  HamThresholds ham_thresholds;           // relative to max lambda(w0)^2
  bool run_oracle = false;           // simulate: also run the full-system oracle

  double threshold(const std::string& name, double fallback) const;
  bool wants(const std::string& check) const;
};

/// Parses a config document; throws InputError on any schema violation.
RunConfig parse_config(const Json& j);
RunConfig load_config(const std::string& path);

/// Echo of the resolved model parameters, included in every report.
Json config_echo(const RunConfig& cfg, const ChaplyginModel& model);

std::string family_name(Family f);

/// Builds the structure and model described by `cfg`.
ChaplyginModel build_model(const RunConfig& cfg);
PhaseState initial_state(const RunConfig& cfg, const ChaplyginModel& model);

}  // namespace chaplie::app
