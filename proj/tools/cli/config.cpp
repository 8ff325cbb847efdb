#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>

namespace chaplie::app {

namespace {

void only_keys(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw InputError(where + ": unknown key \"" + k + "\"");
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& where, int lo) {
  if (!j.is_number_integer()) throw InputError(where + ": expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > 1000000) throw InputError(where + ": out of range");
  return static_cast<int>(v);
}

bool boolean(const Json& j, const std::string& where) {
  if (!j.is_boolean()) throw InputError(where + ": expected true/false");
  return j.get<bool>();
}

std::string string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where + ": expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number(x, where));
  return out;
}

const std::set<std::string> kChecks{"roots",     "selection", "connection", "horizontal", "lambda",
                                    "truncation", "measure",   "density",    "conservation", "oracle",
                                    "hamiltonization", "exactness", "rubber"};

const std::set<std::string> kThresholds{
    "adapted_basis", "integer_fit", "connection", "ball_map", "horizontal", "second_order",
    "lambda_semibasic", "lambda_h_horizontal", "lambda_linear", "truncation_energy", "truncation_momentum",
    "truncation_nondegeneracy", "measure", "density", "energy_drift", "momentum_drift", "oracle_constraint",
    "exactness", "exactness_fail", "rubber_lambda", "rubber_tangency", "rubber_invariance", "rubber_hc_invariance"};

void parse_integrator(const Json& j, IntegratorConfig& c) {
  only_keys(j, "integrator", {"h", "T", "reorthonormalize", "fd_step", "sample_every", "max_step_drift"});
  if (j.contains("h")) c.h = number(j["h"], "integrator.h");
  if (j.contains("T")) c.T = number(j["T"], "integrator.T");
  if (j.contains("reorthonormalize")) c.reorthonormalize = boolean(j["reorthonormalize"], "integrator.reorthonormalize");
  if (j.contains("fd_step")) c.fd_step = number(j["fd_step"], "integrator.fd_step");
  if (j.contains("sample_every")) c.sample_every = integer(j["sample_every"], "integrator.sample_every", 1);
  if (j.contains("max_step_drift")) c.max_step_drift = number(j["max_step_drift"], "integrator.max_step_drift");
  c.validate();
}

void parse_oracle(const Json& j, OracleConfig& o) {
  only_keys(j, "oracle", {"h", "T", "tolerance", "ladder", "position"});
  if (j.contains("h")) o.h = number(j["h"], "oracle.h");
  if (j.contains("T")) o.T = number(j["T"], "oracle.T");
  if (j.contains("tolerance")) o.tolerance = number(j["tolerance"], "oracle.tolerance");
  if (j.contains("ladder")) {
    o.ladder = numbers(j["ladder"], "oracle.ladder");
    if (o.ladder.size() < 2) throw InputError("oracle.ladder: need at least two step sizes");
    for (std::size_t i = 0; i < o.ladder.size(); ++i) {
      if (!(o.ladder[i] > 0.0)) throw InputError("oracle.ladder: steps must be positive");
      if (i && !(o.ladder[i] < o.ladder[i - 1])) throw InputError("oracle.ladder: steps must decrease");
    }
  }
  if (j.contains("position")) o.position = vector_from_json(j["position"]);
  if (!(o.h > 0.0 && o.T > o.h)) throw InputError("oracle: need 0 < h < T");
  if (!(o.tolerance > 0.0)) throw InputError("oracle.tolerance must be positive");
}

void parse_inertia(const Json& j, RunConfig& cfg) {
  if (j.is_string()) {
    if (j.get<std::string>() != "identity") throw InputError("inertia: the only string form is \"identity\"");
    cfg.inertia = InertiaSpec::identity();
    return;
  }
  only_keys(j, "inertia", {"kind", "data", "matrix"});
  const std::string kind = j.contains("kind") ? string(j["kind"], "inertia.kind") : "identity";
  if (kind == "identity") {
    cfg.inertia = InertiaSpec::identity();
  } else if (kind == "diagonal") {
    if (!j.contains("data")) throw InputError("inertia: diagonal needs \"data\"");
    cfg.inertia = InertiaSpec::diagonal(numbers(j["data"], "inertia.data"));
  } else if (kind == "jovanovic") {
    if (!j.contains("data")) throw InputError("inertia: jovanovic needs \"data\" (the a-vector)");
    cfg.jovanovic_a = numbers(j["data"], "inertia.data");
    cfg.inertia.kind = InertiaSpec::Kind::jovanovic;
  } else if (kind == "full") {
    if (!j.contains("matrix")) throw InputError("inertia: full needs \"matrix\"");
    cfg.inertia = InertiaSpec::full_matrix(matrix_from_json(j["matrix"]));
  } else {
    throw InputError("inertia.kind: expected identity, diagonal, jovanovic or full");
  }
}

void parse_initial(const Json& j, InitialState& s) {
  only_keys(j, "initial_state", {"s", "u", "scale", "zero_momentum"});
  if (j.contains("s")) {
    const auto& v = j["s"];
    if (v.is_string()) {
      const auto name = v.get<std::string>();
      if (name == "identity") s.group = InitialState::Group::identity;
      else if (name == "random") s.group = InitialState::Group::random;
      else throw InputError("initial_state.s: expected \"identity\", \"random\" or a matrix");
    } else {
      s.group = InitialState::Group::explicit_matrix;
      s.s = matrix_from_json(v);
    }
  }
  if (j.contains("u")) {
    const auto& v = j["u"];
    if (v.is_string()) {
      if (v.get<std::string>() != "random") throw InputError("initial_state.u: expected \"random\" or an array");
    } else {
      s.u = vector_from_json(v);
    }
  }
  if (j.contains("scale")) {
    s.scale = number(j["scale"], "initial_state.scale");
    if (!(s.scale > 0.0)) throw InputError("initial_state.scale must be positive");
  }
  if (j.contains("zero_momentum")) s.zero_momentum = boolean(j["zero_momentum"], "initial_state.zero_momentum");
}

}  // namespace

double RunConfig::threshold(const std::string& name, double fallback) const {
  const auto it = thresholds.find(name);
  return it == thresholds.end() ? fallback : it->second;
}

bool RunConfig::wants(const std::string& check) const {
  return verifications.empty() || std::find(verifications.begin(), verifications.end(), check) != verifications.end();
}

RunConfig parse_config(const Json& j) {
  only_keys(j, "config", {"algebra", "w0", "inertia", "integrator", "oracle", "initial_state", "samples", "seed",
                          "outputs", "verifications", "thresholds", "expect_ham", "ham_thresholds", "run_oracle"});
  RunConfig cfg;
  if (!j.contains("algebra")) throw InputError("config: \"algebra\" is required");
  cfg.spec = parse_algebra_id(string(j["algebra"], "algebra"));
  cfg.algebra = cfg.spec.id();

  if (j.contains("w0")) {
    const auto& w = j["w0"];
    if (w.is_string()) {
      if (w.get<std::string>() != "default") throw InputError("w0: the only string form is \"default\"");
    } else if (w.is_object()) {
      only_keys(w, "w0", {"matrix"});
      if (!w.contains("matrix")) throw InputError("w0: object form needs \"matrix\"");
      cfg.w0_matrix = matrix_from_json(w["matrix"]);
    } else {
      cfg.w0 = vector_from_json(w);
    }
  }
  if (j.contains("inertia")) parse_inertia(j["inertia"], cfg);
  if (j.contains("integrator")) parse_integrator(j["integrator"], cfg.integrator);
  if (j.contains("oracle")) parse_oracle(j["oracle"], cfg.oracle);
  if (j.contains("initial_state")) parse_initial(j["initial_state"], cfg.initial);
  if (j.contains("samples")) {
    const auto& s = j["samples"];
    only_keys(s, "samples", {"states", "connection_states", "ham_samples", "rubber_states"});
    if (s.contains("states")) cfg.samples.states = integer(s["states"], "samples.states", 1);
    if (s.contains("connection_states"))
      cfg.samples.connection_states = integer(s["connection_states"], "samples.connection_states", 1);
    if (s.contains("ham_samples")) cfg.samples.ham_samples = integer(s["ham_samples"], "samples.ham_samples", 0);
    if (s.contains("rubber_states")) cfg.samples.rubber_states = integer(s["rubber_states"], "samples.rubber_states", 1);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw InputError("seed: expected a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("outputs")) {
    const auto& o = j["outputs"];
    only_keys(o, "outputs", {"dir", "prefix"});
    if (o.contains("dir")) cfg.out_dir = string(o["dir"], "outputs.dir");
    if (o.contains("prefix")) cfg.prefix = string(o["prefix"], "outputs.prefix");
    if (cfg.prefix.empty() || cfg.prefix.find('/') != std::string::npos)
      throw InputError("outputs.prefix must be a non-empty file-name stem");
  }
  if (j.contains("verifications")) {
    if (!j["verifications"].is_array()) throw InputError("verifications: expected an array of names");
    for (const auto& v : j["verifications"]) {
      const auto name = string(v, "verifications");
      if (!kChecks.count(name)) throw InputError("verifications: unknown check \"" + name + "\"");
      cfg.verifications.push_back(name);
    }
  }
  if (j.contains("thresholds")) {
    if (!j["thresholds"].is_object()) throw InputError("thresholds: expected an object");
    for (const auto& [k, v] : j["thresholds"].items()) {
      if (!kThresholds.count(k)) throw InputError("thresholds: unknown name \"" + k + "\"");
      const double t = number(v, "thresholds." + k);
      if (!(t > 0.0)) throw InputError("thresholds." + k + " must be positive");
      cfg.thresholds[k] = t;
    }
  }
  if (j.contains("expect_ham")) {
    const auto e = string(j["expect_ham"], "expect_ham");
    if (e != "pass" && e != "fail") throw InputError("expect_ham: expected \"pass\" or \"fail\"");
    cfg.expect_ham = e;
  }
  if (j.contains("ham_thresholds")) {
    const auto& h = j["ham_thresholds"];
    only_keys(h, "ham_thresholds", {"pass", "fail"});
    if (h.contains("pass")) cfg.ham_thresholds.pass = number(h["pass"], "ham_thresholds.pass");
    if (h.contains("fail")) cfg.ham_thresholds.fail = number(h["fail"], "ham_thresholds.fail");
    if (!(cfg.ham_thresholds.pass > 0.0 && cfg.ham_thresholds.pass <= cfg.ham_thresholds.fail))
      throw InputError("ham_thresholds: need 0 < pass <= fail");
  }
  if (j.contains("run_oracle")) cfg.run_oracle = boolean(j["run_oracle"], "run_oracle");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::so_pq: return "so";
    case Family::sl_n: return "sl";
    case Family::sp_n: return "sp";
    case Family::g2_split: return "g2";
  }
  return "?";
}

ChaplyginModel build_model(const RunConfig& cfg) {
  auto st = std::make_shared<const AlgebraStructure>(build_structure(cfg.spec, cfg.seed));
  Vector w0;
  if (cfg.w0_matrix) w0 = w0_from_matrix(*st, *cfg.w0_matrix);
  else if (cfg.w0) w0 = *cfg.w0;
  else w0 = default_w0(cfg.spec, *st);
  if (w0.size() != st->roots.rank())
    throw InputError("w0: expected " + std::to_string(st->roots.rank()) + " coordinates in the a basis");
  InertiaSpec inertia = cfg.inertia;
  if (inertia.kind == InertiaSpec::Kind::jovanovic) inertia = jovanovic_inertia(*st, cfg.jovanovic_a);
  return ChaplyginModel(st, w0, inertia);
}

PhaseState initial_state(const RunConfig& cfg, const ChaplyginModel& model) {
  // separate stream from the sampling used by the checks
  std::mt19937_64 rng(cfg.seed ^ 0x5eedULL);
  PhaseState x = model.random_state(rng, cfg.initial.scale);
  const auto n = model.structure().algebra.matrix_dim();
  switch (cfg.initial.group) {
    case InitialState::Group::identity: x.s = Matrix::Identity(n, n); break;
    case InitialState::Group::random: break;
    case InitialState::Group::explicit_matrix: {
      const Matrix& s = cfg.initial.s;
      if (s.rows() != n || s.cols() != n) throw InputError("initial_state.s has the wrong size");
      if ((s.transpose() * s - Matrix::Identity(n, n)).norm() > 1e-10 || s.determinant() < 0)
        throw InputError("initial_state.s must be a rotation in K");
      x.s = s;
      break;
    }
  }
  if (cfg.initial.u) {
    if (cfg.initial.u->size() != model.d())
      throw InputError("initial_state.u: expected " + std::to_string(model.d()) + " adapted coordinates");
    x.u = *cfg.initial.u;
  }
  if (cfg.initial.zero_momentum) x = project_to_zero_momentum(model, x);
  return x;
}

Json config_echo(const RunConfig& cfg, const ChaplyginModel& model) {
  Json j;
  j["algebra"] = cfg.algebra;
  j["family"] = family_name(cfg.spec.family);
  j["params"] = cfg.spec.params;
  j["w0"] = to_json(model.w0());
  Json inertia{{"kind", to_string(model.inertia_spec().kind)}};
  if (!cfg.jovanovic_a.empty()) inertia["data"] = cfg.jovanovic_a;
  else if (!model.inertia_spec().data.empty()) inertia["data"] = model.inertia_spec().data;
  j["inertia"] = std::move(inertia);
  j["seed"] = cfg.seed;
  return j;
}

}  // namespace chaplie::app
