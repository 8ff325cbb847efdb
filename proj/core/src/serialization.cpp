#include "chaplie/serialization.hpp"

#include <iomanip>
#include <limits>
#include <sstream>

#include "chaplie/errors.hpp"

namespace chaplie {

Json to_json(const Vector& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Json to_json(const Matrix& m) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(std::move(row));
  }
  return j;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError("expected an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw InputError("expected a matrix as an array of rows");
  const auto rows = j.size(), cols = j[0].size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InputError("matrix rows have unequal length");
    m.row(static_cast<Eigen::Index>(r)) = vector_from_json(j[r]).transpose();
  }
  return m;
}

std::string root_label(const std::vector<int>& coefficients) {
  std::string out;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const int c = coefficients[i];
    if (c == 0) continue;
    if (!out.empty()) out += c > 0 ? "+" : "-";
    else if (c < 0) out += "-";
    if (std::abs(c) != 1) out += std::to_string(std::abs(c));
    out += "l" + std::to_string(i + 1);
  }
  return out.empty() ? "0" : out;
}

std::string adapted_label(const RootDatum& rd, int k_index) {
  const int r = rd.k_root.at(k_index);
  if (r < 0) return "m" + std::to_string(k_index + 1);
  const auto coeffs = simple_root_coefficients(rd, simple_roots(rd));
  std::string label = root_label(coeffs[r]);
  if (rd.multiplicities[r] > 1) {
    int a = 1;
    for (int k = 0; k < k_index; ++k) a += rd.k_root[k] == r;
    label += "#" + std::to_string(a);
  }
  return label;
}

Json root_datum_json(const AlgebraStructure& st, bool include_bases) {
  const auto& rd = st.roots;
  const auto simple = simple_roots(rd);
  double fit = 0.0;
  const auto coeffs = simple_root_coefficients(rd, simple, &fit);
  Json j;
  j["algebra"] = st.algebra.name();
  j["dims"] = {{"g", st.algebra.dim()},
               {"k", st.split.k_basis.size()},
               {"p", st.split.p_basis.size()},
               {"a", rd.rank()},
               {"m", rd.dim_m()}};
  j["seed"] = rd.seed;
  Json roots = Json::array();
  for (std::size_t r = 0; r < rd.roots.size(); ++r) {
    roots.push_back({{"label", root_label(coeffs[r])},
                     {"coefficients", coeffs[r]},
                     {"values", to_json(rd.roots[r])},
                     {"length", rd.roots[r].norm()},
                     {"multiplicity", rd.multiplicities[r]}});
  }
  j["positive_roots"] = std::move(roots);
  Json sj = Json::array();
  for (int s : simple) sj.push_back(s);
  j["simple_roots"] = std::move(sj);
  j["integer_fit_residual"] = fit;
  j["adapted_basis_residual"] = adapted_basis_residual(st.algebra, rd);
  if (include_bases) {
    Json bases;
    auto list = [](const std::vector<Matrix>& ms) {
      Json a = Json::array();
      for (const auto& m : ms) a.push_back(to_json(m));
      return a;
    };
    bases["a"] = list(rd.a_basis);
    bases["m"] = list(rd.m_basis);
    bases["Z"] = list(rd.z_basis);
    bases["e"] = list(rd.e_basis);
    j["bases"] = std::move(bases);
  }
  return j;
}

Json ham_report_json(const ChaplyginModel& model, const HamResidualReport& rep) {
  const auto& rd = model.roots();
  auto triple = [&](const TripleResidual& t) {
    return Json{{"kappa", adapted_label(rd, t.kappa)},
                {"mu", adapted_label(rd, t.mu)},
                {"nu", adapted_label(rd, t.nu)},
                {"lhs", t.lhs},
                {"rhs", t.rhs},
                {"residual", t.residual()}};
  };
  Json j;
  j["max_residual"] = rep.max_residual;
  j["scale"] = rep.scale;
  j["band"] = {{"pass_below", rep.thresholds.pass * rep.scale}, {"fail_above", rep.thresholds.fail * rep.scale}};
  j["vacuous"] = rep.vacuous;
  j["samples"] = rep.samples.size();
  j["verdict"] = to_string(rep.verdict);
  if (!rep.vacuous) j["witness"] = triple(rep.worst);
  Json top = Json::array();
  for (const auto& t : rep.top) top.push_back(triple(t));
  j["per_triple_top10"] = std::move(top);
  return j;
}

Json rubber_report_json(const RubberReport& rep) {
  return Json{{"flag_dims", rep.flag_dims},
              {"quotient_flag_dims", rep.quotient_flag_dims},
              {"lambda_insertion", rep.lambda_insertion},
              {"tangency", rep.tangency},
              {"invariance", rep.invariance},
              {"hc_invariance", rep.hc_invariance},
              {"states", rep.states}};
}

Json drift_json(const DriftReport& d) {
  return Json{{"energy_rel", d.energy_rel}, {"momentum", d.momentum}};
}

Json trajectory_json(const Trajectory& traj) {
  Json samples = Json::array();
  for (const auto& s : traj.samples) {
    Json j{{"t", s.t}, {"Hc", s.Hc}, {"JH", to_json(s.JH)}, {"f", s.f},
           {"s", to_json(s.state.s)}, {"u", to_json(s.state.u)}};
    if (s.x.size()) j["x"] = to_json(s.x);
    samples.push_back(std::move(j));
  }
  return Json{{"max_reortho_drift", traj.max_reortho_drift},
              {"max_constraint_residual", traj.max_constraint_residual},
              {"samples", std::move(samples)}};
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  if (traj.samples.empty()) return;
  const auto& first = traj.samples.front();
  const auto n = first.state.s.rows();
  os << "t,Hc";
  for (Eigen::Index i = 0; i < first.JH.size(); ++i) os << ",J" << i;
  os << ",f";
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) os << ",s" << r << "_" << c;
  for (Eigen::Index i = 0; i < first.state.u.size(); ++i) os << ",u" << i;
  for (Eigen::Index i = 0; i < first.x.size(); ++i) os << ",x" << i;
  os << "\n";
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& s : traj.samples) {
    os << s.t << "," << s.Hc;
    for (Eigen::Index i = 0; i < s.JH.size(); ++i) os << "," << s.JH(i);
    os << "," << s.f;
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) os << "," << s.state.s(r, c);
    for (Eigen::Index i = 0; i < s.state.u.size(); ++i) os << "," << s.state.u(i);
    for (Eigen::Index i = 0; i < s.x.size(); ++i) os << "," << s.x(i);
    os << "\n";
  }
  os.precision(old);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace chaplie
