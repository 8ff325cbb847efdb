#include "chaplie/builtin_algebras.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "chaplie/errors.hpp"

namespace chaplie {
namespace {

Matrix unit(int n, int i, int j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

int parse_int(const std::string& s, const std::string& id) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) throw InputError("bad algebra id '" + id + "'");
  return v;
}

Matrix antidiagonal_so(int p, int q, int i) {
  const int n = p + q;
  const int r = p - q + i, c = p + q - 1 - i;
  return unit(n, r, c) + unit(n, c, r);
}

}  // namespace

std::string AlgebraSpec::id() const {
  switch (family) {
    case Family::so_pq: return "so:" + std::to_string(params[0]) + "," + std::to_string(params[1]);
    case Family::sl_n: return "sl:" + std::to_string(params[0]);
    case Family::sp_n: return "sp:" + std::to_string(params[0]);
    case Family::g2_split: return "g2";
  }
  return {};
}

// dense structure-constant tables grow like dim^3
constexpr int kMaxMatrixDim = 12;

AlgebraSpec parse_algebra_id(const std::string& id) {
  if (id == "g2") return {Family::g2_split, {}};
  const auto colon = id.find(':');
  if (colon == std::string::npos) throw InputError("unknown algebra id '" + id + "' (expected so:p,q, sl:n, sp:n or g2)");
  const std::string fam = id.substr(0, colon), rest = id.substr(colon + 1);
  if (fam == "so") {
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw InputError("so needs two parameters: so:p,q");
    const int p = parse_int(rest.substr(0, comma), id), q = parse_int(rest.substr(comma + 1), id);
    if (q < 1 || p < q || p + q < 3) throw InputError("so:p,q requires p >= q >= 1 and p + q >= 3");
    if (p + q > kMaxMatrixDim) throw InputError("so:p,q limited to p + q <= " + std::to_string(kMaxMatrixDim));
    return {Family::so_pq, {p, q}};
  }
  if (fam == "sl") {
    const int n = parse_int(rest, id);
    if (n < 2) throw InputError("sl:n requires n >= 2");
    if (n > kMaxMatrixDim) throw InputError("sl:n limited to n <= " + std::to_string(kMaxMatrixDim));
    return {Family::sl_n, {n}};
  }
  if (fam == "sp") {
    const int n = parse_int(rest, id);
    if (n < 1) throw InputError("sp:n requires n >= 1");
    if (2 * n > kMaxMatrixDim) throw InputError("sp:n limited to n <= " + std::to_string(kMaxMatrixDim / 2));
    return {Family::sp_n, {n}};
  }
  throw InputError("unknown algebra family '" + fam + "'");
}

BuiltinAlgebra make_so_pq(int p, int q) {
  if (q < 1 || p < q || p + q < 3) throw InputError("so(p,q) requires p >= q >= 1 and p + q >= 3");
  const int n = p + q;
  std::vector<Matrix> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const bool same_block = (i < p) == (j < p);
      basis.push_back(same_block ? Matrix(unit(n, i, j) - unit(n, j, i)) : Matrix(unit(n, i, j) + unit(n, j, i)));
    }
  std::vector<Matrix> a;
  for (int i = 0; i < q; ++i) a.push_back(antidiagonal_so(p, q, i));
  return {LieAlgebra("so(" + std::to_string(p) + "," + std::to_string(q) + ")", std::move(basis)), std::move(a)};
}

BuiltinAlgebra make_sl(int n) {
  if (n < 2) throw InputError("sl(n) requires n >= 2");
  std::vector<Matrix> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      basis.push_back(unit(n, i, j) - unit(n, j, i));
      basis.push_back(unit(n, i, j) + unit(n, j, i));
    }
  for (int i = 0; i + 1 < n; ++i) basis.push_back(unit(n, i, i) - unit(n, i + 1, i + 1));
  // regular decreasing diagonal first, so lexicographic positivity gives f_i - f_j, i < j
  std::vector<Matrix> a;
  Matrix reg = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) reg(i, i) = n - 1 - 2 * i;
  a.push_back(reg);
  for (int i = 0; i + 1 < n; ++i) a.push_back(unit(n, i, i) - unit(n, i + 1, i + 1));
  return {LieAlgebra("sl(" + std::to_string(n) + ",R)", std::move(basis)), std::move(a)};
}

BuiltinAlgebra make_sp(int n) {
  if (n < 1) throw InputError("sp(n) requires n >= 1");
  const int N = 2 * n;
  std::vector<Matrix> basis;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) basis.push_back(unit(N, i, j) - unit(N, n + j, n + i));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      basis.push_back(i == j ? unit(N, i, n + i) : Matrix(unit(N, i, n + j) + unit(N, j, n + i)));
      basis.push_back(i == j ? unit(N, n + i, i) : Matrix(unit(N, n + i, j) + unit(N, n + j, i)));
    }
  std::vector<Matrix> a;
  for (int i = 0; i < n; ++i) a.push_back(unit(N, i, i) - unit(N, n + i, n + i));
  return {LieAlgebra("sp(" + std::to_string(n) + ",R)", std::move(basis)), std::move(a)};
}

BuiltinAlgebra make_g2_split() {
  // derivations of the split 3-form e123 - e145 - e167 - e246 + e257 + e347 + e356
  constexpr std::array<std::pair<std::array<int, 3>, double>, 7> terms{{
      {{0, 1, 2}, 1.0}, {{0, 3, 4}, -1.0}, {{0, 5, 6}, -1.0}, {{1, 3, 5}, -1.0},
      {{1, 4, 6}, 1.0}, {{2, 3, 6}, 1.0}, {{2, 4, 5}, 1.0}}};
  std::array<double, 343> phi{};
  auto at = [](int i, int j, int k) { return 49 * i + 7 * j + k; };
  for (const auto& [t, s] : terms) {
    const int i = t[0], j = t[1], k = t[2];
    phi[at(i, j, k)] = phi[at(j, k, i)] = phi[at(k, i, j)] = s;
    phi[at(j, i, k)] = phi[at(i, k, j)] = phi[at(k, j, i)] = -s;
  }
  Matrix cond = Matrix::Zero(343, 49);
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b) {
      // X = E_ab acts on phi by -(phi(Xu,v,w) + phi(u,Xv,w) + phi(u,v,Xw))
      const int col = a + 7 * b;  // column-major flattening of E_ab
      for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j)
          for (int k = 0; k < 7; ++k) {
            double v = 0.0;
            if (b == i) v += phi[at(a, j, k)];
            if (b == j) v += phi[at(i, a, k)];
            if (b == k) v += phi[at(i, j, a)];
            cond(at(i, j, k), col) += v;
          }
    }
  Eigen::JacobiSVD<Matrix> svd(cond, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  std::vector<Matrix> basis;
  for (int j = 0; j < 49; ++j) {
    if (j < sv.size() && sv(j) > 1e-9 * sv(0)) continue;
    Vector v = svd.matrixV().col(j);
    // clean round-off so the basis entries are reproducible to the last bit
    for (auto& x : v)
      if (std::abs(x) < 1e-14) x = 0.0;
    basis.push_back(Eigen::Map<const Matrix>(v.data(), 7, 7));
  }
  if (basis.size() != 14) {
    std::ostringstream os;
    os << "g2: derivation algebra has dimension " << basis.size() << ", expected 14";
    throw ConstructionError(os.str());
  }
  LieAlgebra alg("g2(split)", std::move(basis));
  // seed a with the p-part of the projection of E_14 + E_41 into g2; the
  // greedy extension completes it to rank 2
  const Matrix probe = unit(7, 0, 3) + unit(7, 3, 0);
  const Matrix seed = CartanSplit::project_p(alg.element(alg.coordinates(probe)));
  return {std::move(alg), {seed}};
}

BuiltinAlgebra make_builtin(const AlgebraSpec& spec) {
  switch (spec.family) {
    case Family::so_pq: return make_so_pq(spec.params.at(0), spec.params.at(1));
    case Family::sl_n: return make_sl(spec.params.at(0));
    case Family::sp_n: return make_sp(spec.params.at(0));
    case Family::g2_split: return make_g2_split();
  }
  throw InputError("unknown family");
}

AlgebraStructure build_structure(const AlgebraSpec& spec, std::uint64_t seed) {
  auto b = make_builtin(spec);
  return analyze(std::move(b.algebra), b.canonical_a, seed);
}

Vector w0_from_matrix(const AlgebraStructure& st, const Matrix& w0) {
  const auto& alg = st.algebra;
  if (w0.rows() != alg.matrix_dim() || w0.cols() != alg.matrix_dim())
    throw InputError("w0 matrix has the wrong size");
  const Vector c = orthonormal_coordinates(alg, st.roots.a_basis, w0);
  Matrix back = Matrix::Zero(w0.rows(), w0.cols());
  for (int i = 0; i < c.size(); ++i) back += c(i) * st.roots.a_basis[i];
  if ((back - w0).norm() > 1e-9 * std::max(1.0, w0.norm())) throw InputError("w0 is not an element of a");
  return c;
}

Vector default_w0(const AlgebraSpec& spec, const AlgebraStructure& st) {
  const int n = st.algebra.matrix_dim();
  switch (spec.family) {
    case Family::so_pq: {
      const int p = spec.params[0], q = spec.params[1];
      Matrix w = Matrix::Zero(n, n);
      for (int i = 0; i < q; ++i) w += antidiagonal_so(p, q, i);
      return w0_from_matrix(st, w);
    }
    case Family::sl_n: {
      Matrix w = Matrix::Zero(n, n);
      if (n == 3) {
        w.diagonal() << 1.0, 0.3, -1.3;
      } else {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += w(i, i) = 1.0 / (1.0 + i) + 0.1 * i * i;
        w.diagonal().array() -= sum / n;
      }
      return w0_from_matrix(st, w);
    }
    case Family::sp_n: {
      Matrix w = Matrix::Zero(n, n);
      const int h = n / 2;
      for (int i = 0; i < h; ++i) {
        w(i, i) = 0.5;
        w(h + i, h + i) = -0.5;
      }
      return w0_from_matrix(st, w);
    }
    case Family::g2_split: {
      const auto simple = simple_roots(st.roots);
      const Vector& l1 = st.roots.roots[simple.at(0)];
      const Vector& l2 = st.roots.roots[simple.at(1)];
      // w orthogonal to the long simple root, scaled so lambda2(w) = 1
      Vector w(2);
      w << -l1(1), l1(0);
      return w / l2.dot(w);
    }
  }
  throw InputError("unknown family");
}

}  // namespace chaplie
