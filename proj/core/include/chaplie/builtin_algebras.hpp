#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chaplie/lie_core.hpp"
#include "chaplie/root_engine.hpp"

namespace chaplie {

enum class Family { so_pq, sl_n, sp_n, g2_split };

struct AlgebraSpec {
  Family family;
  std::vector<int> params;  // (p, q), (n), (n) or empty

  /// Canonical text form: "so:3,1", "sl:3", "sp:2", "g2".
  std::string id() const;
};

/// Parses `so:p,q`, `sl:n`, `sp:n`, `g2`. Throws InputError.
AlgebraSpec parse_algebra_id(const std::string& id);

struct BuiltinAlgebra {
  LieAlgebra algebra;
  std::vector<Matrix> canonical_a;  // seed for maximal_abelian (may be partial)
};

BuiltinAlgebra make_so_pq(int p, int q);
BuiltinAlgebra make_sl(int n);
BuiltinAlgebra make_sp(int n);
BuiltinAlgebra make_g2_split();
BuiltinAlgebra make_builtin(const AlgebraSpec& spec);

/// Convenience: make_builtin + analyze with the canonical a.
AlgebraStructure build_structure(const AlgebraSpec& spec, std::uint64_t seed = 0);

/// Family default for w0, as coordinates in roots.a_basis:
///  so:p,q  -> the antidiagonal element E + E^T normalized to lambda(w0) = 1
///             (the unit-speed ball for q = 1);
///  sl:n    -> diag(1, 0.3, -1.3) for n = 3, otherwise a fixed regular diagonal;
///  sp:n    -> diag(a,..,a,-a,..,-a) with a = 1/2, so lambda(w0) = 1 on Phi;
///  g2      -> kernel of the long simple root, short simple root value 1.
Vector default_w0(const AlgebraSpec& spec, const AlgebraStructure& st);

/// Coordinates in a_basis of an explicit w0 matrix; throws InputError if the
/// matrix is not in span(a_basis).
Vector w0_from_matrix(const AlgebraStructure& st, const Matrix& w0);

}  // namespace chaplie
