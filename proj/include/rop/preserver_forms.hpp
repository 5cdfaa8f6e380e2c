#pragma once

// Canonical rank-one preservers on M_m, m = n_1 ... n_k:
//
//   phi(A_1 (x) ... (x) A_k) = M ( (x)_{P1} A_i (x) (x)_{P2} A_i^T
//                                  (x) (x)_{P3} vec(A_i) (x) (x)_{P4} vec^T(A_i) ) N^T
//
// materialized as the m^2 x m^2 matrix acting on row-major vec(A).

#include <optional>
#include <vector>

#include "rop/core.hpp"
#include "rop/partition.hpp"
#include "rop/subspaces.hpp"
#include "rop/tensor_core.hpp"

namespace rop {

struct MapOrigin {
  Partition partition;
  ComplexMatrix m;
  ComplexMatrix n;
};

/// Linear map on M_m stored by its action on vec: vec(phi(A)) = phi * vec(A).
struct PreserverMap {
  DimsProfile dims;
  ComplexMatrix phi;
  std::optional<MapOrigin> origin;

  Index m() const { return dims.m(); }
};

inline PreserverMap make_map(DimsProfile dims, ComplexMatrix phi) {
  const Index m = dims.m();
  if (phi.rows() != m * m || phi.cols() != m * m) throw Error(ErrorKind::dimension, "PreserverMap: phi must be m^2 x m^2");
  return {std::move(dims), std::move(phi), std::nullopt};
}

/// Pi_P: routes (x_1 (x) y_1) (x) ... (x) (x_k (x) y_k) to u (x) v, where u
/// collects the column tokens of the partition and v the row tokens.
inline IndexPermutation partition_routing(const DimsProfile& dims, const Partition& p) {
  if (p.k() != dims.k()) throw Error(ErrorKind::invalid_argument, "partition size does not match dims");
  TokenList target = p.column_tokens();
  const TokenList rows = p.row_tokens();
  target.insert(target.end(), rows.begin(), rows.end());

  std::vector<Index> fdims, perm(static_cast<std::size_t>(2 * dims.k()));
  for (Index i = 0; i < dims.k(); ++i) {
    fdims.push_back(dims.n(i));
    fdims.push_back(dims.n(i));
  }
  for (std::size_t t = 0; t < target.size(); ++t)
    perm[static_cast<std::size_t>(2 * target[t].subsystem + (target[t].is_y ? 1 : 0))] = static_cast<Index>(t);
  return factor_permutation(fdims, perm);
}

inline ComplexVector token_product(const TokenList& tokens, const std::vector<ComplexVector>& x,
                                   const std::vector<ComplexVector>& y) {
  std::vector<ComplexVector> parts;
  parts.reserve(tokens.size());
  for (const auto& t : tokens) parts.push_back(t.is_y ? y[static_cast<std::size_t>(t.subsystem)] : x[static_cast<std::size_t>(t.subsystem)]);
  return kron_vectors(parts);
}

/// P with P ((x) of `from`) = (x) of `to`, where `to` is a reordering of `from`.
inline IndexPermutation token_reorder(const DimsProfile& dims, const TokenList& from, const TokenList& to) {
  if (from.size() != to.size()) throw Error(ErrorKind::invalid_argument, "token_reorder: lists differ in length");
  std::vector<Index> perm(from.size(), -1);
  for (std::size_t s = 0; s < from.size(); ++s) {
    for (std::size_t t = 0; t < to.size(); ++t)
      if (to[t] == from[s]) perm[s] = static_cast<Index>(t);
    if (perm[s] < 0) throw Error(ErrorKind::invalid_argument, "token_reorder: token missing from target list");
  }
  return factor_permutation(token_dims(dims, from), perm);
}

struct AssembleOptions {
  /// Check both kernel conditions before assembling.
  bool strict = true;
  SearchOptions search;
};

inline void check_factor_shapes(const DimsProfile& dims, const Partition& p, const ComplexMatrix& m_factor,
                                const ComplexMatrix& n_factor) {
  const Index m = dims.m();
  if (p.k() != dims.k()) throw Error(ErrorKind::dimension, "partition size does not match dims");
  if (m_factor.rows() != m || m_factor.cols() != p.m_cols(dims))
    throw Error(ErrorKind::dimension, "M must be m x p1 p2 p3^2");
  if (n_factor.rows() != m || n_factor.cols() != p.n_cols(dims))
    throw Error(ErrorKind::dimension, "N must be m x p1 p2 p4^2");
}

/// Phi = (M (x) N) Pi_P Pi_0^{-1}.
inline PreserverMap assemble_phi(const DimsProfile& dims, const Partition& p, const ComplexMatrix& m_factor,
                                 const ComplexMatrix& n_factor, const AssembleOptions& opts = {}) {
  check_factor_shapes(dims, p, m_factor, n_factor);
  if (opts.strict) {
    if (!check_kernel_condition(m_factor, token_dims(dims, p.column_tokens()), opts.search).holds)
      throw Error(ErrorKind::invalid_factors, "Ker(M) contains a nonzero product vector");
    if (!check_kernel_condition(n_factor, token_dims(dims, p.row_tokens()), opts.search).holds)
      throw Error(ErrorKind::invalid_factors, "Ker(N) contains a nonzero product vector");
  }
  const IndexPermutation route = partition_routing(dims, p) * grouping_permutation(dims).inverse();
  PreserverMap out{dims, route.right_apply(kron(m_factor, n_factor)), MapOrigin{p, m_factor, n_factor}};
  return out;
}

/// Direct evaluation of the canonical form on a product A_1 (x) ... (x) A_k
/// (no vec-action matrix involved).
inline ComplexMatrix canonical_action(const DimsProfile& dims, const Partition& p, const ComplexMatrix& m_factor,
                                      const ComplexMatrix& n_factor, const std::vector<ComplexMatrix>& a) {
  if (static_cast<Index>(a.size()) != dims.k()) throw Error(ErrorKind::dimension, "need one matrix per subsystem");
  std::vector<ComplexMatrix> parts;
  for (Index i : p.p1()) parts.push_back(a[static_cast<std::size_t>(i)]);
  for (Index i : p.p2()) parts.push_back(a[static_cast<std::size_t>(i)].transpose());
  for (Index i : p.p3()) parts.push_back(vec(a[static_cast<std::size_t>(i)]));
  for (Index i : p.p4()) parts.push_back(vec(a[static_cast<std::size_t>(i)]).transpose());
  return m_factor * kron_list(parts) * n_factor.transpose();
}

inline ComplexMatrix apply_map(const PreserverMap& map, const ComplexMatrix& a) {
  const Index m = map.m();
  if (a.rows() != m || a.cols() != m) throw Error(ErrorKind::dimension, "apply_map: A must be m x m");
  return unvec(map.phi * vec(a), m, m);
}

/// Image of a rank-one product; uses the factored form (M u)(N v)^T when the
/// structured origin is known.
inline ComplexMatrix apply_to_product(const PreserverMap& map, const RankOneProduct& a) {
  if (map.origin) {
    const auto& o = *map.origin;
    const ComplexVector u = token_product(o.partition.column_tokens(), a.x, a.y);
    const ComplexVector v = token_product(o.partition.row_tokens(), a.x, a.y);
    return (o.m * u) * (o.n * v).transpose();
  }
  return unvec(map.phi * a.vectorized(), map.m(), map.m());
}

/// Identity on M_m as a PreserverMap (P1 = K, M = N = I).
inline PreserverMap identity_map(const DimsProfile& dims) {
  const Index m = dims.m();
  Partition p(dims.k(), {full_set(dims.k()), {}, {}, {}});
  return {dims, ComplexMatrix::Identity(m * m, m * m),
          MapOrigin{p, ComplexMatrix::Identity(m, m), ComplexMatrix::Identity(m, m)}};
}

/// Whether factor matrices exist for this partition (both kernel conditions).
inline bool partition_admits_factors(const DimsProfile& dims, const Partition& p) {
  const KSetPair ks = partition_to_ksets(p);
  return kernel_condition_exists(dims, ks) && kernel_condition_exists(dims, complement(ks));
}

/// Random valid (M, N) for the partition.
inline std::pair<ComplexMatrix, ComplexMatrix> synthesize_factors(const DimsProfile& dims, const Partition& p,
                                                                  std::uint64_t seed,
                                                                  const SynthesisOptions& opts = {}) {
  if (!partition_admits_factors(dims, p))
    throw Error(ErrorKind::nonexistent, "no factors exist: k=2, 2 in {n1,n2}, P3=K or P4=K");
  ComplexMatrix m_factor = synthesize_factor_matrix(dims.m(), token_dims(dims, p.column_tokens()), seed, opts);
  ComplexMatrix n_factor = synthesize_factor_matrix(dims.m(), token_dims(dims, p.row_tokens()), seed + 1, opts);
  return {std::move(m_factor), std::move(n_factor)};
}

}  // namespace rop
