#pragma once

// Subspace arithmetic and the kernel conditions on factor matrices: kernel
// bases, product-vector search, completely entangled subspaces, and synthesis
// of matrices whose kernel avoids every nonzero product vector.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "rop/core.hpp"
#include "rop/partition.hpp"
#include "rop/tensor_core.hpp"

namespace rop {

/// Orthonormal basis (as columns) of a subspace of C^ambient_dim.
struct Subspace {
  Index ambient_dim = 0;
  ComplexMatrix basis;  // ambient_dim x dim

  Index dim() const { return basis.cols(); }

  static Subspace from_orthonormal(ComplexMatrix b, double check_tol = 1e-10) {
    const Index d = b.rows();
    if (b.cols() > d) throw Error(ErrorKind::dimension, "Subspace: more basis vectors than ambient dimension");
    if (b.cols() > 0) {
      const ComplexMatrix gram = b.adjoint() * b;
      if ((gram - ComplexMatrix::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff() > check_tol)
        throw Error(ErrorKind::invalid_argument, "Subspace: basis is not orthonormal");
    }
    return {d, std::move(b)};
  }

  /// Orthonormalizes the columns of a spanning set (rank-revealing).
  static Subspace span_of(const ComplexMatrix& vectors) {
    if (vectors.cols() == 0) return {vectors.rows(), ComplexMatrix(vectors.rows(), 0)};
    Eigen::JacobiSVD<ComplexMatrix> svd(vectors, Eigen::ComputeThinU);
    const Index r = svd.rank();
    return {vectors.rows(), svd.matrixU().leftCols(r)};
  }

  ComplexMatrix projector() const { return basis * basis.adjoint(); }

  /// || v - P_S v ||.
  double distance(const ComplexVector& v) const {
    if (dim() == 0) return v.norm();
    return (v - basis * (basis.adjoint() * v)).norm();
  }
};

/// Orthonormal null-space basis from the right singular vectors with
/// sigma <= tol (default max(rows, cols) * eps * sigma_max).
inline Subspace kernel_basis(const ComplexMatrix& m, std::optional<double> tol = std::nullopt) {
  const Index cols = m.cols();
  if (cols == 0) return {0, ComplexMatrix(0, 0)};
  if (m.rows() == 0) return {cols, ComplexMatrix::Identity(cols, cols)};
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double t = tol.value_or(default_rank_tolerance(m, sv));
  const Index rank = static_cast<Index>((sv.array() > t).count());
  return {cols, svd.matrixV().rightCols(cols - rank)};
}

inline Subspace orthogonal_complement(const Subspace& s) {
  if (s.dim() == 0) return {s.ambient_dim, ComplexMatrix::Identity(s.ambient_dim, s.ambient_dim)};
  return kernel_basis(s.basis.adjoint());
}

// ---------------------------------------------------------------------------
// Product-vector search
// ---------------------------------------------------------------------------

struct SearchOptions {
  int starts = 64;
  int max_iter = 200;
  double conv_tol = 1e-12;
  std::uint64_t seed = 0;
  /// Stop all starts once the objective drops to this value.
  double stop_below = 0.0;
};

struct ProductSearchResult {
  double value = 0.0;
  std::vector<ComplexVector> factors;
  int starts = 0;
  int iterations = 0;
};

namespace detail {

/// M (v_0 (x) ... (x) I_{p_j} (x) ... (x) v_{r-1}): the rows x p_j matrix
/// acting on the j-th factor with the others held fixed.
inline ComplexMatrix contract_all_but(const ComplexMatrix& m, const std::vector<Index>& dims,
                                      const std::vector<ComplexVector>& factors, std::size_t j) {
  std::vector<ComplexVector> weights = factors;
  weights[j] = ComplexVector::Ones(dims[j]);
  const ComplexVector w = kron_vectors(weights);
  Index stride = 1;
  for (std::size_t t = j + 1; t < dims.size(); ++t) stride *= dims[t];
  const Index pj = dims[j];
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), pj);
  for (Index c = 0; c < m.cols(); ++c) out.col((c / stride) % pj) += w(c) * m.col(c);
  return out;
}

}  // namespace detail

/// Approximately minimizes ||M (v_1 (x) ... (x) v_r)|| over unit v_i by cyclic
/// single-factor updates (each update is the smallest eigenvector of a
/// p_j x p_j Hermitian matrix), restarted from seeded random points.
inline ProductSearchResult min_product_norm(const ComplexMatrix& m, const std::vector<Index>& dims,
                                            const SearchOptions& opts = {}) {
  if (m.cols() != product(dims)) throw Error(ErrorKind::dimension, "min_product_norm: cols(M) != prod(dims)");
  for (Index d : dims)
    if (d < 1) throw Error(ErrorKind::invalid_argument, "min_product_norm: dims must be positive");

  ProductSearchResult best;
  best.value = std::numeric_limits<double>::infinity();
  if (dims.empty()) {
    best.value = m.col(0).norm();
    best.starts = 1;
    return best;
  }

  for (int s = 0; s < opts.starts; ++s) {
    Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(s));
    std::vector<ComplexVector> v;
    for (Index d : dims) v.push_back(random_unit_vector(d, rng));

    double value = m.rows() == 0 ? 0.0 : (m * kron_vectors(v)).norm();
    int sweep = 0;
    for (; sweep < opts.max_iter; ++sweep) {
      const double before = value;
      for (std::size_t j = 0; j < dims.size(); ++j) {
        const ComplexMatrix mj = detail::contract_all_but(m, dims, v, j);
        const ComplexMatrix h = mj.adjoint() * mj;
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
        v[j] = eig.eigenvectors().col(0);
        value = (mj * v[j]).norm();
      }
      if (before - value < opts.conv_tol || value <= opts.stop_below) {
        ++sweep;
        break;
      }
    }
    best.iterations += sweep;
    best.starts = s + 1;
    if (value < best.value) {
      best.value = value;
      best.factors = v;
    }
    if (best.value <= opts.stop_below) break;
  }
  return best;
}

enum class SearchVerdict { found, none_found, inconclusive };

inline const char* to_string(SearchVerdict v) {
  switch (v) {
    case SearchVerdict::found: return "Found";
    case SearchVerdict::none_found: return "NoneFound";
    case SearchVerdict::inconclusive: return "Inconclusive";
  }
  return "?";
}

/// Found is certified by the witness residual; NoneFound is heuristic (the
/// search may miss a product vector that exists).
struct DecomposableSearchReport {
  SearchVerdict verdict = SearchVerdict::inconclusive;
  std::optional<std::vector<ComplexVector>> witness;
  double min_value = 0.0;
  double residual = 0.0;
  int starts = 0;
  int iterations = 0;
};

struct DecomposableSearchOptions {
  SearchOptions search;
  double none_tol = tol::none_found;
  double found_tol = tol::found;
};

/// Searches S for a unit product vector by minimizing its distance to S.
inline DecomposableSearchReport contains_decomposable(const Subspace& s, const std::vector<Index>& dims,
                                                      const DecomposableSearchOptions& opts = {}) {
  if (s.ambient_dim != product(dims))
    throw Error(ErrorKind::dimension, "contains_decomposable: ambient dim != prod(dims)");

  // ||Q^H v|| with Q an orthonormal basis of S-perp is the distance of v to S.
  const Subspace perp = orthogonal_complement(s);
  const ComplexMatrix q_adj = perp.basis.adjoint();

  SearchOptions so = opts.search;
  so.stop_below = std::max(so.stop_below, opts.found_tol * 0.1);
  const ProductSearchResult r = min_product_norm(q_adj, dims, so);

  DecomposableSearchReport rep;
  rep.min_value = r.value;
  rep.starts = r.starts;
  rep.iterations = r.iterations;
  rep.residual = s.distance(kron_vectors(r.factors));
  if (rep.residual < opts.found_tol) {
    rep.verdict = SearchVerdict::found;
    rep.witness = r.factors;
  } else if (r.value > opts.none_tol) {
    rep.verdict = SearchVerdict::none_found;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Completely entangled subspaces
// ---------------------------------------------------------------------------

/// prod p_i - sum p_i + r - 1.
inline Index ces_max_dim(const std::vector<Index>& dims) {
  if (dims.empty()) throw Error(ErrorKind::invalid_argument, "ces_max_dim: need r >= 1");
  Index prod = 1, sum = 0;
  for (Index p : dims) {
    if (p < 1) throw Error(ErrorKind::invalid_argument, "ces_max_dim: dims must be >= 1");
    prod *= p;
    sum += p;
  }
  return prod - sum + static_cast<Index>(dims.size()) - 1;
}

/// Orthogonal complement of span{u(t) (x) w(t)} with u(t) = (1, t, ..., t^{p-1}),
/// w(t) = (1, ..., t^{q-1}) over p + q - 1 distinct real nodes.
inline Subspace ces_construct(Index p, Index q) {
  if (p < 2 || q < 2) throw Error(ErrorKind::invalid_argument, "ces_construct: p, q must be >= 2");
  const Index count = p + q - 1;
  // Nodes 0, 1, -1, 2, -2, ... scaled into [-1, 1].
  std::vector<double> nodes;
  for (Index i = 0; static_cast<Index>(nodes.size()) < count; ++i) {
    if (i == 0) {
      nodes.push_back(0.0);
    } else {
      nodes.push_back(static_cast<double>(i));
      if (static_cast<Index>(nodes.size()) < count) nodes.push_back(-static_cast<double>(i));
    }
  }
  double scale = 0.0;
  for (double t : nodes) scale = std::max(scale, std::abs(t));
  for (double& t : nodes) t /= scale;

  ComplexMatrix span(p * q, count);
  for (Index c = 0; c < count; ++c) {
    const double t = nodes[static_cast<std::size_t>(c)];
    for (Index a = 0; a < p; ++a)
      for (Index b = 0; b < q; ++b) span(a * q + b, c) = std::pow(t, static_cast<double>(a + b));
  }
  return kernel_basis(span.adjoint());
}

// ---------------------------------------------------------------------------
// Kernel conditions
// ---------------------------------------------------------------------------

/// Whether some m x m1 m2 matrix has no nonzero (K1, K2)-product vector in its kernel.
inline bool kernel_condition_exists(const DimsProfile& dims, const KSetPair& ks) {
  if (ks.k != dims.k()) throw Error(ErrorKind::invalid_argument, "kernel_condition_exists: k mismatch");
  const Index m = dims.m();
  if (m >= ks.m1(dims) * ks.m2(dims)) return true;
  Index rhs = 1;
  for (Index i : ks.k1) rhs += dims.n(i) - 1;
  for (Index j : ks.k2) rhs += dims.n(j) - 1;
  return m >= rhs;
}

inline std::vector<Index> kset_factor_dims(const DimsProfile& dims, const KSetPair& ks) {
  std::vector<Index> out;
  for (Index i : ks.k1) out.push_back(dims.n(i));
  for (Index j : ks.k2) out.push_back(dims.n(j));
  return out;
}

struct KernelConditionCheck {
  bool holds = false;
  bool full_column_rank = false;
  /// min ||M v|| / sigma_max(M) over unit product vectors (1 when injective).
  double min_value = 0.0;
};

/// Scale-invariant check that Ker(M) contains no nonzero product vector with
/// the given factor dimensions.
inline KernelConditionCheck check_kernel_condition(const ComplexMatrix& m, const std::vector<Index>& factor_dims,
                                                   const SearchOptions& opts = {}, double none_tol = tol::none_found) {
  if (m.cols() != product(factor_dims))
    throw Error(ErrorKind::dimension, "check_kernel_condition: cols(M) != prod(factor dims)");
  KernelConditionCheck out;
  const Eigen::VectorXd sv = singular_values(m);
  if (sv.size() == 0 || sv(0) == 0.0) return out;
  if (m.rows() >= m.cols() && numerical_rank(m) == m.cols()) {
    out.holds = true;
    out.full_column_rank = true;
    out.min_value = sv(sv.size() - 1) / sv(0);
    return out;
  }
  const ProductSearchResult r = min_product_norm(m / sv(0), factor_dims, opts);
  out.min_value = r.value;
  out.holds = r.value > none_tol;
  return out;
}

struct SynthesisOptions {
  int max_draws = 32;
  SearchOptions search;
  double none_tol = tol::none_found;
};

/// Random m x prod(factor_dims) matrix whose kernel avoids every nonzero
/// product vector: full column rank when tall, otherwise the first random
/// full-row-rank draw that passes the checker.
inline ComplexMatrix synthesize_factor_matrix(Index rows, const std::vector<Index>& factor_dims, std::uint64_t seed,
                                              const SynthesisOptions& opts = {}) {
  const Index cols = product(factor_dims);
  for (int draw = 0; draw < opts.max_draws; ++draw) {
    Rng rng = make_rng(seed, 0x5eed0000ULL + static_cast<std::uint64_t>(draw));
    ComplexMatrix m = random_matrix(rows, cols, rng);
    if (rows >= cols) {
      if (numerical_rank(m) == cols) return m;
      continue;
    }
    if (numerical_rank(m) != rows) continue;
    SearchOptions so = opts.search;
    so.seed = seed ^ (0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(draw));
    if (check_kernel_condition(m, factor_dims, so, opts.none_tol).holds) return m;
  }
  throw Error(ErrorKind::synthesis_failed, "no random draw passed the kernel-condition checker");
}

/// m x m1 m2 matrix M with Ker(M) meeting the (K1, K2) product set only at 0.
inline ComplexMatrix construct_factor_matrix(const DimsProfile& dims, const KSetPair& ks, std::uint64_t seed,
                                             const SynthesisOptions& opts = {}) {
  if (!kernel_condition_exists(dims, ks))
    throw Error(ErrorKind::nonexistent, "no matrix satisfies the kernel condition for these (K1, K2)");
  return synthesize_factor_matrix(dims.m(), kset_factor_dims(dims, ks), seed, opts);
}

}  // namespace rop
