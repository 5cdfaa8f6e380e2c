#pragma once

// Dense structural operators on complex matrices: Kronecker products, row-major
// vec, partial transposes, realignments, tensor-factor permutations and
// numerical rank.

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/SVD>

#include "rop/core.hpp"

namespace rop {

// ---------------------------------------------------------------------------
// Kronecker products
// ---------------------------------------------------------------------------

/// A (x) B = [a_ij B].
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Left fold of kron; the empty list is the 1x1 matrix [1].
inline ComplexMatrix kron_list(std::span<const ComplexMatrix> mats) {
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (const auto& m : mats) out = kron(out, m);
  return out;
}

inline ComplexMatrix kron_list(const std::vector<ComplexMatrix>& mats) {
  return kron_list(std::span<const ComplexMatrix>(mats));
}

inline ComplexVector kron_vectors(std::span<const ComplexVector> vs) {
  ComplexVector out = ComplexVector::Ones(1);
  for (const auto& v : vs) {
    ComplexVector next(out.size() * v.size());
    for (Index i = 0; i < out.size(); ++i) next.segment(i * v.size(), v.size()) = out(i) * v;
    out = std::move(next);
  }
  return out;
}

inline ComplexVector kron_vectors(const std::vector<ComplexVector>& vs) {
  return kron_vectors(std::span<const ComplexVector>(vs));
}

// ---------------------------------------------------------------------------
// vec / unvec (row-major: vec(x y^T) = x (x) y)
// ---------------------------------------------------------------------------

inline ComplexVector vec(const ComplexMatrix& a) {
  ComplexVector v(a.size());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
  return v;
}

inline ComplexMatrix unvec(const ComplexVector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) throw Error(ErrorKind::dimension, "unvec: length != rows * cols");
  ComplexMatrix a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = v(i * cols + j);
  return a;
}

// ---------------------------------------------------------------------------
// Partial transpose and realignment of X in M_{mn}, X = sum E_ij (x) X_ij
// ---------------------------------------------------------------------------

struct BipartiteShape {
  Index m;
  Index n;
};

enum class Subsystem { first, second };
enum class Realignment { r1, r2, full };

namespace detail {
inline void require_square_bipartite(const ComplexMatrix& x, BipartiteShape s, const char* op) {
  if (s.m < 1 || s.n < 1 || x.rows() != s.m * s.n || x.cols() != s.m * s.n)
    throw Error(ErrorKind::dimension, std::string(op) + ": X must be (mn)x(mn)");
}
}  // namespace detail

/// X^{PT1} = sum E_ji (x) X_ij,  X^{PT2} = sum E_ij (x) X_ij^T.
inline ComplexMatrix partial_transpose(const ComplexMatrix& x, BipartiteShape s, Subsystem sys) {
  detail::require_square_bipartite(x, s, "partial_transpose");
  const Index n = s.n;
  ComplexMatrix out(x.rows(), x.cols());
  for (Index i = 0; i < s.m; ++i) {
    for (Index j = 0; j < s.m; ++j) {
      auto blk = x.block(i * n, j * n, n, n);
      if (sys == Subsystem::first)
        out.block(j * n, i * n, n, n) = blk;
      else
        out.block(i * n, j * n, n, n) = blk.transpose();
    }
  }
  return out;
}

/// Rearranges a (gr*br) x (gc*bc) block matrix into the (gr*gc) x (br*bc)
/// matrix whose row (i*gc + j) is vec^T of block (i, j). For A (x) B this is
/// vec(A) vec^T(B), the nearest-Kronecker rearrangement.
inline ComplexMatrix realign_blocks(const ComplexMatrix& x, Index grid_rows, Index grid_cols,
                                    Index block_rows, Index block_cols) {
  if (x.rows() != grid_rows * block_rows || x.cols() != grid_cols * block_cols)
    throw Error(ErrorKind::dimension, "realign_blocks: shape does not match block layout");
  ComplexMatrix out(grid_rows * grid_cols, block_rows * block_cols);
  for (Index i = 0; i < grid_rows; ++i)
    for (Index j = 0; j < grid_cols; ++j)
      for (Index r = 0; r < block_rows; ++r)
        for (Index c = 0; c < block_cols; ++c)
          out(i * grid_cols + j, r * block_cols + c) = x(i * block_rows + r, j * block_cols + c);
  return out;
}

/// X^{R1} = sum vec(E_ij) (x) X_ij      : (m^2 n) x n
/// X^{R2} = sum E_ij (x) vec(X_ij)      : (m n^2) x m
/// X^{R}  = sum vec(E_ij) (x) vec^T(X_ij): m^2 x n^2
inline ComplexMatrix realign(const ComplexMatrix& x, BipartiteShape s, Realignment variant) {
  detail::require_square_bipartite(x, s, "realign");
  const Index m = s.m;
  const Index n = s.n;
  switch (variant) {
    case Realignment::r1: {
      ComplexMatrix out(m * m * n, n);
      for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) out.block((i * m + j) * n, 0, n, n) = x.block(i * n, j * n, n, n);
      return out;
    }
    case Realignment::r2: {
      ComplexMatrix out(m * n * n, m);
      for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) out.block(i * n * n, j, n * n, 1) = vec(x.block(i * n, j * n, n, n));
      return out;
    }
    case Realignment::full:
      return realign_blocks(x, m, m, n, n);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Singular values and numerical rank
// ---------------------------------------------------------------------------

inline Eigen::VectorXd singular_values(const ComplexMatrix& a) {
  if (a.size() == 0) return {};
  if (std::min(a.rows(), a.cols()) <= 16) return Eigen::JacobiSVD<ComplexMatrix>(a).singularValues();
  return Eigen::BDCSVD<ComplexMatrix>(a).singularValues();
}

inline double default_rank_tolerance(const ComplexMatrix& a, const Eigen::VectorXd& sv) {
  if (sv.size() == 0) return 0.0;
  return static_cast<double>(std::max(a.rows(), a.cols())) * std::numeric_limits<double>::epsilon() * sv(0);
}

/// Number of singular values strictly above tol; default tol is
/// max(rows, cols) * eps * sigma_max.
inline Index numerical_rank(const ComplexMatrix& a, std::optional<double> tol = std::nullopt) {
  const Eigen::VectorXd sv = singular_values(a);
  const double t = tol.value_or(default_rank_tolerance(a, sv));
  return static_cast<Index>((sv.array() > t).count());
}

/// Rank counted relative to the largest singular value: sigma_i > ratio * sigma_1.
/// A zero matrix has rank 0.
inline Index relative_rank(const ComplexMatrix& a, double ratio) {
  const Eigen::VectorXd sv = singular_values(a);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  return static_cast<Index>((sv.array() > ratio * sv(0)).count());
}

// ---------------------------------------------------------------------------
// Tensor-factor permutations
// ---------------------------------------------------------------------------

/// A permutation of coordinates stored as a gather map: (P v)[t] = v[source(t)].
/// The matrix view has a single 1 in row t at column source(t).
class IndexPermutation {
 public:
  IndexPermutation() = default;

  explicit IndexPermutation(std::vector<Index> source_of) : source_(std::move(source_of)) {
    std::vector<char> seen(source_.size(), 0);
    for (Index s : source_) {
      if (s < 0 || s >= size() || seen[static_cast<std::size_t>(s)])
        throw Error(ErrorKind::invalid_argument, "IndexPermutation: not a bijection");
      seen[static_cast<std::size_t>(s)] = 1;
    }
  }

  static IndexPermutation identity(Index n) {
    std::vector<Index> src(static_cast<std::size_t>(n));
    std::iota(src.begin(), src.end(), Index{0});
    return IndexPermutation(std::move(src));
  }

  Index size() const { return static_cast<Index>(source_.size()); }
  Index source(Index t) const { return source_[static_cast<std::size_t>(t)]; }
  const std::vector<Index>& sources() const { return source_; }

  IndexPermutation inverse() const {
    std::vector<Index> inv(source_.size());
    for (std::size_t t = 0; t < source_.size(); ++t) inv[static_cast<std::size_t>(source_[t])] = static_cast<Index>(t);
    return IndexPermutation(std::move(inv));
  }

  /// Matrix product lhs * rhs.
  friend IndexPermutation operator*(const IndexPermutation& lhs, const IndexPermutation& rhs) {
    if (lhs.size() != rhs.size()) throw Error(ErrorKind::dimension, "IndexPermutation: size mismatch");
    std::vector<Index> src(lhs.source_.size());
    for (std::size_t t = 0; t < src.size(); ++t) src[t] = rhs.source(lhs.source_[t]);
    return IndexPermutation(std::move(src));
  }

  ComplexMatrix matrix() const {
    ComplexMatrix p = ComplexMatrix::Zero(size(), size());
    for (Index t = 0; t < size(); ++t) p(t, source(t)) = 1.0;
    return p;
  }

  ComplexVector apply(const ComplexVector& v) const {
    check(v.size());
    ComplexVector out(v.size());
    for (Index t = 0; t < size(); ++t) out(t) = v(source(t));
    return out;
  }

  /// P * A (row gather).
  ComplexMatrix left_apply(const ComplexMatrix& a) const {
    check(a.rows());
    ComplexMatrix out(a.rows(), a.cols());
    for (Index t = 0; t < size(); ++t) out.row(t) = a.row(source(t));
    return out;
  }

  /// A * P: column source(t) of the result is column t of A.
  ComplexMatrix right_apply(const ComplexMatrix& a) const {
    check(a.cols());
    ComplexMatrix out(a.rows(), a.cols());
    for (Index t = 0; t < size(); ++t) out.col(source(t)) = a.col(t);
    return out;
  }

  /// A * P^T (column gather).
  ComplexMatrix right_apply_inverse(const ComplexMatrix& a) const {
    check(a.cols());
    ComplexMatrix out(a.rows(), a.cols());
    for (Index t = 0; t < size(); ++t) out.col(t) = a.col(source(t));
    return out;
  }

  friend bool operator==(const IndexPermutation&, const IndexPermutation&) = default;

 private:
  void check(Index n) const {
    if (n != size()) throw Error(ErrorKind::dimension, "IndexPermutation: operand size mismatch");
  }

  std::vector<Index> source_;
};

/// Permutation matrix P with P (v_1 (x) ... (x) v_r) = w_1 (x) ... (x) w_r where
/// factor v_s lands at position perm[s] (0-based). dims[s] is the length of v_s.
inline IndexPermutation factor_permutation(const std::vector<Index>& dims, const std::vector<Index>& perm) {
  const std::size_t r = dims.size();
  if (perm.size() != r) throw Error(ErrorKind::invalid_argument, "factor_permutation: perm length != dims length");
  std::vector<char> seen(r, 0);
  for (Index p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= r || seen[static_cast<std::size_t>(p)])
      throw Error(ErrorKind::invalid_argument, "factor_permutation: perm is not a bijection");
    seen[static_cast<std::size_t>(p)] = 1;
  }
  for (Index d : dims)
    if (d < 1) throw Error(ErrorKind::invalid_argument, "factor_permutation: dims must be positive");

  std::vector<Index> out_dims(r);
  for (std::size_t s = 0; s < r; ++s) out_dims[static_cast<std::size_t>(perm[s])] = dims[s];

  // Row-major strides of the input layout, indexed by input factor.
  std::vector<Index> in_stride(r, 1);
  for (std::size_t s = r; s-- > 1;) in_stride[s - 1] = in_stride[s] * dims[s];

  const Index total = product(dims);
  std::vector<Index> src(static_cast<std::size_t>(total));
  std::vector<Index> digit(r, 0);  // multi-index over out_dims
  for (Index t = 0; t < total; ++t) {
    Index s_lin = 0;
    for (std::size_t s = 0; s < r; ++s) s_lin += digit[static_cast<std::size_t>(perm[s])] * in_stride[s];
    src[static_cast<std::size_t>(t)] = s_lin;
    for (std::size_t q = r; q-- > 0;) {
      if (++digit[q] < out_dims[q]) break;
      digit[q] = 0;
    }
  }
  return IndexPermutation(std::move(src));
}

/// Pi_0 with Pi_0 ((x_1 (x) y_1) (x) ... (x) (x_k (x) y_k)) = vec(x_1 y_1^T (x) ... (x) x_k y_k^T).
inline IndexPermutation grouping_permutation(const DimsProfile& dims) {
  const Index k = dims.k();
  std::vector<Index> fdims;
  std::vector<Index> perm;
  for (Index i = 0; i < k; ++i) {
    fdims.push_back(dims.n(i));
    fdims.push_back(dims.n(i));
    perm.push_back(i);
    perm.push_back(k + i);
  }
  return factor_permutation(fdims, perm);
}

// ---------------------------------------------------------------------------
// Rank-one tensor products A = (x_1 y_1^T) (x) ... (x) (x_k y_k^T)
// ---------------------------------------------------------------------------

struct RankOneProduct {
  DimsProfile dims;
  std::vector<ComplexVector> x;
  std::vector<ComplexVector> y;

  RankOneProduct() = default;
  RankOneProduct(DimsProfile d, std::vector<ComplexVector> xs, std::vector<ComplexVector> ys)
      : dims(std::move(d)), x(std::move(xs)), y(std::move(ys)) {
    if (static_cast<Index>(x.size()) != dims.k() || static_cast<Index>(y.size()) != dims.k())
      throw Error(ErrorKind::dimension, "RankOneProduct: need one x and one y per factor");
    for (Index i = 0; i < dims.k(); ++i) {
      const auto& xi = x[static_cast<std::size_t>(i)];
      const auto& yi = y[static_cast<std::size_t>(i)];
      if (xi.size() != dims.n(i) || yi.size() != dims.n(i))
        throw Error(ErrorKind::dimension, "RankOneProduct: factor length mismatch");
      if (xi.norm() == 0.0 || yi.norm() == 0.0)
        throw Error(ErrorKind::invalid_argument, "RankOneProduct: factors must be nonzero");
    }
  }

  static RankOneProduct random(const DimsProfile& d, Rng& rng) {
    std::vector<ComplexVector> xs, ys;
    for (Index i = 0; i < d.k(); ++i) {
      xs.push_back(random_unit_vector(d.n(i), rng));
      ys.push_back(random_unit_vector(d.n(i), rng));
    }
    return {d, std::move(xs), std::move(ys)};
  }

  ComplexVector x_product() const { return kron_vectors(x); }
  ComplexVector y_product() const { return kron_vectors(y); }

  /// vec(A) = (x_1 (x) ... (x) x_k) (x) (y_1 (x) ... (x) y_k).
  ComplexVector vectorized() const {
    const ComplexVector xs = x_product();
    const ComplexVector ys = y_product();
    ComplexVector out(xs.size() * ys.size());
    for (Index i = 0; i < xs.size(); ++i) out.segment(i * ys.size(), ys.size()) = xs(i) * ys;
    return out;
  }

  ComplexMatrix realize() const { return x_product() * y_product().transpose(); }
};

}  // namespace rop
