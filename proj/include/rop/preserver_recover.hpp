#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "rop/core.hpp"
#include "rop/partition.hpp"
#include "rop/preserver_forms.hpp"
#include "rop/tensor_core.hpp"

namespace rop {

struct ClassifyOptions {
  std::uint64_t seed = 0;
  double tol = tol::rank_one_ratio;
  int bases = 5;
};

namespace detail {

inline ComplexMatrix image_of(const PreserverMap& map, const RankOneProduct& a) {
  return unvec(map.phi * a.vectorized(), map.m(), map.m());
}

inline double rank_one_defect(const ComplexMatrix& a) {
  const Eigen::VectorXd sv = singular_values(a);
  if (sv.size() == 0 || sv(0) == 0.0) return std::numeric_limits<double>::infinity();
  return sv.size() > 1 ? sv(1) / sv(0) : 0.0;
}

}  // namespace detail

/// Reads off the partition from how single-factor perturbations move the
/// column and row spaces of rank-one outputs. Each of `bases` random base
/// points casts one vote per subsystem; a label needs a strict majority.
inline Partition classify_subsystems(const PreserverMap& map, const ClassifyOptions& opts = {}) {
  const DimsProfile& dims = map.dims;
  const Index k = dims.k();
  std::vector<std::array<int, 4>> votes(static_cast<std::size_t>(k), std::array<int, 4>{0, 0, 0, 0});

  for (int b = 0; b < opts.bases; ++b) {
    Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(b));
    const RankOneProduct base = RankOneProduct::random(dims, rng);
    ComplexMatrix o0 = detail::image_of(map, base);
    if (detail::rank_one_defect(o0) > opts.tol) continue;
    o0 /= o0.norm();

    for (Index i = 0; i < k; ++i) {
      // 0: nothing moved, 1: column space, 2: row space, 3: both or invalid.
      int moved[2] = {3, 3};
      for (int side = 0; side < 2; ++side) {
        RankOneProduct a = base;
        auto& v = (side == 0 ? a.x : a.y)[static_cast<std::size_t>(i)];
        v = random_unit_vector(v.size(), rng);
        ComplexMatrix o1 = detail::image_of(map, a);
        if (detail::rank_one_defect(o1) > opts.tol) continue;
        o1 /= o1.norm();
        ComplexMatrix cols(o0.rows(), 2 * o0.cols()), rows(2 * o0.rows(), o0.cols());
        cols << o0, o1;
        rows << o0, o1;
        const bool col_moves = detail::rank_one_defect(cols) > opts.tol;
        const bool row_moves = detail::rank_one_defect(rows) > opts.tol;
        moved[side] = col_moves == row_moves ? 3 : (col_moves ? 1 : 2);
      }
      int label = -1;
      if (moved[0] == 1 && moved[1] == 2) label = 0;
      if (moved[0] == 2 && moved[1] == 1) label = 1;
      if (moved[0] == 1 && moved[1] == 1) label = 2;
      if (moved[0] == 2 && moved[1] == 2) label = 3;
      if (label >= 0) ++votes[static_cast<std::size_t>(i)][static_cast<std::size_t>(label)];
    }
  }

  std::vector<Partition::Block> labels;
  for (Index i = 0; i < k; ++i) {
    const auto& v = votes[static_cast<std::size_t>(i)];
    int best = 0;
    for (int l = 1; l < 4; ++l)
      if (v[static_cast<std::size_t>(l)] > v[static_cast<std::size_t>(best)]) best = l;
    if (2 * v[static_cast<std::size_t>(best)] <= opts.bases)
      throw Error(ErrorKind::ambiguous_structure,
                  "subsystem " + std::to_string(i + 1) + " has no majority label (map is not a rank-one preserver?)");
    labels.push_back(static_cast<Partition::Block>(best));
  }
  return Partition::from_labels(labels);
}

struct RecoveryResult {
  Partition partition;
  ComplexMatrix m;
  ComplexMatrix n;
  /// The scalar divided out of M (and multiplied into N) to normalize M.
  Complex gauge{1.0, 0.0};
  /// sigma_2 / sigma_1 of the realigned Kronecker rearrangement.
  double kronecker_ratio = 0.0;
  /// max |Phi_reassembled - Phi|.
  double residual = 0.0;
};

namespace detail {

/// Best rank-one factorization r ~ a b^T. Alternating refinement from the
/// largest column; the exact SVD ratio is only computed when the fit is poor.
inline double rank_one_fit(const ComplexMatrix& r, ComplexVector& a, ComplexVector& b) {
  Index jmax = 0;
  r.colwise().squaredNorm().maxCoeff(&jmax);
  a = r.col(jmax);
  const double rn = r.norm();
  if (a.norm() == 0.0) return std::numeric_limits<double>::infinity();
  for (int it = 0; it < 3; ++it) {
    b = (a.adjoint() * r).transpose() / a.squaredNorm();
    a = r * b.conjugate() / b.squaredNorm();
  }
  b = (a.adjoint() * r).transpose() / a.squaredNorm();
  const double fit = (r - a * b.transpose()).norm() / rn;
  if (fit <= 1e-9) return fit;
  return rank_one_defect(r);
}

}  // namespace detail

/// Factor Psi = Phi Pi_0 Pi_P^{-1} = M (x) N by realigning it into
/// vec(M) vec(N)^T and taking the dominant rank-one term.
inline RecoveryResult recover_factors(const PreserverMap& map, const Partition& p) {
  const DimsProfile& dims = map.dims;
  if (p.k() != dims.k()) throw Error(ErrorKind::dimension, "partition size does not match dims");
  const Index m = dims.m();
  const Index a_cols = p.m_cols(dims);
  const Index b_cols = p.n_cols(dims);

  const IndexPermutation route = partition_routing(dims, p) * grouping_permutation(dims).inverse();
  const ComplexMatrix psi = route.right_apply_inverse(map.phi);
  const ComplexMatrix r = realign_blocks(psi, m, a_cols, m, b_cols);

  ComplexVector va, vb;
  const double ratio = detail::rank_one_fit(r, va, vb);
  if (!(ratio <= tol::not_kronecker))
    throw Error(ErrorKind::not_kronecker, "realigned map is not rank one (sigma2/sigma1 = " + std::to_string(ratio) + ")");

  RecoveryResult out;
  out.partition = p;
  out.kronecker_ratio = ratio;
  out.m = unvec(va, m, a_cols);
  out.n = unvec(vb, m, b_cols);

  const double top = out.m.cwiseAbs().maxCoeff();
  for (Index i = 0; i < out.m.size(); ++i) {
    const Complex z = out.m(i / a_cols, i % a_cols);
    if (std::abs(z) >= (1.0 - 1e-9) * top) {
      out.gauge = z;
      break;
    }
  }
  out.m /= out.gauge;
  out.n *= out.gauge;

  const PreserverMap again = assemble_phi(dims, p, out.m, out.n, AssembleOptions{.strict = false, .search = {}});
  out.residual = (again.phi - map.phi).cwiseAbs().maxCoeff();
  return out;
}

/// classify_subsystems followed by recover_factors.
inline RecoveryResult recover(const PreserverMap& map, const ClassifyOptions& opts = {}) {
  return recover_factors(map, classify_subsystems(map, opts));
}

}  // namespace rop
