#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "rop/core.hpp"
#include "rop/partition.hpp"
#include "rop/preserver_forms.hpp"
#include "rop/tensor_core.hpp"

namespace rop {

enum class Verdict { pass, fail };

inline const char* to_string(Verdict v) { return v == Verdict::pass ? "Pass" : "Fail"; }

struct Counterexample {
  RankOneProduct input;
  ComplexMatrix output;
  /// sigma_2 / sigma_1 of the output; +inf for a zero output.
  double ratio = 0.0;
};

struct VerificationReport {
  Verdict verdict = Verdict::pass;
  /// Number of products checked (random plus sweep).
  Index trials = 0;
  std::optional<Counterexample> counterexample;
  /// Largest sigma_2 / sigma_1 over nonzero outputs.
  double max_second_singular = 0.0;
};

struct VerifyOptions {
  int trials = 200;
  std::uint64_t seed = 0;
  double tol = tol::rank_one_ratio;
  /// Also run the deterministic sweep over elementary products and their
  /// neighbours e_a + e_{a+1} in one factor.
  bool sweep = true;
};

/// sigma_2 / sigma_1, with zero_floor deciding when sigma_1 counts as zero (+inf).
inline double second_singular_ratio(const ComplexMatrix& out, double zero_floor) {
  const Eigen::VectorXd sv = singular_values(out);
  if (sv.size() == 0 || sv(0) <= zero_floor) return std::numeric_limits<double>::infinity();
  return sv.size() > 1 ? sv(1) / sv(0) : 0.0;
}

namespace detail {

/// Row-major digits of a flat index over dims.
inline std::vector<Index> digits(Index flat, const DimsProfile& dims) {
  std::vector<Index> d(static_cast<std::size_t>(dims.k()));
  for (Index i = dims.k() - 1; i >= 0; --i) {
    d[static_cast<std::size_t>(i)] = flat % dims.n(i);
    flat /= dims.n(i);
  }
  return d;
}

inline Index flatten(const std::vector<Index>& d, const DimsProfile& dims) {
  Index flat = 0;
  for (Index i = 0; i < dims.k(); ++i) flat = flat * dims.n(i) + d[static_cast<std::size_t>(i)];
  return flat;
}

}  // namespace detail

inline VerificationReport is_rank_one_preserver(const PreserverMap& map, const VerifyOptions& opts = {}) {
  const DimsProfile& dims = map.dims;
  const Index m = map.m();
  const double phi_norm = map.phi.norm();
  VerificationReport rep;

  // Returns false once a counterexample has been recorded.
  auto check = [&](const ComplexVector& image, const ComplexVector& input_vec, auto make_input) {
    ++rep.trials;
    const ComplexMatrix out = unvec(image, m, m);
    const double ratio = second_singular_ratio(out, 1e-12 * phi_norm * input_vec.norm());
    if (std::isfinite(ratio)) rep.max_second_singular = std::max(rep.max_second_singular, ratio);
    if (ratio > opts.tol) {
      rep.verdict = Verdict::fail;
      rep.counterexample = Counterexample{make_input(), out, ratio};
      return false;
    }
    return true;
  };

  for (int t = 0; t < opts.trials; ++t) {
    Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(t));
    RankOneProduct a = RankOneProduct::random(dims, rng);
    const ComplexVector v = a.vectorized();
    if (!check(map.phi * v, v, [&] { return a; })) return rep;
  }
  if (!opts.sweep) return rep;

  auto product_of = [&](Index row, Index col, Index bumped, bool bump_y) {
    const auto dr = detail::digits(row, dims), dc = detail::digits(col, dims);
    std::vector<ComplexVector> xs, ys;
    for (Index i = 0; i < dims.k(); ++i) {
      const auto s = static_cast<std::size_t>(i);
      xs.push_back(basis_vector(dims.n(i), dr[s]));
      ys.push_back(basis_vector(dims.n(i), dc[s]));
      if (i == bumped) (bump_y ? ys : xs).back()(((bump_y ? dc : dr)[s] + 1) % dims.n(i)) += 1.0;
    }
    return RankOneProduct(dims, std::move(xs), std::move(ys));
  };

  const ComplexVector unit = ComplexVector::Ones(1);
  const ComplexVector pair = ComplexVector::Constant(2, 1.0);
  for (Index row = 0; row < m; ++row) {
    for (Index col = 0; col < m; ++col) {
      const Index c = row * m + col;
      if (!check(map.phi.col(c), unit, [&] { return product_of(row, col, -1, false); })) return rep;
      for (Index i = 0; i < dims.k(); ++i) {
        for (bool side_y : {false, true}) {
          auto d = detail::digits(side_y ? col : row, dims);
          auto& di = d[static_cast<std::size_t>(i)];
          di = (di + 1) % dims.n(i);
          const Index moved = detail::flatten(d, dims);
          const Index c2 = side_y ? row * m + moved : moved * m + col;
          if (!check(map.phi.col(c) + map.phi.col(c2), pair, [&] { return product_of(row, col, i, side_y); }))
            return rep;
        }
      }
    }
  }
  return rep;
}

/// Upper bound prod_{j in P1 u P2} rank_j on the output rank for inputs X_1 (x) ... (x) X_k.
inline Index rank_bound(const Partition& p, const std::vector<Index>& input_ranks) {
  if (static_cast<Index>(input_ranks.size()) != p.k()) throw Error(ErrorKind::dimension, "need one rank per subsystem");
  Index bound = 1;
  for (Index j : set_union(p.p1(), p.p2())) bound *= input_ranks[static_cast<std::size_t>(j)];
  return bound;
}

/// Tries random full-rank product inputs; true as soon as one output is
/// numerically nonsingular (sigma_min / sigma_max > tol::nonsingular_ratio).
inline bool admits_nonsingular_image(const PreserverMap& map, int trials = 20, std::uint64_t seed = 0) {
  const Index m = map.m();
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(t));
    std::vector<ComplexMatrix> xs;
    for (Index n : map.dims.factors()) xs.push_back(random_matrix(n, n, rng));
    if (relative_rank(apply_map(map, kron_list(xs)), tol::nonsingular_ratio) == m) return true;
  }
  return false;
}

}  // namespace rop
