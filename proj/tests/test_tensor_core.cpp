#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace rop;
using rop::testing::max_abs_diff;

namespace {

ComplexMatrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = static_cast<Index>(rows.begin()->size());
  ComplexMatrix a(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (double v : row) a(i, j++) = v;
    ++i;
  }
  return a;
}

}  // namespace

TEST(Kron, IdentityAndScalar) {
  EXPECT_EQ(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)), ComplexMatrix::Identity(6, 6));
  Rng rng = make_rng(1);
  const ComplexMatrix b = random_matrix(3, 2, rng);
  EXPECT_LT(max_abs_diff(kron(real_matrix({{2}}), b), 2.0 * b), 1e-15);
}

TEST(Kron, ExplicitExpansion) {
  const ComplexMatrix got = kron(real_matrix({{1, 2}, {3, 4}}), real_matrix({{0, 1}, {1, 0}}));
  const ComplexMatrix want = real_matrix({{0, 1, 0, 2}, {1, 0, 2, 0}, {0, 3, 0, 4}, {3, 0, 4, 0}});
  EXPECT_EQ(got, want);
}

TEST(Kron, ListConventions) {
  const ComplexMatrix empty = kron_list(std::vector<ComplexMatrix>{});
  ASSERT_EQ(empty.rows(), 1);
  ASSERT_EQ(empty.cols(), 1);
  EXPECT_EQ(empty(0, 0), Complex(1.0, 0.0));
  Rng rng = make_rng(2);
  const ComplexMatrix a = random_matrix(2, 3, rng), b = random_matrix(2, 2, rng), c = random_matrix(3, 1, rng);
  EXPECT_EQ(kron_list(std::vector<ComplexMatrix>{a}), a);
  EXPECT_LT(max_abs_diff(kron_list(std::vector<ComplexMatrix>{a, b, c}), kron(kron(a, b), c)), 1e-14);
}

TEST(Vec, RowMajorOrder) {
  const ComplexVector v = vec(real_matrix({{1, 2}, {3, 4}}));
  ASSERT_EQ(v.size(), 4);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(v(i), Complex(i + 1.0, 0.0));
}

TEST(Vec, OuterProductIsKron) {
  ComplexVector x(2), y(2);
  x << 1, 0;
  y << 0, 1;
  ComplexVector want(4);
  want << 0, 1, 0, 0;
  EXPECT_EQ(vec(x * y.transpose()), want);

  Rng rng = make_rng(3);
  for (int t = 0; t < 20; ++t) {
    const ComplexVector a = random_vector(3, rng), b = random_vector(4, rng);
    EXPECT_LT(max_abs_diff(vec(a * b.transpose()), kron(a, b)), 1e-12);
  }
}

TEST(Vec, UnvecRoundTripAndShapeError) {
  Rng rng = make_rng(4);
  const ComplexMatrix a = random_matrix(3, 5, rng);
  EXPECT_EQ(unvec(vec(a), 3, 5), a);
  EXPECT_THROW(unvec(vec(a), 4, 4), Error);
}

TEST(PartialTranspose, IdentityInvolutionAndProducts) {
  const BipartiteShape s{2, 3};
  EXPECT_EQ(partial_transpose(ComplexMatrix::Identity(6, 6), s, Subsystem::first), ComplexMatrix::Identity(6, 6));
  Rng rng = make_rng(5);
  const ComplexMatrix x = random_matrix(6, 6, rng);
  EXPECT_EQ(partial_transpose(partial_transpose(x, s, Subsystem::first), s, Subsystem::first), x);
  EXPECT_EQ(partial_transpose(partial_transpose(x, s, Subsystem::second), s, Subsystem::second), x);
  // (X^PT1)^T = X^PT2
  EXPECT_EQ(partial_transpose(x, s, Subsystem::first).transpose(), partial_transpose(x, s, Subsystem::second));

  const ComplexMatrix x1 = random_matrix(2, 2, rng), x2 = random_matrix(3, 3, rng);
  EXPECT_LT(max_abs_diff(partial_transpose(kron(x1, x2), s, Subsystem::first), kron(x1.transpose(), x2)), 1e-12);
  EXPECT_LT(max_abs_diff(partial_transpose(kron(x1, x2), s, Subsystem::second), kron(x1, x2.transpose())), 1e-12);
  EXPECT_THROW(partial_transpose(ComplexMatrix::Identity(5, 5), s, Subsystem::first), Error);
}

TEST(Realign, ShapesAndElementaryCase) {
  Rng rng = make_rng(6);
  const BipartiteShape s{2, 3};
  const ComplexMatrix x = random_matrix(6, 6, rng);
  const ComplexMatrix r1 = realign(x, s, Realignment::r1);
  const ComplexMatrix r2 = realign(x, s, Realignment::r2);
  const ComplexMatrix r = realign(x, s, Realignment::full);
  EXPECT_EQ(r1.rows(), 12);
  EXPECT_EQ(r1.cols(), 3);
  EXPECT_EQ(r2.rows(), 18);
  EXPECT_EQ(r2.cols(), 2);
  EXPECT_EQ(r.rows(), 4);
  EXPECT_EQ(r.cols(), 9);

  ComplexMatrix e11 = ComplexMatrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  ComplexMatrix want = ComplexMatrix::Zero(4, 4);
  want(0, 0) = 1.0;
  EXPECT_EQ(realign(kron(e11, e11), {2, 2}, Realignment::full), want);
}

TEST(Realign, ProductClosedForms) {
  Rng rng = make_rng(7);
  const BipartiteShape s{2, 3};
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix x1 = random_matrix(2, 2, rng), x2 = random_matrix(3, 3, rng);
    const ComplexMatrix x = kron(x1, x2);
    const ComplexMatrix v1 = vec(x1), v2 = vec(x2);
    EXPECT_LT(max_abs_diff(realign(x, s, Realignment::r1), kron(v1, x2)), 1e-12);
    EXPECT_LT(max_abs_diff(realign(x, s, Realignment::r2), kron(x1, v2)), 1e-12);
    EXPECT_LT(max_abs_diff(realign(x, s, Realignment::full), v1 * v2.transpose()), 1e-12);
  }
}

TEST(Realign, RectangularBlocksGiveNearestKroneckerLayout) {
  Rng rng = make_rng(8);
  const ComplexMatrix a = random_matrix(3, 2, rng), b = random_matrix(2, 4, rng);
  const ComplexMatrix r = realign_blocks(kron(a, b), 3, 2, 2, 4);
  EXPECT_LT(max_abs_diff(r, vec(a) * vec(b).transpose()), 1e-12);
}

TEST(NumericalRank, BasicCases) {
  EXPECT_EQ(numerical_rank(ComplexMatrix::Identity(5, 5)), 5);
  Rng rng = make_rng(9);
  const ComplexVector x = random_vector(4, rng), y = random_vector(6, rng);
  EXPECT_EQ(numerical_rank(x * y.transpose()), 1);
  EXPECT_EQ(numerical_rank(ComplexMatrix::Zero(3, 3)), 0);
  EXPECT_EQ(numerical_rank(ComplexMatrix::Identity(3, 3), 2.0), 0);
}

TEST(NumericalRank, FixtureMatrices) {
  EXPECT_EQ(numerical_rank(rop::testing::load_fixture("example1_1_M.json")), 4);
  EXPECT_EQ(numerical_rank(rop::testing::load_fixture("example1_1_N.json")), 5);
}

TEST(NumericalRank, MultiplicativeUnderKron) {
  Rng rng = make_rng(10);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix a = random_matrix(3, 2, rng) * random_matrix(2, 4, rng);  // rank 2
    const ComplexMatrix b = random_matrix(4, 3, rng);                             // rank 3
    EXPECT_EQ(numerical_rank(kron(a, b)), numerical_rank(a) * numerical_rank(b));
  }
}

TEST(FactorPermutation, IdentityAndValidation) {
  const IndexPermutation p = factor_permutation({2, 3, 2}, {0, 1, 2});
  EXPECT_EQ(p.matrix(), ComplexMatrix::Identity(12, 12));
  EXPECT_THROW(factor_permutation({2, 2}, {0, 0}), Error);
  EXPECT_THROW(factor_permutation({2, 2}, {0}), Error);
  EXPECT_THROW(IndexPermutation(std::vector<Index>{0, 2}), Error);
}

TEST(FactorPermutation, SwapOnAllBasisPairs) {
  const IndexPermutation p = factor_permutation({2, 2}, {1, 0});
  for (Index a = 0; a < 2; ++a) {
    for (Index b = 0; b < 2; ++b) {
      const ComplexVector x = basis_vector(2, a), y = basis_vector(2, b);
      EXPECT_EQ(p.apply(kron(x, y)), ComplexVector(kron(y, x)));
      EXPECT_EQ(p.matrix() * kron(x, y), ComplexVector(kron(y, x)));
    }
  }
}

TEST(FactorPermutation, MovesFactorsToTargetPositions) {
  Rng rng = make_rng(11);
  const std::vector<Index> dims{2, 3, 4};
  const std::vector<Index> perm{2, 0, 1};  // factor 0 -> slot 2, 1 -> 0, 2 -> 1
  const ComplexVector v0 = random_vector(2, rng), v1 = random_vector(3, rng), v2 = random_vector(4, rng);
  const ComplexVector got = factor_permutation(dims, perm).apply(kron_vectors(std::vector<ComplexVector>{v0, v1, v2}));
  EXPECT_LT(max_abs_diff(got, kron_vectors(std::vector<ComplexVector>{v1, v2, v0})), 1e-14);
}

TEST(FactorPermutation, GroupActionAndOrthogonality) {
  Rng rng = make_rng(12);
  const std::vector<Index> dims{2, 3, 2};
  const IndexPermutation a = factor_permutation(dims, {1, 2, 0});
  // a maps dims (2,3,2) to (2,2,3); b acts on the result.
  const IndexPermutation b = factor_permutation({2, 2, 3}, {2, 0, 1});
  const ComplexVector v = kron_vectors(std::vector<ComplexVector>{random_vector(2, rng), random_vector(3, rng),
                                                                   random_vector(2, rng)});
  EXPECT_LT(max_abs_diff((b * a).apply(v), b.apply(a.apply(v))), 1e-14);
  EXPECT_LT(max_abs_diff((b * a).matrix(), b.matrix() * a.matrix()), 1e-14);

  const ComplexMatrix pm = a.matrix();
  EXPECT_EQ(pm * pm.transpose(), ComplexMatrix::Identity(12, 12));
  for (Index i = 0; i < 12; ++i) {
    EXPECT_EQ(pm.row(i).cwiseAbs().sum(), 1.0);
    EXPECT_EQ(pm.col(i).cwiseAbs().sum(), 1.0);
  }
  EXPECT_EQ(a.inverse().matrix(), pm.transpose());

  const ComplexMatrix x = random_matrix(12, 5, rng), y = random_matrix(5, 12, rng);
  EXPECT_EQ(a.left_apply(x), pm * x);
  EXPECT_EQ(a.right_apply(y), y * pm);
  EXPECT_EQ(a.right_apply_inverse(y), y * pm.transpose());
}

TEST(GroupingPermutation, SingleFactorIsIdentity) {
  EXPECT_EQ(grouping_permutation(DimsProfile({3})), IndexPermutation::identity(9));
}

TEST(GroupingPermutation, MapsGroupedFactorsToVec) {
  Rng rng = make_rng(13);
  for (const auto& d : {std::vector<Index>{2, 2}, std::vector<Index>{2, 3}, std::vector<Index>{3, 2, 2}}) {
    const DimsProfile dims(d);
    const IndexPermutation p0 = grouping_permutation(dims);
    const RankOneProduct a = RankOneProduct::random(dims, rng);
    std::vector<ComplexVector> grouped;
    for (Index i = 0; i < dims.k(); ++i) {
      grouped.push_back(a.x[static_cast<std::size_t>(i)]);
      grouped.push_back(a.y[static_cast<std::size_t>(i)]);
    }
    EXPECT_LT(max_abs_diff(p0.apply(kron_vectors(grouped)), vec(a.realize())), 1e-13);
    EXPECT_LT(max_abs_diff(a.vectorized(), vec(a.realize())), 1e-13);
    const ComplexMatrix pm = p0.matrix();
    EXPECT_EQ(pm * pm.transpose(), ComplexMatrix::Identity(pm.rows(), pm.rows()));
  }
}

TEST(RankOneProduct, ValidationAndRank) {
  const DimsProfile dims({2, 3});
  Rng rng = make_rng(14);
  const RankOneProduct a = RankOneProduct::random(dims, rng);
  EXPECT_EQ(numerical_rank(a.realize()), 1);
  EXPECT_THROW(RankOneProduct(dims, {ComplexVector::Zero(2), random_vector(3, rng)}, {random_vector(2, rng), random_vector(3, rng)}),
               Error);
  EXPECT_THROW(RankOneProduct(dims, {random_vector(3, rng), random_vector(3, rng)}, {random_vector(2, rng), random_vector(3, rng)}),
               Error);
  EXPECT_THROW(DimsProfile({1, 3}), Error);
}

// The realignments of partially transposed matrices are fixed row/column
// permutations of the plain realignments. P (and Q) are first read off from a
// matrix with distinct entries, then compared with the commutation-matrix
// construction and checked on random inputs.
namespace {

IndexPermutation match_rows(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  std::vector<Index> src(static_cast<std::size_t>(lhs.rows()), -1);
  for (Index i = 0; i < lhs.rows(); ++i)
    for (Index j = 0; j < rhs.rows(); ++j)
      if (lhs.row(i) == rhs.row(j)) src[static_cast<std::size_t>(i)] = j;
  return IndexPermutation(src);
}

ComplexMatrix distinct_entries(Index n) {
  ComplexMatrix a(n, n);
  for (Index i = 0; i < n * n; ++i) a(i / n, i % n) = static_cast<double>(i + 1);
  return a;
}

}  // namespace

TEST(Realign, PartialTransposeIsPermutationallySimilar) {
  const Index n1 = 2, n2 = 3;
  const BipartiteShape s{n1, n2};
  const ComplexMatrix basis = distinct_entries(n1 * n2);
  Rng rng = make_rng(15);
  const ComplexMatrix k1 = factor_permutation({n1, n1}, {1, 0}).matrix();
  const ComplexMatrix k2 = factor_permutation({n2, n2}, {1, 0}).matrix();
  const ComplexMatrix i1 = ComplexMatrix::Identity(n1, n1), i2 = ComplexMatrix::Identity(n2, n2);

  // (A^PT1)^R1 = (K_n1 (x) I_n2) A^R1
  const IndexPermutation p_r1 = match_rows(realign(partial_transpose(basis, s, Subsystem::first), s, Realignment::r1),
                                           realign(basis, s, Realignment::r1));
  EXPECT_EQ(p_r1.matrix(), kron(k1, i2));
  // (A^PT2)^R2 = (I_n1 (x) K_n2) A^R2
  const IndexPermutation p_r2 = match_rows(realign(partial_transpose(basis, s, Subsystem::second), s, Realignment::r2),
                                           realign(basis, s, Realignment::r2));
  EXPECT_EQ(p_r2.matrix(), kron(i1, k2));
  // (A^PT1)^R = K_n1 A^R
  const IndexPermutation p_r = match_rows(realign(partial_transpose(basis, s, Subsystem::first), s, Realignment::full),
                                          realign(basis, s, Realignment::full));
  EXPECT_EQ(p_r.matrix(), k1);
  // (A^PT2)^R = A^R K_n2^T (columns)
  const IndexPermutation q_r =
      match_rows(realign(partial_transpose(basis, s, Subsystem::second), s, Realignment::full).transpose(),
                 realign(basis, s, Realignment::full).transpose());
  EXPECT_EQ(q_r.matrix().transpose(), k2.transpose());
  // vec(A^PT1) swaps the x1 and y1 slots of x1 (x) x2 (x) y1 (x) y2.
  const IndexPermutation p_vec = factor_permutation({n1, n2, n1, n2}, {2, 1, 0, 3});

  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix a = random_matrix(n1 * n2, n1 * n2, rng);
    EXPECT_LT(max_abs_diff(realign(partial_transpose(a, s, Subsystem::first), s, Realignment::r1),
                           kron(k1, i2) * realign(a, s, Realignment::r1)),
              1e-13);
    EXPECT_LT(max_abs_diff(realign(partial_transpose(a, s, Subsystem::second), s, Realignment::r2),
                           kron(i1, k2) * realign(a, s, Realignment::r2)),
              1e-13);
    EXPECT_LT(max_abs_diff(realign(partial_transpose(a, s, Subsystem::first), s, Realignment::full),
                           k1 * realign(a, s, Realignment::full)),
              1e-13);
    EXPECT_LT(max_abs_diff(realign(partial_transpose(a, s, Subsystem::second), s, Realignment::full),
                           realign(a, s, Realignment::full) * k2.transpose()),
              1e-13);
    EXPECT_LT(max_abs_diff(vec(partial_transpose(a, s, Subsystem::first)), p_vec.apply(vec(a))), 1e-13);
  }
}
