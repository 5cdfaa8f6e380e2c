#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace rop;
using rop::testing::load_fixture;
using rop::testing::max_abs_diff;

namespace {

const AssembleOptions loose{.strict = false, .search = {}};

PreserverMap strip(PreserverMap map) {
  map.origin.reset();
  return map;
}

/// Smallest |lambda * a - b| / |b| over complex lambda.
double gauge_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Complex lambda = a.cwiseProduct(b.conjugate()).sum() == Complex(0.0)
                             ? Complex(0.0)
                             : (vec(a).adjoint() * vec(b))(0) / vec(a).squaredNorm();
  return (lambda * a - b).norm() / b.norm();
}

}  // namespace

TEST(Classify, IdentityAndTranspose) {
  const DimsProfile dims({2, 3});
  EXPECT_EQ(classify_subsystems(strip(identity_map(dims))), Partition(2, full_set(2), {}, {}, {}));
  const PreserverMap t = assemble_phi(dims, Partition(2, {}, full_set(2), {}, {}), ComplexMatrix::Identity(6, 6),
                                      ComplexMatrix::Identity(6, 6));
  EXPECT_EQ(classify_subsystems(strip(t)), Partition(2, {}, full_set(2), {}, {}));
}

TEST(Classify, ExampleThreeIsAllVec) {
  const DimsProfile dims({3, 3});
  const FormDescriptor d = describe_form({PsiP::id, PsiR::vec, PsiT::id}, 3, 3);
  auto [mp, np] = equivalent_factors(d, dims, rop::testing::example13_m(), ComplexMatrix::Constant(9, 1, 1.0));
  const PreserverMap map = strip(assemble_phi(dims, d.partition, mp, np, loose));
  EXPECT_EQ(classify_subsystems(map), Partition(2, {}, {}, full_set(2), {}));
  const RecoveryResult r = recover(map);
  EXPECT_LT(r.residual, 1e-8);
}

TEST(Classify, InvariantUnderScaling) {
  const DimsProfile dims({2, 2, 2});
  const Partition p(3, {2}, {}, {0}, {1});
  auto [m, n] = synthesize_factors(dims, p, 5);
  PreserverMap map = strip(assemble_phi(dims, p, m, n, loose));
  EXPECT_EQ(classify_subsystems(map), p);
  map.phi *= Complex(-3e-5, 2e-5);
  EXPECT_EQ(classify_subsystems(map), p);
}

TEST(Classify, NonPreserverIsAmbiguous) {
  const DimsProfile dims({2, 2});
  ComplexMatrix phi = ComplexMatrix::Identity(16, 16);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) phi(i * 4 + j, j * 4 + i) += 1.0;
  try {
    recover(make_map(dims, phi));
    FAIL() << "expected a structured recovery error";
  } catch (const Error& e) {
    EXPECT_TRUE(e.kind() == ErrorKind::ambiguous_structure || e.kind() == ErrorKind::not_kronecker) << e.what();
  }
}

TEST(RecoverFactors, IdentityGivesIdentityFactors) {
  const DimsProfile dims({2, 2});
  const RecoveryResult r = recover_factors(strip(identity_map(dims)), Partition(2, full_set(2), {}, {}, {}));
  EXPECT_LT(max_abs_diff(r.m, ComplexMatrix::Identity(4, 4)), 1e-12);
  EXPECT_LT(max_abs_diff(r.n, ComplexMatrix::Identity(4, 4)), 1e-12);
  EXPECT_LT(max_abs_diff(kron(r.m, r.n), ComplexMatrix::Identity(16, 16)), 1e-12);
  EXPECT_LT(r.residual, 1e-12);
}

TEST(RecoverFactors, NotKroneckerForWrongPartition) {
  const DimsProfile dims({2, 3});
  Rng rng = make_rng(50);
  const PreserverMap map =
      strip(assemble_phi(dims, Partition(2, {0}, {1}, {}, {}), random_matrix(6, 6, rng), random_matrix(6, 6, rng)));
  try {
    recover_factors(map, Partition(2, {1}, {0}, {}, {}));
    FAIL() << "expected not-kronecker";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_kronecker);
  }
}

TEST(RecoverFactors, GaugeNormalizesLargestEntryOfM) {
  const DimsProfile dims({2, 3});
  const Partition p(2, {1}, {}, {}, {0});
  auto [m, n] = synthesize_factors(dims, p, 8);
  const RecoveryResult r = recover_factors(strip(assemble_phi(dims, p, m, n, loose)), p);
  EXPECT_NEAR(r.m.cwiseAbs().maxCoeff(), 1.0, 1e-12);
  bool has_unit = false;
  for (Index i = 0; i < r.m.size(); ++i) has_unit |= std::abs(r.m(i / r.m.cols(), i % r.m.cols()) - 1.0) < 1e-12;
  EXPECT_TRUE(has_unit);
  EXPECT_LT(gauge_distance(m, r.m), 1e-10);
  EXPECT_LT(gauge_distance(n, r.n), 1e-10);
}

TEST(RecoverFactors, ExampleOneFactorsUpToGauge) {
  const DimsProfile dims({2, 3});
  const ComplexMatrix m = load_fixture("example1_1_M.json");
  const ComplexMatrix n = load_fixture("example1_1_N.json");
  const BipartiteForm f{{PsiP::id, PsiR::r, PsiT::id}, m, n};
  const PreserverMap map = strip(assemble_bipartite(f, 2, 3));
  const RecoveryResult r = recover(map);
  const FormDescriptor d = describe_form(f.type, 2, 3);
  EXPECT_EQ(r.partition, d.partition);
  EXPECT_LT(r.residual, 1e-8);
  // A -> M A^R N^T reads x1 y1 | x2 y2, which is already the canonical token order.
  EXPECT_LT(gauge_distance(m, r.m), 1e-10);
  EXPECT_LT(gauge_distance(n, r.n), 1e-10);
  EXPECT_EQ(r.gauge, Complex(1.0, 0.0));
  EXPECT_LT(max_abs_diff(r.m, m), 1e-12);
  EXPECT_LT(max_abs_diff(r.n, n), 1e-12);
}

TEST(Recover, RoundTripOnRandomSmallMaps) {
  Rng rng = make_rng(51);
  std::uniform_int_distribution<int> pick_n(2, 3);
  int done = 0;
  for (int t = 0; done < 25; ++t) {
    const DimsProfile dims(t % 2 == 0 ? std::vector<Index>{pick_n(rng), pick_n(rng)}
                                      : std::vector<Index>{2, 2, pick_n(rng)});
    const auto parts = all_partitions(dims.k());
    const Partition p = parts[std::uniform_int_distribution<std::size_t>(0, parts.size() - 1)(rng)];
    if (!partition_admits_factors(dims, p)) continue;
    auto [m, n] = synthesize_factors(dims, p, static_cast<std::uint64_t>(100 + t));
    const PreserverMap map = strip(assemble_phi(dims, p, m, n, loose));
    ClassifyOptions o;
    o.seed = static_cast<std::uint64_t>(t);
    const RecoveryResult r = recover(map, o);
    EXPECT_EQ(r.partition, p);
    EXPECT_LT(r.residual, 1e-8) << p.to_string();
    EXPECT_LT(gauge_distance(m, r.m), 1e-9);
    EXPECT_LT(gauge_distance(n, r.n), 1e-9);
    // Reassembling with the recovered factors passes the kernel conditions.
    EXPECT_NO_THROW(assemble_phi(dims, r.partition, r.m, r.n));
    ++done;
  }
}
