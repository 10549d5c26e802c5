#include <gtest/gtest.h>

#include <random>

#include "geocube/orientation.hpp"
#include "geocube/sign_suite.hpp"

using namespace geocube;

namespace {

RatMatrix q(std::initializer_list<std::initializer_list<long>> rows) { return RatMatrix(rows); }

LinearMap map_of(const RatMatrix& m) { return LinearMap{standard_space(m.cols()), standard_space(m.rows()), m}; }

RatMatrix random_matrix(std::mt19937_64& eng, std::size_t r, std::size_t c) {
  RatMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = long(eng() % 7) - 3;
  return m;
}

// Pullback co-orientation computed from the defining identity
// beta_P ^ beta_nuP = beta_W ^ beta_E, with every auxiliary choice made at
// random: the Quillen normal N of e(V) = (F v, v) and the complement U of P
// inside W (+) R^v.
int pullback_oracle(std::mt19937_64& eng, const CoorientedMap& f, const LinearMap& g) {
  const std::size_t v = f.map.domain.dim(), m = f.map.codomain.dim(), w = g.domain.dim();
  const std::size_t a = v;
  const RatMatrix e = vconcat(f.map.matrix, RatMatrix::identity(v));
  RatMatrix n;
  do n = random_matrix(eng, m + a, m + a - v);
  while (det_sign(hconcat(e, n)) == 0);
  // beta_V ^ beta_N = omega beta_M ^ beta_E decides the sign of N.
  const int sigma_n = f.omega * det_sign(hconcat(e, n));

  const Subspace p = fiber_subspace(f.map, g);
  const RatMatrix pv = row_block(p.basis, 0, v), pw = row_block(p.basis, v, w);
  const RatMatrix qp = vconcat(pw, pv);  // P inside W (+) R^a
  RatMatrix u;
  do u = random_matrix(eng, w + a, w + a - p.dim());
  while (det_sign(hconcat(qp, u)) == 0);
  // (g (+) id) U is a complement of e(V); orient U so it matches N there.
  const RatMatrix gu = block_diag(g.matrix, RatMatrix::identity(a)) * u;
  const int sigma_u = sigma_n * det_sign(hconcat(e, gu)) * det_sign(hconcat(e, n));
  return sigma_u * det_sign(hconcat(qp, u));
}

}  // namespace

TEST(Transverse, Examples) {
  EXPECT_TRUE(is_transverse(map_of(q({{1}, {0}})), map_of(q({{0}, {1}}))));
  EXPECT_FALSE(is_transverse(map_of(q({{1}, {1}})), map_of(q({{1}, {1}}))));
  EXPECT_TRUE(is_transverse(map_of(q({{1, 0}, {0, 1}, {0, 0}})), map_of(q({{0, 0}, {1, 0}, {0, 1}}))));
}

TEST(Transverse, CodomainMismatch) {
  try {
    is_transverse(map_of(q({{1}, {0}})), map_of(q({{1}})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CodomainMismatch);
  }
}

TEST(FiberSubspace, Dimensions) {
  EXPECT_EQ(fiber_subspace(map_of(q({{1}, {0}})), map_of(q({{0}, {1}}))).dim(), 0u);
  auto p = fiber_subspace(map_of(q({{1, 0}, {0, 1}, {0, 0}})), map_of(q({{0, 0}, {1, 0}, {0, 1}})));
  EXPECT_EQ(p.dim(), 1u);
  // f = id: the fiber product is the graph of g, projecting isomorphically to W.
  LinearMap g = map_of(q({{1, 2}, {3, -1}}));
  auto gp = fiber_subspace(identity_map(standard_space(2)), g);
  EXPECT_EQ(gp.dim(), 2u);
  EXPECT_NE(det_sign(second_part(gp, 2)), 0);
}

TEST(FiberSubspace, NotTransverseThrows) {
  try {
    fiber_subspace(map_of(q({{1}, {1}})), map_of(q({{2}, {2}})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotTransverse);
  }
}

// R^3 with e_x^e_y^e_z, V = {z = 0} with e_x^e_y, W = {x = 0} with e_y^e_z:
// the intersection is the y axis oriented by -e_y.
TEST(PaperExamples, PlanesInR3GiveMinusEy) {
  LinearMap f = map_of(q({{1, 0}, {0, 1}, {0, 0}}));
  LinearMap g = map_of(q({{0, 0}, {1, 0}, {0, 1}}));
  auto p = oriented_fiber_product(f, 1, g, 1, 1);
  ASSERT_EQ(p.space.dim(), 1u);
  RatMatrix image = f.matrix * first_part(p.space, 2);  // the basis vector in M
  EXPECT_EQ(image(0, 0), 0);
  EXPECT_EQ(image(2, 0), 0);
  ASSERT_NE(image(1, 0), 0);
  const int along_ey = p.sign * (image(1, 0) > 0 ? 1 : -1);
  EXPECT_EQ(along_ey, -1);
}

// x axis and y axis in R^2 meet in a negatively oriented point.
TEST(PaperExamples, AxesInR2GiveNegativePoint) {
  auto p = oriented_fiber_product(map_of(q({{1}, {0}})), 1, map_of(q({{0}, {1}})), 1, 1);
  EXPECT_EQ(p.space.dim(), 0u);
  EXPECT_EQ(p.sign, -1);
}

TEST(OrientedFiberProduct, IdentityFactorKeepsOrientation) {
  std::mt19937_64 eng(1);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 1 + eng() % 4, w = eng() % 5;
    LinearMap g = map_of(random_matrix(eng, m, w));
    const int sw = eng() % 2 ? 1 : -1, sm = eng() % 2 ? 1 : -1;
    auto p = oriented_fiber_product(identity_map(standard_space(m)), sm, g, sw, sm);
    OrientedSubspace wspace{standard_space(w), sw};
    // compare through the projection P -> W
    auto rel = relative_orientation(p, hconcat(RatMatrix(w, m), RatMatrix::identity(w)), wspace,
                                    RatMatrix::identity(w));
    ASSERT_TRUE(rel.has_value());
    EXPECT_EQ(*rel, 1);
  }
}

TEST(OrientedFiberProduct, SplittingIndependence) {
  std::mt19937_64 eng(2);
  int checked = 0;
  while (checked < 100) {
    const std::size_t m = 1 + eng() % 4, v = eng() % 5, w = eng() % 5;
    LinearMap f = map_of(random_matrix(eng, m, v)), g = map_of(random_matrix(eng, m, w));
    if (!is_transverse(f, g)) continue;
    RatMatrix s = default_splitting(f, g);
    // another right inverse: add a random kernel component
    Subspace p = fiber_subspace(f, g);
    RatMatrix s2 = s + p.basis * random_matrix(eng, p.dim(), m);
    ASSERT_EQ(difference_matrix(f, g) * s2, RatMatrix::identity(m));
    EXPECT_EQ(oriented_fiber_product(f, 1, g, 1, 1, s).sign, oriented_fiber_product(f, 1, g, 1, 1, s2).sign);
    ++checked;
  }
}

TEST(Quillen, IdentityNeedsNoNormal) {
  CoorientedMap id{identity_map(standard_space(3)), 1};
  auto qd = quillen_factorization(id, 0, RatMatrix(0, 3));
  EXPECT_EQ(qd.stabilization_dim, 0u);
  EXPECT_EQ(qd.normal.space.dim(), 0u);
  EXPECT_EQ(qd.normal.sign, 1);
}

TEST(Quillen, AxisInclusionNormalIsEy) {
  CoorientedMap f{map_of(q({{1}, {0}})), 1};
  auto qd = quillen_factorization(f, 0, RatMatrix(0, 1));
  ASSERT_EQ(qd.normal.space.dim(), 1u);
  // normal direction, oriented: should be +e_y
  const Rat y = qd.normal.space.basis(1, 0) * qd.normal.sign;
  EXPECT_EQ(qd.normal.space.basis(0, 0), 0);
  EXPECT_GT(y, 0);
}

TEST(Quillen, CompatibilityHoldsByDeterminant) {
  std::mt19937_64 eng(3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = eng() % 4, v = eng() % 4, extra = eng() % 3;
    CoorientedMap f{map_of(random_matrix(eng, m, v)), eng() % 2 ? 1 : -1};
    auto qd = quillen_factorization(f, extra);
    EXPECT_EQ(qd.stabilization_dim, v + extra);
    // projection of the embedding is f
    EXPECT_EQ(row_block(qd.embedding.matrix, 0, m), f.map.matrix);
    const RatMatrix full = hconcat(qd.embedding.matrix, qd.normal.space.basis);
    ASSERT_NE(det_sign(full), 0);
    EXPECT_EQ(qd.normal.sign * det_sign(full), f.omega);
  }
  // projection R^2 -> R^1 with the canonical co-orientation
  CoorientedMap pr{map_of(q({{1, 0}})), 1};
  auto qd = quillen_factorization(pr);
  EXPECT_EQ(qd.normal.sign * det_sign(hconcat(qd.embedding.matrix, qd.normal.space.basis)), 1);
}

TEST(Pullback, MatchesRandomChoiceOracle) {
  std::mt19937_64 eng(4);
  int checked = 0;
  while (checked < 300) {
    const std::size_t m = eng() % 5, v = eng() % 5, w = eng() % 5;
    CoorientedMap f{map_of(random_matrix(eng, m, v)), eng() % 2 ? 1 : -1};
    LinearMap g = map_of(random_matrix(eng, m, w));
    if (!is_transverse(f.map, g)) continue;
    EXPECT_EQ(cooriented_pullback(f, g).omega, pullback_oracle(eng, f, g));
    ++checked;
  }
}

TEST(Pullback, EvenAndOddStabilizationsAgree) {
  std::mt19937_64 eng(5);
  int checked = 0;
  while (checked < 200) {
    const std::size_t m = eng() % 4, v = eng() % 4, w = eng() % 4;
    CoorientedMap f{map_of(random_matrix(eng, m, v)), 1};
    LinearMap g = map_of(random_matrix(eng, m, w));
    if (!is_transverse(f.map, g)) continue;
    const int base = cooriented_pullback(f, g, 0).omega;
    for (std::size_t extra = 1; extra <= 3; ++extra) EXPECT_EQ(cooriented_pullback(f, g, extra).omega, base);
    ++checked;
  }
}

TEST(Pullback, CodimensionZeroIsTautological) {
  // f an isomorphism onto M with the tautological co-orientation; P -> W is
  // then an isomorphism and the pullback is (beta_P, beta_P).
  std::mt19937_64 eng(6);
  int checked = 0;
  while (checked < 50) {
    const std::size_t m = 1 + eng() % 3;
    RatMatrix a = random_matrix(eng, m, m);
    if (det_sign(a) == 0) continue;
    CoorientedMap f{map_of(a), det_sign(a)};  // (beta_V, f_* beta_V) up to the listed bases
    LinearMap g = map_of(random_matrix(eng, m, eng() % 4));
    auto pb = cooriented_pullback(f, g);
    EXPECT_EQ(pb.omega, det_sign(pb.map.matrix));
    ++checked;
  }
}

TEST(Pullback, AlongIdentityReturnsF) {
  std::mt19937_64 eng(7);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = eng() % 4, v = eng() % 4;
    CoorientedMap f{map_of(random_matrix(eng, m, v)), eng() % 2 ? 1 : -1};
    auto pb = cooriented_pullback(f, identity_map(standard_space(m)));
    // P sits in V (+) M; identify it with V through the first block.
    RatMatrix to_v = hconcat(RatMatrix::identity(v), RatMatrix(v, m));
    auto rel = relative_coorientation(pb, to_v, f, RatMatrix::identity(v));
    ASSERT_TRUE(rel.has_value());
    EXPECT_EQ(*rel, 1);
  }
}

TEST(FiberProduct, WithIdentityIsF) {
  std::mt19937_64 eng(8);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = eng() % 4, v = eng() % 4;
    CoorientedMap f{map_of(random_matrix(eng, m, v)), eng() % 2 ? 1 : -1};
    CoorientedMap id{identity_map(standard_space(m)), 1};
    auto left = cooriented_fiber_product(f, id);
    auto right = cooriented_fiber_product(id, f);
    auto a = relative_coorientation(left, hconcat(RatMatrix::identity(v), RatMatrix(v, m)), f,
                                    RatMatrix::identity(v));
    auto b = relative_coorientation(right, hconcat(RatMatrix(v, m), RatMatrix::identity(v)), f,
                                    RatMatrix::identity(v));
    ASSERT_TRUE(a && b);
    EXPECT_EQ(*a, 1);
    EXPECT_EQ(*b, 1);
  }
}

TEST(FiberProduct, FlippingAnInputFlipsTheOutput) {
  std::mt19937_64 eng(9);
  int checked = 0;
  while (checked < 100) {
    const std::size_t m = eng() % 4, v = eng() % 4, w = eng() % 4;
    CoorientedMap f{map_of(random_matrix(eng, m, v)), 1}, g{map_of(random_matrix(eng, m, w)), 1};
    if (!is_transverse(f.map, g.map)) continue;
    const int base = cooriented_fiber_product(f, g).omega;
    CoorientedMap f2 = f, g2 = g;
    f2.omega = -1;
    g2.omega = -1;
    EXPECT_EQ(cooriented_fiber_product(f2, g).omega, -base);
    EXPECT_EQ(cooriented_fiber_product(f, g2).omega, -base);
    ++checked;
  }
}

TEST(Exterior, PointIsAUnit) {
  std::mt19937_64 eng(10);
  for (int t = 0; t < 30; ++t) {
    const std::size_t m = eng() % 4, v = eng() % 4;
    CoorientedMap f{map_of(random_matrix(eng, m, v)), eng() % 2 ? 1 : -1};
    CoorientedMap pt{identity_map(standard_space(0)), 1};
    auto fp = exterior_product(f, pt);
    auto pf = exterior_product(pt, f);
    EXPECT_EQ(fp.omega, f.omega);
    EXPECT_EQ(pf.omega, f.omega);
  }
}

TEST(Cap, TautologicalIdentityGivesW) {
  std::mt19937_64 eng(11);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = eng() % 4, w = eng() % 4;
    LinearMap g = map_of(random_matrix(eng, m, w));
    const int sw = eng() % 2 ? 1 : -1;
    auto c = cap_orientation(CoorientedMap{identity_map(standard_space(m)), 1}, g, sw);
    auto rel = relative_orientation(c.space, hconcat(RatMatrix(w, m), RatMatrix::identity(w)),
                                    OrientedSubspace{standard_space(w), sw}, RatMatrix::identity(w));
    ASSERT_TRUE(rel.has_value());
    EXPECT_EQ(*rel, 1);
  }
}

TEST(Cap, WithOrientedIdentityGivesInducedOrientation) {
  std::mt19937_64 eng(12);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = eng() % 4, v = eng() % 4;
    CoorientedMap f{map_of(random_matrix(eng, m, v)), eng() % 2 ? 1 : -1};
    const int sm = eng() % 2 ? 1 : -1;
    auto c = cap_orientation(f, identity_map(standard_space(m)), sm);
    auto rel = relative_orientation(c.space, hconcat(RatMatrix::identity(v), RatMatrix(v, m)),
                                    OrientedSubspace{standard_space(v), induced_orientation(f, sm)},
                                    RatMatrix::identity(v));
    ASSERT_TRUE(rel.has_value());
    EXPECT_EQ(*rel, 1);
  }
}

// Complementary embeddings: the point V x_M W is positive exactly when the
// normal orientation of V agrees with the orientation of W modulo V.
TEST(Cap, ComplementaryPointSign) {
  std::mt19937_64 eng(13);
  int checked = 0;
  while (checked < 100) {
    const std::size_t m = 1 + eng() % 4, v = eng() % (m + 1), w = m - v;
    RatMatrix fm = random_matrix(eng, m, v), gm = random_matrix(eng, m, w);
    if (det_sign(hconcat(fm, gm)) == 0) continue;
    CoorientedMap f{map_of(fm), eng() % 2 ? 1 : -1};
    const int sw = eng() % 2 ? 1 : -1;
    auto qd = quillen_factorization(f, 0, RatMatrix(0, v));
    auto c = cap_orientation(f, map_of(gm), sw);
    ASSERT_EQ(c.space.space.dim(), 0u);
    const int normal_vs_w = qd.normal.sign * det_sign(hconcat(fm, qd.normal.space.basis)) * sw *
                            det_sign(hconcat(fm, gm));
    EXPECT_EQ(c.space.sign, normal_vs_w);
    ++checked;
  }
}

TEST(SignSuite, SmallRunPasses) {
  auto rep = run_sign_suite(42, 100, 4);
  EXPECT_TRUE(rep.all_passed()) << rep.format();
  EXPECT_EQ(rep.properties.size(), 16u);
}

TEST(SignSuite, ZeroInstancesIsEmpty) {
  auto rep = run_sign_suite(42, 0, 4);
  EXPECT_TRUE(rep.properties.empty());
  EXPECT_NE(rep.format().find("no instances"), std::string::npos);
}

TEST(SignSuite, Deterministic) {
  EXPECT_EQ(run_sign_suite(7, 30, 4).format(), run_sign_suite(7, 30, 4).format());
}
