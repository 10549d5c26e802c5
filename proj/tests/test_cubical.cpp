#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "geocube/chains.hpp"
#include "geocube/corpus.hpp"
#include "geocube/cubical.hpp"
#include "geocube/subdivision.hpp"

using namespace geocube;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::SemanticError;
}

std::vector<std::size_t> counts(const CubicalComplex& x) {
  std::vector<std::size_t> c;
  for (int k = 0; k <= x.top_dim(); ++k) c.push_back(x.count(std::size_t(k)));
  return c;
}

}  // namespace

TEST(Build, SingleVertex) {
  auto x = build_and_validate({CubeSpec{{"v"}}});
  EXPECT_EQ(x.top_dim(), 0);
  EXPECT_EQ(x.face_total(), 1u);
}

TEST(Build, TorusTwoByTwoSharesVertexSets) {
  EXPECT_EQ(code_of([] { gen::torus_grid(2, 2); }), ErrorCode::DuplicateVertexSet);
  EXPECT_EQ(code_of([] { gen::torus_grid(2, 3); }), ErrorCode::DuplicateVertexSet);
  EXPECT_EQ(code_of([] { gen::torus_grid(4, 2); }), ErrorCode::DuplicateVertexSet);
}

TEST(Build, TorusFourByFour) {
  auto t = gen::torus_grid(4, 4);
  EXPECT_EQ(counts(t), (std::vector<std::size_t>{16, 32, 16}));
  EXPECT_EQ(euler_characteristic(t), 0);
}

TEST(Build, MalformedSpecs) {
  EXPECT_EQ(code_of([] { build_and_validate({CubeSpec{{"a", "b", "c"}}}); }), ErrorCode::MalformedSpec);
  EXPECT_EQ(code_of([] { build_and_validate({CubeSpec{{"a", "a"}}}); }), ErrorCode::MalformedSpec);
  EXPECT_EQ(code_of([] { build_and_validate({CubeSpec{{"a b", "c"}}}); }), ErrorCode::MalformedSpec);
  EXPECT_EQ(code_of([] { build_and_validate({CubeSpec{{}}}); }), ErrorCode::MalformedSpec);
}

TEST(Build, DuplicateListing) {
  EXPECT_EQ(code_of([] { build_and_validate({CubeSpec{{"a", "b"}}, CubeSpec{{"b", "a"}}}); }),
            ErrorCode::DuplicateVertexSet);
}

TEST(Build, PosetCycle) {
  EXPECT_EQ(code_of([] {
              build_and_validate({CubeSpec{{"a", "b"}}, CubeSpec{{"b", "c"}}, CubeSpec{{"c", "a"}}});
            }),
            ErrorCode::PosetCycle);
}

TEST(Build, ConflictingCharacteristicMaps) {
  // edge {a,b} is a->b in the first square and b->a in the second
  EXPECT_EQ(code_of([] {
              build_and_validate({CubeSpec{{"a", "b", "c", "d"}}, CubeSpec{{"b", "a", "e", "f"}}});
            }),
            ErrorCode::IntervalClosureFailure);
  // an edge of the square listed against its direction
  EXPECT_EQ(code_of([] {
              build_and_validate({CubeSpec{{"a", "b", "c", "d"}}, CubeSpec{{"c", "a"}}});
            }),
            ErrorCode::IntervalClosureFailure);
}

TEST(Build, DiagonalIsNotAFace) {
  auto x = build_and_validate({CubeSpec{{"a", "b", "c", "d"}}, CubeSpec{{"a", "d"}}});
  EXPECT_EQ(x.count(1), 5u);
}

TEST(Build, ListingAFaceSeparatelyIsHarmless) {
  auto x = build_and_validate({CubeSpec{{"a", "b", "c", "d"}}, CubeSpec{{"a", "b"}}});
  EXPECT_EQ(x.face_total(), 9u);
  EXPECT_EQ(x.top_cubes().size(), 1u);
}

TEST(Faces, Counts) {
  auto x = gen::standard_cube(3);
  EXPECT_EQ(faces(x, FaceRef{1, 0}).size(), 3u);
  EXPECT_EQ(faces(x, FaceRef{2, 0}).size(), 9u);
  EXPECT_EQ(faces(x, FaceRef{3, 0}).size(), 27u);
  EXPECT_EQ(code_of([&] { faces(x, FaceRef{4, 0}); }), ErrorCode::UnknownFace);
  EXPECT_EQ(code_of([&] { faces(x, FaceRef{1, 99}); }), ErrorCode::UnknownFace);
}

TEST(Faces, IntervalsMatchVertexSets) {
  auto x = gen::standard_cube(2);
  for (const auto& [f, s] : faces(x, FaceRef{2, 0})) {
    EXPECT_EQ(f.dim, popcount(s.free));
    // the first vertex of the face is the one at position `ones`
    EXPECT_EQ(x.cube(f).positions.front(), x.cube(FaceRef{2, 0}).positions[s.ones]);
  }
}

TEST(Product, PointIsAUnit) {
  for (const auto& x : {gen::circle(4), gen::torus_grid(3, 3), gen::cube_boundary(3)}) {
    EXPECT_EQ(counts(product(gen::point(), x)), counts(x));
    EXPECT_EQ(counts(product(x, gen::point())), counts(x));
  }
}

TEST(Product, IntervalSquared) {
  auto i = gen::standard_cube(1);
  auto sq = product(i, i);
  EXPECT_EQ(sq.face_total(), 9u);
  EXPECT_EQ(counts(sq), (std::vector<std::size_t>{4, 4, 1}));
}

TEST(Product, CircleTimesCircle) {
  auto t = product(gen::circle(3), gen::circle(3));
  EXPECT_EQ(counts(t), (std::vector<std::size_t>{9, 18, 9}));
  EXPECT_EQ(euler_characteristic(t), 0);
}

TEST(Product, OrderIsTheProductOrder) {
  auto p = product(gen::path(1), gen::path(1));
  const int a = *p.vertex_id(product_vertex_name("p0", "p0"));
  const int b = *p.vertex_id(product_vertex_name("p1", "p0"));
  const int c = *p.vertex_id(product_vertex_name("p0", "p1"));
  const int d = *p.vertex_id(product_vertex_name("p1", "p1"));
  EXPECT_TRUE(p.less(a, b));
  EXPECT_TRUE(p.less(a, d));
  EXPECT_TRUE(p.less(c, d));
  EXPECT_FALSE(p.less(b, c));
  EXPECT_FALSE(p.less(c, b));
}

TEST(Generators, Counts) {
  EXPECT_EQ(counts(gen::circle(3)), (std::vector<std::size_t>{3, 3}));
  auto cb = gen::cube_boundary(3);
  EXPECT_EQ(counts(cb), (std::vector<std::size_t>{8, 12, 6}));
  EXPECT_EQ(euler_characteristic(cb), 2);
  EXPECT_EQ(counts(gen::path(5)), (std::vector<std::size_t>{6, 5}));
  EXPECT_EQ(counts(gen::standard_cube(4)), (std::vector<std::size_t>{16, 32, 24, 8, 1}));
}

TEST(Generators, ParamTooSmall) {
  EXPECT_EQ(code_of([] { gen::circle(2); }), ErrorCode::ParamTooSmall);
  EXPECT_EQ(code_of([] { gen::torus_grid(1, 4); }), ErrorCode::ParamTooSmall);
  EXPECT_EQ(code_of([] { gen::cube_boundary(0); }), ErrorCode::ParamTooSmall);
  EXPECT_EQ(code_of([] { gen::path(0); }), ErrorCode::ParamTooSmall);
}

TEST(Generators, SeamStartsAtTheMinimum) {
  auto c = gen::circle(5);
  auto seam = c.find_by_names({"c0", "c4"});
  ASSERT_TRUE(seam);
  EXPECT_EQ(c.vertex_names()[std::size_t(c.cube(*seam).positions[0])], "c0");
}

TEST(Generators, TorusMatchesProductOfCircles) {
  EXPECT_EQ(counts(gen::torus_grid(4, 5)), counts(product(gen::circle(4), gen::circle(5))));
}

TEST(Generators, FuzzedComplexesAreValid) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto x = gen::fuzz(s);
    EXPECT_TRUE(order_preserving(x));
    EXPECT_EQ(gen::fuzz(s).face_total(), x.face_total());
  }
}

TEST(Corpus, Klein) {
  auto k = corpus_load("klein");
  EXPECT_EQ(euler_characteristic(k), 0);
  EXPECT_EQ(counts(k), (std::vector<std::size_t>{16, 32, 16}));
  EXPECT_TRUE(order_preserving(k));
}

TEST(Corpus, TorusAndUnknown) {
  EXPECT_EQ(counts(corpus_load("torus-4")), counts(gen::torus_grid(4, 4)));
  EXPECT_EQ(code_of([] { corpus_load("nope"); }), ErrorCode::UnknownCorpusEntry);
}

TEST(Invariants, RebuildingFromTopCubesIsIdempotent) {
  for (const auto& x : {gen::torus_grid(3, 4), gen::cube_boundary(4), corpus_load("klein"), gen::fuzz(3)}) {
    auto y = build_and_validate(x.top_cubes(), x.name());
    ASSERT_EQ(counts(x), counts(y));
    for (int k = 0; k <= x.top_dim(); ++k)
      for (std::size_t i = 0; i < x.count(std::size_t(k)); ++i)
        EXPECT_EQ(x.cubes(std::size_t(k))[i].positions, y.cubes(std::size_t(k))[i].positions);
  }
}

// For every cube and every interval [u, w] of its power set, the face found by
// vertex set carries the restricted characteristic map.
TEST(Invariants, CharacteristicMapsCommuteExhaustively) {
  std::vector<CubicalComplex> all = {gen::standard_cube(4), gen::cube_boundary(4), gen::torus_grid(5, 5),
                                     corpus_load("klein"), SubdividedComplex(gen::torus_grid(3, 3)).complex()};
  for (std::uint64_t s = 0; s < 10; ++s) all.push_back(gen::fuzz(s));
  for (const auto& x : all) {
    ASSERT_LE(x.face_total(), 10000u);
    std::set<std::vector<int>> keys;
    for (int k = 0; k <= x.top_dim(); ++k)
      for (std::size_t i = 0; i < x.count(std::size_t(k)); ++i) {
        const FaceRef f{std::size_t(k), i};
        EXPECT_TRUE(keys.insert(x.cube(f).key).second);  // vertex sets are distinct
        const auto& pos = x.cube(f).positions;
        for (const auto& [g, s] : faces(x, f)) {
          const auto& gpos = x.cube(g).positions;
          for (Mask j = 0; j < gpos.size(); ++j) ASSERT_EQ(gpos[j], pos[s.ones | deposit(j, s.free)]);
        }
      }
    EXPECT_TRUE(order_preserving(x));
  }
}

TEST(Subdivision, Interval) {
  SubdividedComplex sd(gen::standard_cube(1));
  EXPECT_EQ(counts(sd.complex()), (std::vector<std::size_t>{3, 2}));
}

TEST(Subdivision, SquareHasTwentyFiveFaces) {
  SubdividedComplex sd(gen::standard_cube(2));
  EXPECT_EQ(sd.complex().face_total(), 25u);
  EXPECT_EQ(sd.cell_count(), 25u);
}

TEST(Subdivision, InternalFacesOfTheCube) {
  std::size_t three = 1, five = 1;
  for (std::size_t n = 1; n <= 4; ++n) {
    three *= 3;
    five *= 5;
    SubdividedComplex sd(gen::standard_cube(n));
    const FaceRef top{n, 0};
    std::size_t internal = 0;
    for (int k = 0; k <= sd.complex().top_dim(); ++k)
      for (std::size_t i = 0; i < sd.complex().count(std::size_t(k)); ++i)
        if (sd.cell(FaceRef{std::size_t(k), i}).high == top) ++internal;
    EXPECT_EQ(internal, three);
    EXPECT_EQ(sd.complex().face_total(), five);
  }
}

TEST(Subdivision, CellsArePairsWithTheRightDimension) {
  auto x = gen::torus_grid(3, 3);
  SubdividedComplex sd(x);
  std::size_t pairs = 0;
  for (int k = 0; k <= x.top_dim(); ++k)
    for (std::size_t i = 0; i < x.count(std::size_t(k)); ++i) pairs += faces(x, FaceRef{std::size_t(k), i}).size();
  EXPECT_EQ(sd.cell_count(), pairs);
  for (int k = 0; k <= sd.complex().top_dim(); ++k)
    for (std::size_t i = 0; i < sd.complex().count(std::size_t(k)); ++i) {
      const SdCell& c = sd.cell(FaceRef{std::size_t(k), i});
      EXPECT_EQ(c.high.dim - c.low.dim, std::size_t(k));
      EXPECT_EQ(sd.face_of(c.low, c.high), (FaceRef{std::size_t(k), i}));
    }
  EXPECT_EQ(code_of([&] { sd.face_of(FaceRef{2, 0}, FaceRef{0, 0}); }), ErrorCode::UnknownFace);
}

// The local model: along a coordinate free in G and bound to 0 in E, the cell
// runs from the center of (E, G bound to 0) to the center of (E freed).
TEST(Subdivision, CoordinateModel) {
  auto x = gen::standard_cube(1);
  SubdividedComplex sd(x);
  const FaceRef e{1, 0};
  const auto& names = sd.complex().vertex_names();
  for (const std::string v : {"v0", "v1"}) {
    const FaceRef vf = *x.find_by_names({v});
    const auto& pos = sd.complex().cube(sd.face_of(vf, e)).positions;
    ASSERT_EQ(pos.size(), 2u);
    const std::string lo = names[std::size_t(pos[0])], hi = names[std::size_t(pos[1])];
    if (v == "v0") {
      EXPECT_EQ(lo, "[v0]");
      EXPECT_EQ(hi, "[v0,v1]");
    } else {
      EXPECT_EQ(lo, "[v0,v1]");
      EXPECT_EQ(hi, "[v1]");
    }
  }
}
