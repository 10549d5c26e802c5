#pragma once

// Test-side checks shared by the unit tests and the acceptance runner.  Each
// returns a count of failures (0 is good) or the value it derived, so the
// callers decide how to report.

#include <map>
#include <optional>
#include <random>
#include <set>
#include <tuple>

#include "geocube/chains.hpp"
#include "geocube/corpus.hpp"
#include "geocube/orientation.hpp"
#include "geocube/products.hpp"

namespace oracle {

using namespace geocube;

// Named generators without the fuzzed ones.
inline std::vector<CubicalComplex> builtins() {
  std::vector<CubicalComplex> v;
  v.push_back(gen::point());
  v.push_back(gen::path(5));
  for (std::size_t k = 3; k <= 6; ++k) v.push_back(gen::circle(k));
  for (std::size_t n = 1; n <= 4; ++n) v.push_back(gen::standard_cube(n));
  for (std::size_t n = 2; n <= 4; ++n) v.push_back(gen::cube_boundary(n));
  for (std::size_t p = 3; p <= 5; ++p)
    for (std::size_t q = 3; q <= 5; ++q) v.push_back(gen::torus_grid(p, q));
  v.push_back(corpus_load("klein"));
  return v;
}

inline std::vector<CubicalComplex> fuzzed(std::size_t count) {
  std::vector<CubicalComplex> v;
  for (std::uint64_t s = 0; s < count; ++s) v.push_back(gen::fuzz(1000 + s));
  return v;
}

// d^2 on chains and on cochains, checked on every generator (elementary chain).
inline std::size_t square_failures(const CubicalComplex& x) {
  std::size_t bad = 0;
  for (int k = 2; k <= x.top_dim(); ++k) {
    const std::size_t kk = std::size_t(k);
    if (!(boundary_matrix(x, kk - 1) * boundary_matrix(x, kk)).is_zero()) ++bad;
  }
  for (int k = 0; k + 2 <= x.top_dim(); ++k) {
    const std::size_t kk = std::size_t(k);
    for (std::size_t i = 0; i < x.count(kk); ++i) {
      const Cochain dd = coboundary(x, coboundary(x, dual_cochain(x, FaceRef{kk, i})));
      if (!is_zero(dd.coeffs)) ++bad;
    }
  }
  return bad;
}

// Facet signs of the standard n-cube against (-1)^(i+j), both from the
// orientation lemma and from the boundary matrix.
inline std::size_t boundary_sign_failures(std::size_t n) {
  const CubicalComplex x = gen::standard_cube(n);
  const IntMatrix d = boundary_matrix(x, n);
  std::size_t bad = 0, seen = 0;
  for (std::size_t i = 1; i <= n; ++i)
    for (int j = 0; j < 2; ++j) {
      const int expected = (i + std::size_t(j)) % 2 ? -1 : 1;
      if (cube_face_boundary_sign(n, i, j) != expected) ++bad;
      const Mask bit = Mask(1) << (i - 1);
      const FaceRef f = x.subface(FaceRef{n, 0}, SubCube{((Mask(1) << n) - 1) & ~bit, j ? bit : 0});
      if (d(f.index, 0) != expected) ++bad;
      ++seen;
    }
  // nothing else in the column
  std::size_t nonzero = 0;
  for (std::size_t r = 0; r < d.rows(); ++r)
    if (d(r, 0) != 0) ++nonzero;
  if (nonzero != seen) ++bad;
  return bad;
}

// (Delta (x) 1) Delta = (1 (x) Delta) Delta on every face.
inline std::size_t coassociativity_failures(const CubicalComplex& x) {
  using Triple = std::tuple<FaceRef, FaceRef, FaceRef>;
  std::size_t bad = 0;
  for (int k = 0; k <= x.top_dim(); ++k)
    for (std::size_t i = 0; i < x.count(std::size_t(k)); ++i) {
      std::map<Triple, long> lhs, rhs;
      for (const auto& t : serre_diagonal(x, FaceRef{std::size_t(k), i})) {
        for (const auto& u : serre_diagonal(x, t.front)) lhs[{u.front, u.back, t.back}] += t.rho * u.rho;
        for (const auto& u : serre_diagonal(x, t.back)) rhs[{t.front, u.front, u.back}] += t.rho * u.rho;
      }
      std::erase_if(lhs, [](const auto& e) { return e.second == 0; });
      std::erase_if(rhs, [](const auto& e) { return e.second == 0; });
      if (lhs != rhs) ++bad;
    }
  return bad;
}

inline Cochain random_cochain(std::mt19937_64& eng, const CubicalComplex& x, std::size_t k) {
  Cochain a = zero_cochain(x, k);
  std::uniform_int_distribution<int> d(-3, 3);
  for (auto& v : a.coeffs) v = d(eng);
  return a;
}

inline Chain random_chain(std::mt19937_64& eng, const CubicalComplex& x, std::size_t k) {
  Cochain a = random_cochain(eng, x, k);
  return Chain{k, a.coeffs};
}

// The sign s(p) with d(a u b) = da u b + s(p) a u db, found by trying every
// pair of elementary cochains on the 3-cube.  nullopt if no single sign works.
inline std::optional<int> derive_leibniz_sign(std::size_t p) {
  const CubicalComplex x = gen::standard_cube(3);
  std::set<int> seen;
  for (std::size_t q = 0; p + q + 1 <= 3; ++q)
    for (std::size_t i = 0; i < x.count(p); ++i)
      for (std::size_t j = 0; j < x.count(q); ++j) {
        const Cochain a = dual_cochain(x, FaceRef{p, i}), b = dual_cochain(x, FaceRef{q, j});
        const Cochain lhs = add(coboundary(x, cup(x, a, b)), scale(cup(x, coboundary(x, a), b), -1));
        const Cochain r = cup(x, a, coboundary(x, b));
        if (is_zero(r.coeffs)) {
          if (!is_zero(lhs.coeffs)) return std::nullopt;
          continue;
        }
        if (lhs == r)
          seen.insert(1);
        else if (lhs == scale(r, -1))
          seen.insert(-1);
        else
          return std::nullopt;
      }
  if (seen.size() != 1) return std::nullopt;
  return *seen.begin();
}

// Random pairs (a, b) with deg a + deg b <= dim, checked against leibniz_sign.
inline std::size_t leibniz_failures(const CubicalComplex& x, std::uint64_t seed, std::size_t pairs) {
  std::mt19937_64 eng(seed);
  const std::size_t m = std::size_t(std::max(x.top_dim(), 0));
  std::size_t bad = 0;
  for (std::size_t t = 0; t < pairs; ++t) {
    const std::size_t p = eng() % (m + 1);
    const std::size_t q = eng() % (m - p + 1);
    const Cochain a = random_cochain(eng, x, p), b = random_cochain(eng, x, q);
    const Cochain lhs = coboundary(x, cup(x, a, b));
    const Cochain rhs =
        add(cup(x, coboundary(x, a), b), scale(cup(x, a, coboundary(x, b)), leibniz_sign(p)));
    if (!(lhs == rhs)) ++bad;
  }
  return bad;
}

// 1 u a = a = a u 1 and 1 n c = c on random (co)chains of every degree.
inline std::size_t unit_law_failures(const CubicalComplex& x, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  const Cochain one = unit_cochain(x);
  std::size_t bad = 0;
  for (int k = 0; k <= x.top_dim(); ++k) {
    const Cochain a = random_cochain(eng, x, std::size_t(k));
    if (!(cup(x, one, a) == a) || !(cup(x, a, one) == a)) ++bad;
    const Chain c = random_chain(eng, x, std::size_t(k));
    if (!(cap(x, one, c) == c)) ++bad;
  }
  return bad;
}

// The classical ring of the torus: the two degree 1 generators cup to a
// generator of H^2 (up to sign), and each squares to a coboundary.
struct TorusRing {
  bool ok = false;
  Int product_class;  // class of g1 u g2 in H^2 = Z
  bool squares_vanish = false;
};

inline TorusRing torus_ring(const CubicalComplex& t) {
  TorusRing r;
  const Presentation h1 = cohomology_presentation(t, 1), h2 = cohomology_presentation(t, 2);
  const auto g = h1.generators();
  if (g.size() != 2 || h2.summary().rank != 1 || !h2.summary().torsion.empty()) return r;
  const Cochain a{1, g[0]}, b{1, g[1]};
  r.product_class = h2.class_of(cup(t, a, b).coeffs).at(0);
  const Int ba = h2.class_of(cup(t, b, a).coeffs).at(0);
  r.squares_vanish = h2.is_boundary(cup(t, a, a).coeffs) && h2.is_boundary(cup(t, b, b).coeffs);
  r.ok = abs(r.product_class) == 1 && ba == -r.product_class && r.squares_vanish;
  return r;
}

// The two linear-algebra examples, as the sign carried by the answer.
// Planes z = 0 and x = 0 in R^3: +1 when the y-axis comes out oriented by +e_y.
inline int planes_in_r3_sign() {
  const LinearMap f{standard_space(2), standard_space(3), RatMatrix{{1, 0}, {0, 1}, {0, 0}}};
  const LinearMap g{standard_space(2), standard_space(3), RatMatrix{{0, 0}, {1, 0}, {0, 1}}};
  const auto p = oriented_fiber_product(f, 1, g, 1, 1);
  if (p.space.dim() != 1) return 0;
  const RatMatrix image = f.matrix * first_part(p.space, 2);
  if (image(0, 0) != 0 || image(2, 0) != 0 || image(1, 0) == 0) return 0;
  return p.sign * (image(1, 0) > 0 ? 1 : -1);
}

// x- and y-axes in R^2: the sign of the intersection point.
inline int axes_in_r2_sign() {
  const LinearMap f{standard_space(1), standard_space(2), RatMatrix{{1}, {0}}};
  const LinearMap g{standard_space(1), standard_space(2), RatMatrix{{0}, {1}}};
  const auto p = oriented_fiber_product(f, 1, g, 1, 1);
  return p.space.dim() == 0 ? p.sign : 0;
}

inline bool same_homology(const CubicalComplex& a, const CubicalComplex& b) {
  return homology_all(a) == homology_all(b);
}

inline std::vector<int> betti(const std::vector<GroupSummary>& h) {
  std::vector<int> b;
  for (const auto& g : h) b.push_back(int(g.rank));
  return b;
}

}  // namespace oracle
