#pragma once

// Randomized verification of the sign identities for fiber products,
// pullbacks and exterior products of transverse linear maps.
//
// Each (property, instance) pair draws its data from its own generator seeded
// by (seed, property, instance), so reports do not depend on evaluation order.

#include <cstdint>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "geocube/orientation.hpp"

namespace geocube {

struct PropertyTally {
  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
};

struct SignSuiteReport {
  std::uint64_t seed = 0;
  std::size_t instances = 0;
  std::size_t max_dim = 0;
  std::vector<PropertyTally> properties;  // empty when instances == 0

  bool all_passed() const {
    for (const auto& p : properties)
      if (p.failed) return false;
    return true;
  }

  std::string format() const {
    std::ostringstream os;
    os << "sign-suite seed=" << seed << " instances=" << instances << " max-dim=" << max_dim << "\n";
    if (properties.empty()) {
      os << "no instances\n";
      return os.str();
    }
    os << std::left << std::setw(34) << "property" << std::right << std::setw(8) << "pass" << std::setw(8)
       << "fail" << "\n";
    for (const auto& p : properties)
      os << std::left << std::setw(34) << p.name << std::right << std::setw(8) << p.passed << std::setw(8)
         << p.failed << "\n";
    os << "all properties: " << (all_passed() ? "PASS" : "FAIL") << "\n";
    return os.str();
  }
};

namespace suite {

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t property, std::uint64_t instance) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(property),
                      std::uint32_t(instance), std::uint32_t(instance >> 32)};
    eng_.seed(seq);
  }
  // Entries uniform in [-3, 3].  Plain modular reduction keeps the stream
  // identical across standard libraries.
  long entry() { return long(eng_() % 7) - 3; }
  std::size_t upto(std::size_t n) { return std::size_t(eng_() % (n + 1)); }
  int sign() { return (eng_() & 1) ? -1 : 1; }
  RatMatrix matrix(std::size_t r, std::size_t c) {
    RatMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = entry();
    return m;
  }

 private:
  std::mt19937_64 eng_;
};

inline LinearMap lin(RatMatrix f) {
  const std::size_t r = f.rows(), c = f.cols();
  return LinearMap{standard_space(c), standard_space(r), std::move(f)};
}

inline RatMatrix eye(std::size_t n) { return RatMatrix::identity(n); }

// [I_keep | 0] : Q^{keep + drop} -> Q^keep, or the analogous projection that
// keeps a block in the middle.
inline RatMatrix keep_rows(std::size_t total, std::size_t first, std::size_t count) {
  RatMatrix p(count, total);
  for (std::size_t i = 0; i < count; ++i) p(i, first + i) = 1;
  return p;
}

inline int expect(std::size_t k) { return parity_sign(k); }
inline std::size_t diff(std::size_t a, std::size_t b) { return a >= b ? a - b : b - a; }

struct Pair {
  CoorientedMap f, g;
  int sv, sw, sm;
};

// f: V -> M and g: W -> M transverse, plus random orientations and co-orientations.
inline Pair draw_pair(Rng& r, std::size_t d) {
  for (;;) {
    std::size_t m = r.upto(d), v = r.upto(d), w = r.upto(d);
    if (v + w < m) continue;
    LinearMap f = lin(r.matrix(m, v)), g = lin(r.matrix(m, w));
    if (!is_transverse(f, g)) continue;
    Pair p{CoorientedMap{f, r.sign()}, CoorientedMap{g, r.sign()}, r.sign(), r.sign(), r.sign()};
    return p;
  }
}

struct Triple {
  CoorientedMap f, g, h;
  int sv, sw, sz, sm;
};

// Three maps into one M with every partial fiber product transverse.
inline Triple draw_triple(Rng& r, std::size_t d) {
  for (;;) {
    std::size_t m = r.upto(d), v = r.upto(d), w = r.upto(d), z = r.upto(d);
    if (v + w + z < 2 * m || v + w < m || w + z < m) continue;
    LinearMap f = lin(r.matrix(m, v)), g = lin(r.matrix(m, w)), h = lin(r.matrix(m, z));
    if (!is_transverse(f, g) || !is_transverse(g, h)) continue;
    Subspace pvw = fiber_subspace(f, g), pwz = fiber_subspace(g, h);
    if (!is_transverse(fiber_to_base(pvw, f, g), h)) continue;
    if (!is_transverse(f, fiber_to_base(pwz, g, h))) continue;
    return Triple{CoorientedMap{f, r.sign()}, CoorientedMap{g, r.sign()}, CoorientedMap{h, r.sign()},
                  r.sign(), r.sign(), r.sign(), r.sign()};
  }
}

// Injective map V -> M with v <= m.
inline LinearMap draw_injective(Rng& r, std::size_t v, std::size_t m) {
  for (;;) {
    RatMatrix f = r.matrix(m, v);
    if (rank(f) == v) return lin(std::move(f));
  }
}

inline bool ok(const std::optional<int>& eps, int want) { return eps && *eps == want; }

// --- the properties -------------------------------------------------------

inline bool splitting_independence(Rng& r, std::size_t d) {
  Pair p = draw_pair(r, d);
  Subspace fib = fiber_subspace(p.f.map, p.g.map);
  RatMatrix s0 = default_splitting(p.f.map, p.g.map);
  RatMatrix s1 = s0;
  if (fib.dim()) {
    RatMatrix shift = fib.basis * r.matrix(fib.dim(), s0.cols());
    for (std::size_t i = 0; i < s1.rows(); ++i)
      for (std::size_t j = 0; j < s1.cols(); ++j) s1(i, j) += shift(i, j);
  }
  auto a = oriented_fiber_product(p.f.map, p.sv, p.g.map, p.sw, p.sm, s0);
  auto b = oriented_fiber_product(p.f.map, p.sv, p.g.map, p.sw, p.sm, s1);
  return ok(relative_orientation(a, b), 1);
}

inline bool stabilization_independence(Rng& r, std::size_t d) {
  Pair p = draw_pair(r, d);
  const std::size_t v = p.f.map.domain.dim();
  auto base = cooriented_pullback(p.f, p.g.map, 0);
  auto one = cooriented_pullback(p.f, p.g.map, 1);
  auto two = cooriented_pullback(p.f, p.g.map, 2);
  // An unrelated injective padding j of random height a >= v.
  RatMatrix j;
  for (;;) {
    j = r.matrix(v + r.upto(2), v);
    if (rank(j) == v) break;
  }
  auto other = cooriented_pullback(p.f, p.g.map, 0, j);
  return base.omega == one.omega && base.omega == two.omega && base.omega == other.omega;
}

inline bool oriented_graded_commutativity(Rng& r, std::size_t d) {
  Pair p = draw_pair(r, d);
  const std::size_t m = p.f.map.codomain.dim(), v = p.f.map.domain.dim(), w = p.g.map.domain.dim();
  auto vw = oriented_fiber_product(p.f.map, p.sv, p.g.map, p.sw, p.sm);
  auto wv = oriented_fiber_product(p.g.map, p.sw, p.f.map, p.sv, p.sm);
  return ok(relative_orientation(wv, block_permutation({v, w}, {1, 0}), vw, eye(v + w)),
            expect(diff(m, v) * diff(m, w)));
}

inline bool cooriented_graded_commutativity(Rng& r, std::size_t d) {
  Pair p = draw_pair(r, d);
  const std::size_t m = p.f.map.codomain.dim(), v = p.f.map.domain.dim(), w = p.g.map.domain.dim();
  auto vw = cooriented_fiber_product(p.f, p.g);
  auto wv = cooriented_fiber_product(p.g, p.f);
  return ok(relative_coorientation(wv, block_permutation({v, w}, {1, 0}), vw, eye(v + w)),
            expect(diff(m, v) * diff(m, w)));
}

inline bool oriented_associativity(Rng& r, std::size_t d) {
  Triple t = draw_triple(r, d);
  const LinearMap &f = t.f.map, &g = t.g.map, &h = t.h.map;
  const std::size_t v = f.domain.dim(), z = h.domain.dim();
  auto vw = oriented_fiber_product(f, t.sv, g, t.sw, t.sm);
  auto left = oriented_fiber_product(fiber_to_base(vw.space, f, g), vw.sign, h, t.sz, t.sm);
  auto wz = oriented_fiber_product(g, t.sw, h, t.sz, t.sm);
  auto right = oriented_fiber_product(f, t.sv, fiber_to_base(wz.space, g, h), wz.sign, t.sm);
  return ok(relative_orientation(left, block_diag(vw.space.basis, eye(z)), right,
                                 block_diag(eye(v), wz.space.basis)),
            1);
}

inline bool cooriented_associativity(Rng& r, std::size_t d) {
  Triple t = draw_triple(r, d);
  const std::size_t v = t.f.map.domain.dim(), z = t.h.map.domain.dim();
  auto vw = cooriented_fiber_product(t.f, t.g);
  auto left = cooriented_fiber_product(vw, t.h);
  auto wz = cooriented_fiber_product(t.g, t.h);
  auto right = cooriented_fiber_product(t.f, wz);
  return ok(relative_coorientation(left, block_diag(vw.map.domain.basis, eye(z)), right,
                                   block_diag(eye(v), wz.map.domain.basis)),
            1);
}

inline bool cross_to_cup(Rng& r, std::size_t d) {
  Pair p = draw_pair(r, d);
  const std::size_t m = p.f.map.codomain.dim(), v = p.f.map.domain.dim(), w = p.g.map.domain.dim();
  auto cross = exterior_product(p.f, p.g);
  LinearMap diag{standard_space(m), cross.map.codomain, vconcat(eye(m), eye(m))};
  auto pulled = cooriented_pullback(cross, diag);           // inside (V (+) W) (+) M, maps to M
  auto cup = cooriented_fiber_product(p.f, p.g);            // inside V (+) W, maps to M
  return ok(relative_coorientation(pulled, keep_rows(v + w + m, 0, v + w), cup, eye(v + w)), 1);
}

inline bool criss_cross(Rng& r, std::size_t d) {
  Pair a = draw_pair(r, d), b = draw_pair(r, d);
  const std::size_t v = a.f.map.domain.dim(), w = a.g.map.domain.dim(), m = a.f.map.codomain.dim();
  const std::size_t x = b.f.map.domain.dim(), y = b.g.map.domain.dim(), n = b.f.map.codomain.dim();
  // (V x X) x_{M x N} (W x Y), coordinates ordered V, X, W, Y.
  auto left = cooriented_fiber_product(exterior_product(a.f, b.f), exterior_product(a.g, b.g));
  // (V x_M W) x (X x_N Y), coordinates ordered (V, W) then (X, Y).
  auto vw = cooriented_fiber_product(a.f, a.g);
  auto xy = cooriented_fiber_product(b.f, b.g);
  auto right = exterior_product(vw, xy);
  // exterior_product already writes the right side in (V, W, X, Y) coordinates.
  return ok(relative_coorientation(left, block_permutation({v, w, x, y}, {0, 2, 1, 3}), right,
                                   eye(v + w + x + y)),
            expect(diff(m, w) * diff(n, x)));
}

inline bool cap_cross(Rng& r, std::size_t d) {
  Pair a = draw_pair(r, d), b = draw_pair(r, d);
  // f: V -> M and g: X -> N co-oriented; h: W -> M and k: Y -> N oriented.
  const std::size_t v = a.f.map.domain.dim(), w = a.g.map.domain.dim(), m = a.f.map.codomain.dim();
  const std::size_t x = b.f.map.domain.dim(), y = b.g.map.domain.dim(), n = b.f.map.codomain.dim();
  LinearMap hk{direct_sum(a.g.map.domain, b.g.map.domain), direct_sum(a.g.map.codomain, b.g.map.codomain),
               block_diag(a.g.map.matrix, b.g.map.matrix)};
  auto left = cap_orientation(exterior_product(a.f, b.f), hk, a.sw * b.sw);
  auto p = cap_orientation(a.f, a.g.map, a.sw);
  auto q = cap_orientation(b.f, b.g.map, b.sw);
  OrientedSubspace right{direct_sum(p.space.space, q.space.space), p.space.sign * q.space.sign};
  return ok(relative_orientation(left.space, block_permutation({v, w, x, y}, {0, 2, 1, 3}), right,
                                 eye(v + w + x + y)),
            expect((x + y - n) * diff(m, v)));
}

inline bool mixed_associativity(Rng& r, std::size_t d) {
  Triple t = draw_triple(r, d);
  const std::size_t v = t.f.map.domain.dim(), z = t.h.map.domain.dim();
  auto vw = cooriented_fiber_product(t.f, t.g);
  auto left = cap_orientation(vw, t.h.map, t.sz);
  auto wz = cap_orientation(t.g, t.h.map, t.sz);
  auto right = cap_orientation(t.f, wz.to_base, wz.space.sign);
  return ok(relative_orientation(left.space, block_diag(vw.map.domain.basis, eye(z)), right.space,
                                 block_diag(eye(v), wz.space.space.basis)),
            1);
}

inline bool oriented_vs_cooriented(Rng& r, std::size_t d) {
  Pair p = draw_pair(r, d);
  const std::size_t m = p.f.map.codomain.dim(), v = p.f.map.domain.dim(), w = p.g.map.domain.dim();
  auto o = oriented_fiber_product(p.f.map, p.sv, p.g.map, p.sw, p.sm);
  auto c = cooriented_fiber_product(coorient_from_orientations(p.f.map, p.sv, p.sm),
                                    coorient_from_orientations(p.g.map, p.sw, p.sm));
  OrientedSubspace induced{c.map.domain, induced_orientation(c, p.sm)};
  return ok(relative_orientation(o, induced), expect(diff(m, v) * diff(m, w)));
}

// For embeddings co-oriented by oriented normals, the fiber product is
// co-oriented by (beta_P, beta_P ^ beta_nuV ^ beta_nuW).
inline bool normal_pullback(Rng& r, std::size_t d) {
  for (;;) {
    std::size_t m = r.upto(d), v = r.upto(m), w = r.upto(m);
    if (v + w < m) continue;
    LinearMap f = draw_injective(r, v, m), g = draw_injective(r, w, m);
    if (!is_transverse(f, g)) continue;
    RatMatrix nv = r.matrix(m, m - v), nw = r.matrix(m, m - w);
    if (det_sign(hconcat(f.matrix, nv)) == 0 || det_sign(hconcat(g.matrix, nw)) == 0) continue;
    const int snv = r.sign(), snw = r.sign();
    // With a = 0: beta_V ^ beta_nu = beta_M fixes omega.
    CoorientedMap cf{f, snv * det_sign(hconcat(f.matrix, nv))};
    CoorientedMap cg{g, snw * det_sign(hconcat(g.matrix, nw))};
    auto fp = cooriented_fiber_product(cf, cg);
    // Representatives of nu V inside W and of nu W inside V.
    RatMatrix gf = hconcat(g.matrix, f.matrix), fg = hconcat(f.matrix, g.matrix);
    RatMatrix nv_in_w = g.matrix * row_block(*solve(gf, nv), 0, w);
    RatMatrix nw_in_v = f.matrix * row_block(*solve(fg, nw), 0, v);
    RatMatrix pim = fp.map.matrix;  // P -> M in M coordinates
    const int want = snv * snw * det_sign(hconcat(hconcat(pim, nv_in_w), nw_in_v));
    return fp.omega == want;
  }
}

inline bool functoriality(Rng& r, std::size_t d) {
  for (;;) {
    Pair p = draw_pair(r, d);
    const std::size_t w = p.g.map.domain.dim(), v = p.f.map.domain.dim();
    std::size_t z = r.upto(d);
    LinearMap h = lin(r.matrix(w, z));
    LinearMap gh{h.domain, p.g.map.codomain, p.g.map.matrix * h.matrix};
    if (!is_transverse(p.f.map, gh)) continue;
    auto gv = cooriented_pullback(p.f, p.g.map);  // P -> W
    if (!is_transverse(gv.map, h)) continue;
    auto left = cooriented_pullback(p.f, gh);       // inside V (+) Z
    auto right = cooriented_pullback(gv, h);        // inside P (+) Z
    RatMatrix to_vz = block_diag(row_block(gv.map.domain.basis, 0, v), eye(z));
    return ok(relative_coorientation(left, eye(v + z), right, to_vz), 1);
  }
}

// Replacing a listed basis vector by its negative while flipping the stored
// sign describes the same object, so every construction must agree.
inline bool equivalence_class(Rng& r, std::size_t d) {
  Pair p = draw_pair(r, d);
  const std::size_t v = p.f.map.domain.dim(), w = p.g.map.domain.dim(), m = p.f.map.codomain.dim();
  Pair q = p;
  RatMatrix dom = eye(v + w), cod = eye(m);
  if (v) {
    const std::size_t j = r.upto(v - 1);
    for (std::size_t i = 0; i < m; ++i) q.f.map.matrix(i, j) = -q.f.map.matrix(i, j);
    q.f.omega = -q.f.omega;
    q.sv = -q.sv;
    dom(j, j) = -1;
  }
  if (m) {
    const std::size_t i = r.upto(m - 1);
    for (std::size_t j = 0; j < v; ++j) q.f.map.matrix(i, j) = -q.f.map.matrix(i, j);
    for (std::size_t j = 0; j < w; ++j) q.g.map.matrix(i, j) = -q.g.map.matrix(i, j);
    q.f.omega = -q.f.omega;
    q.g.omega = -q.g.omega;
    q.sm = -q.sm;
    cod(i, i) = -1;
  }
  auto o1 = oriented_fiber_product(p.f.map, p.sv, p.g.map, p.sw, p.sm);
  auto o2 = oriented_fiber_product(q.f.map, q.sv, q.g.map, q.sw, q.sm);
  auto c1 = cooriented_fiber_product(p.f, p.g);
  auto c2 = cooriented_fiber_product(q.f, q.g);
  auto k1 = cap_orientation(p.f, p.g.map, p.sw);
  auto k2 = cap_orientation(q.f, q.g.map, q.sw);
  return ok(relative_orientation(o2, dom, o1, eye(v + w)), 1) &&
         ok(relative_coorientation(c2, dom, cod, c1, eye(v + w), eye(m)), 1) &&
         ok(relative_orientation(k2.space, dom, k1.space, eye(v + w)), 1);
}

inline bool exterior_commutativity(Rng& r, std::size_t d) {
  Pair a = draw_pair(r, d), b = draw_pair(r, d);
  const CoorientedMap &f = a.f, &g = b.f;
  const std::size_t v = f.map.domain.dim(), m = f.map.codomain.dim();
  const std::size_t w = g.map.domain.dim(), n = g.map.codomain.dim();
  auto vw = exterior_product(f, g);
  auto wv = exterior_product(g, f);
  return ok(relative_coorientation(wv, block_permutation({v, w}, {1, 0}), block_permutation({m, n}, {1, 0}),
                                   vw, eye(v + w), eye(m + n)),
            expect(diff(m, v) * diff(n, w)));
}

// pi_1^* V = V x N, and V x (point) = V.
inline bool projection_pullback(Rng& r, std::size_t d) {
  Pair p = draw_pair(r, d);
  const CoorientedMap& f = p.f;
  const std::size_t v = f.map.domain.dim(), m = f.map.codomain.dim(), n = r.upto(d);
  CoorientedMap idn{identity_map(standard_space(n)), 1};
  LinearMap pi1{standard_space(m + n), standard_space(m), keep_rows(m + n, 0, m)};
  auto pulled = cooriented_pullback(f, pi1);  // inside V (+) M (+) N
  auto prod = exterior_product(f, idn);       // inside V (+) N
  RatMatrix drop_m = vconcat(keep_rows(v + m + n, 0, v), keep_rows(v + m + n, v + m, n));
  bool first = ok(relative_coorientation(pulled, drop_m, prod, eye(v + n)), 1);
  CoorientedMap pt{identity_map(standard_space(0)), 1};
  auto unit = exterior_product(f, pt);
  bool second = ok(relative_coorientation(unit, eye(v), f, eye(v)), 1);
  return first && second;
}

struct Property {
  const char* name;
  bool (*check)(Rng&, std::size_t);
};

inline const std::vector<Property>& properties() {
  static const std::vector<Property> list = {
      {"splitting-independence", splitting_independence},
      {"stabilization-independence", stabilization_independence},
      {"oriented-graded-commutativity", oriented_graded_commutativity},
      {"cooriented-graded-commutativity", cooriented_graded_commutativity},
      {"oriented-associativity", oriented_associativity},
      {"cooriented-associativity", cooriented_associativity},
      {"cross-to-cup", cross_to_cup},
      {"criss-cross", criss_cross},
      {"cap-cross", cap_cross},
      {"mixed-associativity", mixed_associativity},
      {"oriented-vs-cooriented", oriented_vs_cooriented},
      {"normal-pullback", normal_pullback},
      {"pullback-functoriality", functoriality},
      {"equivalence-class", equivalence_class},
      {"exterior-commutativity", exterior_commutativity},
      {"projection-pullback", projection_pullback},
  };
  return list;
}

}  // namespace suite

inline SignSuiteReport run_sign_suite(std::uint64_t seed, std::size_t instances, std::size_t max_dim) {
  SignSuiteReport rep;
  rep.seed = seed;
  rep.instances = instances;
  rep.max_dim = max_dim;
  if (instances == 0) return rep;
  const auto& props = suite::properties();
  for (std::size_t k = 0; k < props.size(); ++k) {
    PropertyTally t{props[k].name};
    for (std::size_t i = 0; i < instances; ++i) {
      suite::Rng rng(seed, k, i);
      bool pass = false;
      try {
        pass = props[k].check(rng, max_dim);
      } catch (const Error&) {
        pass = false;
      }
      (pass ? t.passed : t.failed)++;
    }
    rep.properties.push_back(std::move(t));
  }
  return rep;
}

}  // namespace geocube
