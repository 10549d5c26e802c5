#pragma once

// Orientations and co-orientations for linear maps between finite-dimensional
// rational vector spaces.
//
// Every space carries a listed ordered basis.  An orientation is a sign
// relative to that basis, and a co-orientation of f: V -> M is a sign omega
// meaning the pair (omega * beta_V, beta_M) of listed-basis orientations.
// Fiber products live inside V (+) W, written in the coordinates of the
// listed bases of V and W (V coordinates first).

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "geocube/errors.hpp"
#include "geocube/exact_linalg.hpp"

namespace geocube {

// An ordered, linearly independent list of vectors in Q^ambient_dim, stored as
// the columns of `basis`.
struct Subspace {
  std::size_t ambient_dim = 0;
  RatMatrix basis;  // ambient_dim x dim

  std::size_t dim() const { return basis.cols(); }
  friend bool operator==(const Subspace&, const Subspace&) = default;
};

struct OrientedSubspace {
  Subspace space;
  int sign = 1;
};

struct LinearMap {
  Subspace domain;
  Subspace codomain;
  RatMatrix matrix;  // codomain.dim() x domain.dim(), in listed-basis coordinates
};

struct CoorientedMap {
  LinearMap map;
  int omega = 1;
};

struct QuillenData {
  std::size_t stabilization_dim = 0;  // a
  LinearMap embedding;                // V -> M (+) R^a, matrix E = [F; J]
  OrientedSubspace normal;            // complement of im E in R^{m+a}
};

inline int parity_sign(std::size_t k) { return (k % 2) ? -1 : 1; }

inline Subspace make_subspace(RatMatrix basis) {
  if (rank(basis) != basis.cols())
    throw Error(ErrorCode::MalformedSpec, "subspace basis vectors are dependent");
  Subspace s;
  s.ambient_dim = basis.rows();
  s.basis = std::move(basis);
  return s;
}

inline Subspace standard_space(std::size_t n) { return Subspace{n, RatMatrix::identity(n)}; }

inline Subspace direct_sum(const Subspace& a, const Subspace& b) {
  return Subspace{a.ambient_dim + b.ambient_dim, block_diag(a.basis, b.basis)};
}

inline LinearMap identity_map(const Subspace& s) { return LinearMap{s, s, RatMatrix::identity(s.dim())}; }

// Standard basis vectors appended greedily (lowest index first) until the
// columns of `cols` together with them span Q^n.  The greedy choice is read
// off the pivot columns of rref([cols | I]).
inline RatMatrix complete_basis(const RatMatrix& cols, std::size_t n) {
  RatMatrix current = cols.cols() ? cols : RatMatrix(n, 0);
  auto r = rref(hconcat(current, RatMatrix::identity(n)));
  RatMatrix added(n, 0);
  for (auto c : r.pivots) {
    if (c < current.cols()) continue;
    RatMatrix e(n, 1);
    e(c - current.cols(), 0) = 1;
    added = hconcat(added, e);
  }
  return added;
}

inline RatMatrix row_block(const RatMatrix& a, std::size_t first, std::size_t count) {
  RatMatrix out(count, a.cols());
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(first + i, j);
  return out;
}

inline void require_same_codomain(const LinearMap& f, const LinearMap& g) {
  if (!(f.codomain == g.codomain))
    throw Error(ErrorCode::CodomainMismatch, "maps do not share a codomain");
}

inline bool is_transverse(const LinearMap& f, const LinearMap& g) {
  require_same_codomain(f, g);
  return rank(hconcat(f.matrix, g.matrix)) == f.codomain.dim();
}

// [F, -G], the map (v, w) |-> f(v) - g(w).
inline RatMatrix difference_matrix(const LinearMap& f, const LinearMap& g) {
  return hconcat(f.matrix, -g.matrix);
}

inline Subspace fiber_subspace(const LinearMap& f, const LinearMap& g) {
  if (!is_transverse(f, g)) throw Error(ErrorCode::NotTransverse, "fiber product of non-transverse maps");
  const std::size_t n = f.domain.dim() + g.domain.dim();
  auto null = nullspace(difference_matrix(f, g));
  return Subspace{n, RatMatrix::from_columns(n, null)};
}

// A right inverse s of [F, -G]; any one will do for the orientation.
inline RatMatrix default_splitting(const LinearMap& f, const LinearMap& g) {
  auto s = solve(difference_matrix(f, g), RatMatrix::identity(f.codomain.dim()));
  if (!s) throw Error(ErrorCode::NotTransverse, "fiber product of non-transverse maps");
  return *s;
}

// Coordinates of P's basis in the listed basis of V and of W respectively.
inline RatMatrix first_part(const Subspace& p, std::size_t v) { return row_block(p.basis, 0, v); }
inline RatMatrix second_part(const Subspace& p, std::size_t v) {
  return row_block(p.basis, v, p.ambient_dim - v);
}

// P -> W and P -> M for P = V x_M W.
inline LinearMap fiber_to_second(const Subspace& p, const LinearMap& f, const LinearMap& g) {
  return LinearMap{p, g.domain, second_part(p, f.domain.dim())};
}
inline LinearMap fiber_to_base(const Subspace& p, const LinearMap& f, const LinearMap& /*g*/) {
  return LinearMap{p, f.codomain, f.matrix * first_part(p, f.domain.dim())};
}

// Fiber product orientation: the block map [P | s] : P (+) M -> V (+) W sends
// beta_P ^ beta_M to (-1)^{w m} beta_V ^ beta_W.
inline OrientedSubspace oriented_fiber_product(const LinearMap& f, int sigma_v, const LinearMap& g,
                                               int sigma_w, int sigma_m,
                                               const std::optional<RatMatrix>& splitting = std::nullopt) {
  Subspace p = fiber_subspace(f, g);
  RatMatrix s = splitting ? *splitting : default_splitting(f, g);
  const std::size_t m = f.codomain.dim(), w = g.domain.dim();
  const int d = det_sign(hconcat(p.basis, s));
  return OrientedSubspace{std::move(p), parity_sign(w * m) * sigma_v * sigma_w * sigma_m * d};
}

inline OrientedSubspace oriented_fiber_product(const LinearMap& f, const OrientedSubspace& v,
                                               const LinearMap& g, const OrientedSubspace& w,
                                               const OrientedSubspace& m) {
  return oriented_fiber_product(f, v.sign, g, w.sign, m.sign);
}

// Quillen factorization e(v) = (f(v), j(v)) into M (+) R^a.  By default j is the
// coordinate injection of V padded by `extra` zero rows, so a = dim V + extra.
// A caller-supplied j must make e injective (a = 0 is fine for injective f).
inline QuillenData quillen_factorization(const CoorientedMap& f, std::size_t extra = 0,
                                         const std::optional<RatMatrix>& j = std::nullopt) {
  const std::size_t v = f.map.domain.dim(), m = f.map.codomain.dim();
  RatMatrix jm = j ? *j : vconcat(RatMatrix::identity(v), RatMatrix(extra, v));
  if (jm.cols() != v) throw Error(ErrorCode::MalformedSpec, "Quillen padding has the wrong width");
  const std::size_t a = jm.rows();
  RatMatrix e = vconcat(f.map.matrix, jm);
  if (e.rows() == 0) e = RatMatrix(0, v);
  if (j && rank(e) != v) throw Error(ErrorCode::MalformedSpec, "Quillen embedding is not injective");
  RatMatrix n = complete_basis(e, m + a);
  // beta_V ^ beta_nu = beta_M ^ beta_E for the co-orientation (omega beta_V, beta_M).
  const int sigma_nu = f.omega * det_sign(hconcat(e, n));
  QuillenData q;
  q.stabilization_dim = a;
  q.embedding = LinearMap{f.map.domain, standard_space(m + a), e};
  q.normal = OrientedSubspace{Subspace{m + a, n}, sigma_nu};
  return q;
}

// Pullback co-orientation of P = V x_M W -> W: the normal of e(V) pulls back
// along g (+) id to a normal U of P inside W (+) R^a, and omega is read off
// from beta_P ^ beta_U = beta_W ^ beta_E.
inline CoorientedMap cooriented_pullback(const CoorientedMap& f, const LinearMap& g, std::size_t extra = 0,
                                         const std::optional<RatMatrix>& j = std::nullopt) {
  Subspace p = fiber_subspace(f.map, g);
  const std::size_t v = f.map.domain.dim(), w = g.domain.dim();
  RatMatrix jm = j ? *j : vconcat(RatMatrix::identity(v), RatMatrix(extra, v));
  const std::size_t a = jm.rows();
  RatMatrix e = vconcat(f.map.matrix, jm);
  if (e.rows() == 0) e = RatMatrix(0, v);
  if (j && rank(e) != v) throw Error(ErrorCode::MalformedSpec, "Quillen embedding is not injective");
  // P embedded in W (+) R^a by (v, w) |-> (w, j v).
  RatMatrix qcols = vconcat(second_part(p, v), jm * first_part(p, v));
  RatMatrix u = complete_basis(qcols, w + a);
  RatMatrix gu = block_diag(g.matrix, RatMatrix::identity(a)) * u;
  // U is oriented by matching (g (+) id)U with the Quillen normal modulo im E.
  // sigma_nu * det[E | N] equals omega by construction of the normal, so the
  // normal itself never has to be materialized here.
  const int sigma_u = f.omega * det_sign(hconcat(e, gu));
  const int omega = sigma_u * det_sign(hconcat(qcols, u));
  return CoorientedMap{fiber_to_second(p, f.map, g), omega};
}

inline CoorientedMap cooriented_fiber_product(const CoorientedMap& f, const CoorientedMap& g) {
  CoorientedMap pb = cooriented_pullback(f, g.map);
  return CoorientedMap{fiber_to_base(pb.map.domain, f.map, g.map), pb.omega * g.omega};
}

inline CoorientedMap exterior_product(const CoorientedMap& f, const CoorientedMap& g) {
  const std::size_t v = f.map.domain.dim(), m = f.map.codomain.dim(), w = g.map.domain.dim();
  LinearMap h{direct_sum(f.map.domain, g.map.domain), direct_sum(f.map.codomain, g.map.codomain),
              block_diag(f.map.matrix, g.map.matrix)};
  const std::size_t e = (m >= v ? m - v : v - m) * w;  // parity of (m - v) w
  return CoorientedMap{std::move(h), parity_sign(e) * f.omega * g.omega};
}

struct CapResult {
  OrientedSubspace space;  // P inside V (+) W
  LinearMap to_second;     // P -> W
  LinearMap to_base;       // P -> M
};

// The orientation beta_P with (beta_P, beta_W) equal to the pullback co-orientation.
inline CapResult cap_orientation(const CoorientedMap& f, const LinearMap& g, int sigma_w) {
  CoorientedMap pb = cooriented_pullback(f, g);
  const Subspace& p = pb.map.domain;
  return CapResult{OrientedSubspace{p, pb.omega * sigma_w}, pb.map, fiber_to_base(p, f.map, g)};
}

// The orientation of V induced by a co-orientation of V -> M and an orientation of M.
inline int induced_orientation(const CoorientedMap& f, int sigma_m) { return f.omega * sigma_m; }

// The co-orientation (beta_V, beta_M) built from orientations of V and M.
inline CoorientedMap coorient_from_orientations(const LinearMap& f, int sigma_v, int sigma_m) {
  return CoorientedMap{f, sigma_v * sigma_m};
}

// ---------------------------------------------------------------------------
// Comparing two realizations of "the same" space.
//
// `ident_a` and `ident_b` send the ambient coordinates of each side to a
// shared ambient space.  The result eps satisfies A = eps * B, or is empty
// when the two sides do not span the same subspace there.

inline std::optional<int> relative_orientation(const OrientedSubspace& a, const RatMatrix& ident_a,
                                               const OrientedSubspace& b, const RatMatrix& ident_b) {
  RatMatrix ia = ident_a * a.space.basis, ib = ident_b * b.space.basis;
  if (ia.cols() != ib.cols()) return std::nullopt;
  auto phi = solve(ia, ib);
  if (!phi || rank(ia) != ia.cols() || rank(ib) != ib.cols()) return std::nullopt;
  return a.sign * b.sign * det_sign(*phi);
}

inline std::optional<int> relative_orientation(const OrientedSubspace& a, const OrientedSubspace& b) {
  return relative_orientation(a, RatMatrix::identity(a.space.ambient_dim), b,
                              RatMatrix::identity(b.space.ambient_dim));
}

// Same comparison for co-oriented maps; the codomains are matched through
// `cod_a` / `cod_b` and the two maps must commute with the identifications.
inline std::optional<int> relative_coorientation(const CoorientedMap& a, const RatMatrix& dom_a,
                                                 const RatMatrix& cod_a, const CoorientedMap& b,
                                                 const RatMatrix& dom_b, const RatMatrix& cod_b) {
  RatMatrix da = dom_a * a.map.domain.basis, db = dom_b * b.map.domain.basis;
  RatMatrix ca = cod_a * a.map.codomain.basis, cb = cod_b * b.map.codomain.basis;
  if (da.cols() != db.cols() || ca.cols() != cb.cols()) return std::nullopt;
  auto phi = solve(da, db);
  auto psi = solve(ca, cb);
  if (!phi || !psi || rank(db) != db.cols() || rank(cb) != cb.cols()) return std::nullopt;
  // Both maps, written as ambient vectors, on the basis of B's domain.
  if (!(ca * a.map.matrix * *phi == cb * b.map.matrix)) return std::nullopt;
  return a.omega * b.omega * det_sign(*phi) * det_sign(*psi);
}

inline std::optional<int> relative_coorientation(const CoorientedMap& a, const RatMatrix& dom_a,
                                                 const CoorientedMap& b, const RatMatrix& dom_b) {
  return relative_coorientation(a, dom_a, RatMatrix::identity(a.map.codomain.ambient_dim), b, dom_b,
                                RatMatrix::identity(b.map.codomain.ambient_dim));
}

// Permutation matrix sending a concatenation of blocks (sizes[order[0]],
// sizes[order[1]], ...) back to the natural block order.  Used to compare
// realizations whose coordinates are listed in different factor orders.
inline RatMatrix block_permutation(const std::vector<std::size_t>& sizes, const std::vector<std::size_t>& order) {
  std::vector<std::size_t> offset(sizes.size(), 0);
  std::size_t total = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    offset[k] = total;
    total += sizes[k];
  }
  RatMatrix p(total, total);
  std::size_t col = 0;
  for (std::size_t blk : order)
    for (std::size_t i = 0; i < sizes[blk]; ++i) p(offset[blk] + i, col++) = 1;
  return p;
}

}  // namespace geocube
