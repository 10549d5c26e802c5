#pragma once

// Cellular chains and cochains of a cubical complex, with integer and mod 2
// homology computed from Smith normal forms.

#include <deque>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "geocube/cubical.hpp"
#include "geocube/exact_linalg.hpp"

namespace geocube {

enum class Coeff { Z, Z2 };

// Coefficients are indexed like cubes(degree) of the owning complex.
struct Chain {
  std::size_t degree = 0;
  std::vector<Int> coeffs;
  friend bool operator==(const Chain&, const Chain&) = default;
};

struct Cochain {
  std::size_t degree = 0;
  std::vector<Int> coeffs;
  friend bool operator==(const Cochain&, const Cochain&) = default;
};

inline Chain zero_chain(const CubicalComplex& x, std::size_t k) { return Chain{k, std::vector<Int>(x.count(k))}; }
inline Cochain zero_cochain(const CubicalComplex& x, std::size_t k) {
  return Cochain{k, std::vector<Int>(x.count(k))};
}

inline Chain elementary_chain(const CubicalComplex& x, const FaceRef& f, Int c = 1) {
  Chain out = zero_chain(x, f.dim);
  out.coeffs.at(f.index) = c;
  return out;
}
inline Cochain dual_cochain(const CubicalComplex& x, const FaceRef& f, Int c = 1) {
  Cochain out = zero_cochain(x, f.dim);
  out.coeffs.at(f.index) = c;
  return out;
}

inline bool is_zero(const std::vector<Int>& v) {
  for (const auto& a : v)
    if (a != 0) return false;
  return true;
}

inline Int mod2(const Int& a) {
  Int r = a % 2;
  return r < 0 ? Int(r + 2) : r;
}
template <class C>
C reduce_mod2(C c) {
  for (auto& a : c.coeffs) a = mod2(a);
  return c;
}

template <class C>
C add(const C& a, const C& b) {
  if (a.degree != b.degree || a.coeffs.size() != b.coeffs.size())
    throw Error(ErrorCode::DegreeMismatch, "cannot add elements of different degrees");
  C out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
  return out;
}
template <class C>
C scale(const C& a, const Int& s) {
  C out = a;
  for (auto& c : out.coeffs) c *= s;
  return out;
}

// Facet delta_i^j of a k-cube (coordinate i is 1-based) and its coefficient
// (-1)^(i+j) in the boundary.
struct Facet {
  FaceRef face;
  std::size_t coord;
  int side;
  int sign;
};

inline std::vector<Facet> facets(const CubicalComplex& x, const FaceRef& f) {
  std::vector<Facet> out;
  const Mask full = (Mask(1) << f.dim) - 1;
  for (std::size_t i = 1; i <= f.dim; ++i)
    for (int j = 0; j < 2; ++j) {
      const Mask bit = Mask(1) << (i - 1);
      FaceRef g = x.subface(f, SubCube{full & ~bit, j ? bit : 0});
      out.push_back(Facet{g, i, j, ((i + std::size_t(j)) % 2) ? -1 : 1});
    }
  return out;
}

// Orientation of the facet delta_i^j of the standard n-cube as a boundary
// piece: outward normal first, then the remaining standard basis vectors.
inline int cube_face_boundary_sign(std::size_t n, std::size_t i, int j) {
  IntMatrix m(n, n);
  m(i - 1, 0) = j ? 1 : -1;
  for (std::size_t k = 0, col = 1; k < n; ++k)
    if (k != i - 1) m(k, col++) = 1;
  return det_sign(m);
}

// d_k : C_k -> C_{k-1}; rows index (k-1)-faces, columns k-faces.
inline IntMatrix boundary_matrix(const CubicalComplex& x, std::size_t k) {
  IntMatrix d(k == 0 ? 0 : x.count(k - 1), x.count(k));
  if (k == 0) return d;
  for (std::size_t c = 0; c < x.count(k); ++c)
    for (const auto& f : facets(x, FaceRef{k, c})) d(f.face.index, c) += f.sign;
  return d;
}

// delta^k : C^k -> C^{k+1}, the transpose of d_{k+1}.
inline IntMatrix coboundary_matrix(const CubicalComplex& x, std::size_t k) {
  return boundary_matrix(x, k + 1).transpose();
}

inline Chain boundary(const CubicalComplex& x, const Chain& c) {
  if (c.coeffs.size() != x.count(c.degree)) throw Error(ErrorCode::ComplexMismatch, "chain does not fit complex");
  if (c.degree == 0) return Chain{0, std::vector<Int>(0)};
  return Chain{c.degree - 1, mat_vec(boundary_matrix(x, c.degree), c.coeffs)};
}

inline Cochain coboundary(const CubicalComplex& x, const Cochain& a) {
  if (a.coeffs.size() != x.count(a.degree)) throw Error(ErrorCode::ComplexMismatch, "cochain does not fit complex");
  return Cochain{a.degree + 1, mat_vec(coboundary_matrix(x, a.degree), a.coeffs)};
}

inline bool is_cycle(const CubicalComplex& x, const Chain& c, Coeff r = Coeff::Z) {
  if (c.degree == 0) return true;
  auto b = boundary(x, c);
  return is_zero(r == Coeff::Z ? b.coeffs : reduce_mod2(b).coeffs);
}
inline bool is_cocycle(const CubicalComplex& x, const Cochain& a, Coeff r = Coeff::Z) {
  auto d = coboundary(x, a);
  return is_zero(r == Coeff::Z ? d.coeffs : reduce_mod2(d).coeffs);
}

// Pairing of a cochain and a chain of the same degree.
inline Int evaluate(const Cochain& a, const Chain& c) {
  if (a.degree != c.degree || a.coeffs.size() != c.coeffs.size())
    throw Error(ErrorCode::DegreeMismatch, "cochain and chain degrees differ");
  Int s = 0;
  for (std::size_t i = 0; i < c.coeffs.size(); ++i) s += a.coeffs[i] * c.coeffs[i];
  return s;
}

// Sum of 0-chain coefficients.
inline Int augmentation(const Chain& c) {
  if (c.degree != 0) throw Error(ErrorCode::WrongDegree, "augmentation is defined on 0-chains");
  Int s = 0;
  for (const auto& a : c.coeffs) s += a;
  return s;
}

inline long euler_characteristic(const CubicalComplex& x) {
  long chi = 0;
  for (int k = 0; k <= x.top_dim(); ++k) chi += (k % 2 ? -1 : 1) * long(x.count(std::size_t(k)));
  return chi;
}

// ---------------------------------------------------------------------------
// Homology groups

struct GroupSummary {
  std::size_t rank = 0;
  std::vector<Int> torsion;  // invariant factors > 1, each dividing the next
  Coeff coeff = Coeff::Z;

  friend bool operator==(const GroupSummary&, const GroupSummary&) = default;
  bool trivial() const { return rank == 0 && torsion.empty(); }

  std::string format() const {
    std::vector<std::string> parts;
    const std::string unit = coeff == Coeff::Z ? "Z" : "Z/2";
    if (rank == 1) parts.push_back(unit);
    if (rank > 1) parts.push_back((coeff == Coeff::Z ? "Z" : "(Z/2)") + std::string("^") + std::to_string(rank));
    for (const auto& t : torsion) parts.push_back("Z/" + t.get_str());
    if (parts.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " ⊕ " : "") + parts[i];
    return s;
  }
};

// Subquotient ker(out) / im(in) of Z^n, with an adapted basis of the cycles.
//
// The cycle lattice is spanned by the columns of `basis`.  Its first `rel.size()`
// columns b_j satisfy: rel[j] * b_j spans the boundaries; the remaining columns
// are free generators.  `coords` sends a cycle to its coefficients in `basis`.
class Presentation {
 public:
  Presentation() = default;
  Presentation(const IntMatrix& out, const IntMatrix& in, std::size_t n) : n_(n), out_(out) {
    // Cycles: trailing columns of the right transform of out.
    IntMatrix k_basis, k_coords;
    if (out.rows() == 0 || out.cols() == 0) {
      k_basis = IntMatrix::identity(n);
      k_coords = IntMatrix::identity(n);
    } else {
      auto d = snf_decompose(out, true);
      const std::size_t r = d.rank();
      const std::size_t z = n - r;
      k_basis = IntMatrix(n, z);
      k_coords = IntMatrix(z, n);
      for (std::size_t j = 0; j < z; ++j)
        for (std::size_t i = 0; i < n; ++i) {
          k_basis(i, j) = (*d.right)(i, r + j);
          k_coords(j, i) = (*d.right_inv)(r + j, i);
        }
    }
    const std::size_t z = k_basis.cols();

    // Boundaries in cycle coordinates, then adapt the cycle basis to them.
    IntMatrix a = in.cols() == 0 || z == 0 ? IntMatrix(z, 0) : k_coords * in;
    IntMatrix l = IntMatrix::identity(z), l_inv = IntMatrix::identity(z);
    if (a.cols() > 0 && z > 0) {
      auto d = snf_decompose(a, true);
      rel_ = d.factors;
      l = *d.left;
      l_inv = *d.left_inv;
    }
    basis_ = z == 0 ? IntMatrix(n, 0) : k_basis * l_inv;
    coords_ = z == 0 ? IntMatrix(0, n) : l * k_coords;

    summary_.rank = z - rel_.size();
    for (const auto& t : rel_)
      if (t > 1) summary_.torsion.push_back(t);
  }

  const GroupSummary& summary() const { return summary_; }
  std::size_t chain_rank() const { return n_; }

  // Free generators first, then torsion generators in the order of summary().torsion.
  std::vector<std::vector<Int>> generators() const {
    std::vector<std::vector<Int>> g;
    for (std::size_t j = rel_.size(); j < basis_.cols(); ++j) g.push_back(basis_.column(j));
    for (std::size_t j = 0; j < rel_.size(); ++j)
      if (rel_[j] > 1) g.push_back(basis_.column(j));
    return g;
  }
  std::size_t generator_count() const { return summary_.rank + summary_.torsion.size(); }

  bool is_cycle(const std::vector<Int>& v) const {
    if (v.size() != n_) return false;
    return out_.rows() == 0 || is_zero(mat_vec(out_, v));
  }

  // Class of a cycle in generator coordinates: free coordinates, then torsion
  // coordinates reduced into [0, t).
  std::vector<Int> class_of(const std::vector<Int>& v) const {
    std::vector<Int> y = coords_.rows() == 0 ? std::vector<Int>() : mat_vec(coords_, v);
    std::vector<Int> out;
    for (std::size_t j = rel_.size(); j < y.size(); ++j) out.push_back(y[j]);
    for (std::size_t j = 0; j < rel_.size(); ++j)
      if (rel_[j] > 1) {
        Int r = y[j] % rel_[j];
        if (r < 0) r += rel_[j];
        out.push_back(r);
      }
    return out;
  }

  bool is_boundary(const std::vector<Int>& v) const { return is_cycle(v) && is_zero(class_of(v)); }

 private:
  std::size_t n_ = 0;
  IntMatrix out_;
  IntMatrix basis_, coords_;
  std::vector<Int> rel_;
  GroupSummary summary_;
};

inline Presentation homology_presentation(const CubicalComplex& x, std::size_t k) {
  return Presentation(boundary_matrix(x, k), boundary_matrix(x, k + 1), x.count(k));
}

inline Presentation cohomology_presentation(const CubicalComplex& x, std::size_t k) {
  IntMatrix in = k == 0 ? IntMatrix(x.count(0), 0) : coboundary_matrix(x, k - 1);
  return Presentation(coboundary_matrix(x, k), in, x.count(k));
}

inline GroupSummary mod2_group(const IntMatrix& out, const IntMatrix& in, std::size_t n) {
  GroupSummary g;
  g.coeff = Coeff::Z2;
  g.rank = n - rank_mod2(out) - rank_mod2(in);
  return g;
}

inline GroupSummary homology(const CubicalComplex& x, std::size_t k, Coeff r = Coeff::Z) {
  if (r == Coeff::Z2) return mod2_group(boundary_matrix(x, k), boundary_matrix(x, k + 1), x.count(k));
  const auto out = snf_factors(boundary_matrix(x, k));
  const auto in = snf_factors(boundary_matrix(x, k + 1));
  GroupSummary g;
  g.rank = x.count(k) - out.size() - in.size();
  for (const auto& t : in)
    if (t > 1) g.torsion.push_back(t);
  return g;
}

inline GroupSummary cohomology(const CubicalComplex& x, std::size_t k, Coeff r = Coeff::Z) {
  IntMatrix in = k == 0 ? IntMatrix(x.count(0), 0) : coboundary_matrix(x, k - 1);
  if (r == Coeff::Z2) return mod2_group(coboundary_matrix(x, k), in, x.count(k));
  const auto out = snf_factors(coboundary_matrix(x, k));
  const auto inf = snf_factors(in);
  GroupSummary g;
  g.rank = x.count(k) - out.size() - inf.size();
  for (const auto& t : inf)
    if (t > 1) g.torsion.push_back(t);
  return g;
}

// ---------------------------------------------------------------------------
// Fundamental class

// Signs on the top cubes making every (m-1)-face cancel.  The complex must be
// pure of dimension m, every (m-1)-face must lie in exactly two top cubes, and
// it must be connected through those faces.  With coeff Z2 only the closedness
// conditions apply and the class is the sum of all top cubes.
inline Chain fundamental_class(const CubicalComplex& x, Coeff r = Coeff::Z) {
  const int m = x.top_dim();
  if (m < 0) throw Error(ErrorCode::NotClosed, "empty complex");
  const std::size_t md = std::size_t(m);
  for (int k = 0; k < m; ++k)
    for (std::size_t i = 0; i < x.count(std::size_t(k)); ++i)
      if (x.is_maximal(FaceRef{std::size_t(k), i}))
        throw Error(ErrorCode::NotClosed, "complex is not pure of dimension " + std::to_string(m));

  const std::size_t ntop = x.count(md);
  Chain c = zero_chain(x, md);
  if (m == 0) {
    if (ntop != 1) throw Error(ErrorCode::NotClosed, "a closed 0-manifold here must be a single point");
    c.coeffs[0] = 1;
    return c;
  }

  // For each (m-1)-face, the top cubes containing it and the boundary sign there.
  std::vector<std::vector<std::pair<std::size_t, int>>> cof(x.count(md - 1));
  for (std::size_t t = 0; t < ntop; ++t)
    for (const auto& f : facets(x, FaceRef{md, t})) cof[f.face.index].push_back({t, f.sign});
  for (std::size_t e = 0; e < cof.size(); ++e)
    if (cof[e].size() != 2)
      throw Error(ErrorCode::NotClosed, "an (m-1)-face lies in " + std::to_string(cof[e].size()) + " top cubes");

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(ntop);  // (neighbour, via face)
  for (std::size_t e = 0; e < cof.size(); ++e) {
    adj[cof[e][0].first].push_back({cof[e][1].first, e});
    adj[cof[e][1].first].push_back({cof[e][0].first, e});
  }
  std::vector<int> sign(ntop, 0);
  sign[0] = 1;
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t t = queue.front();
    queue.pop_front();
    for (auto [u, e] : adj[t]) {
      if (sign[u] != 0) continue;
      sign[u] = 1;
      queue.push_back(u);
      if (r == Coeff::Z) {
        // choose sign[u] so that the two contributions to face e cancel
        const auto& a = cof[e][0].first == t ? cof[e][0] : cof[e][1];
        const auto& b = cof[e][0].first == t ? cof[e][1] : cof[e][0];
        sign[u] = -sign[t] * a.second * b.second;
      }
    }
  }
  for (std::size_t t = 0; t < ntop; ++t)
    if (sign[t] == 0) throw Error(ErrorCode::NotClosed, "complex is not connected through its (m-1)-faces");
  for (std::size_t t = 0; t < ntop; ++t) c.coeffs[t] = sign[t];
  // Self-adjacent loops (a cube meeting itself on two facets) are checked here too.
  if (r == Coeff::Z && !is_cycle(x, c))
    throw Error(ErrorCode::NonOrientable, "no consistent choice of signs on the top cubes");
  if (r == Coeff::Z2 && !is_cycle(x, c, Coeff::Z2))
    throw Error(ErrorCode::NotClosed, "sum of top cubes is not a mod 2 cycle");
  return c;
}

}  // namespace geocube
