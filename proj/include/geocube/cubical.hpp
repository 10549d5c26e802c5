#pragma once

// Ordered cubical complexes.
//
// A cube of dimension n is a list of 2^n distinct vertices; position k holds
// the vertex whose subset of {1..n} has binary encoding k (bit i-1 set means
// x_i = 1).  A complex is its set of cubes, closed under faces, with faces
// determined by their vertex sets and a global vertex order that every cube
// respects.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "geocube/errors.hpp"

namespace geocube {

struct CubeSpec {
  std::vector<std::string> vertices;
  friend bool operator==(const CubeSpec&, const CubeSpec&) = default;
};

using Mask = std::uint32_t;

inline std::size_t popcount(Mask m) { return static_cast<std::size_t>(__builtin_popcount(m)); }

// Spread the low bits of `k` over the set bits of `mask`, lowest first.
inline Mask deposit(Mask k, Mask mask) {
  Mask out = 0;
  for (Mask bit = 1; mask; bit <<= 1) {
    Mask low = mask & (~mask + 1);
    if (k & bit) out |= low;
    mask &= mask - 1;
  }
  return out;
}

// A face of an n-cube, given by the coordinates it binds to 1 (`ones`) and the
// coordinates it leaves free; everything else is bound to 0.  In interval
// terms this is [ones, ones | free] inside P({1..n}).
struct SubCube {
  Mask free = 0;
  Mask ones = 0;
};

struct FaceRef {
  std::size_t dim = 0;
  std::size_t index = 0;
  friend auto operator<=>(const FaceRef&, const FaceRef&) = default;
};

struct Cube {
  std::vector<int> positions;  // vertex ids in characteristic-map order
  std::vector<int> key;        // the same ids sorted; identifies the face
  std::size_t dim() const { return positions.empty() ? 0 : static_cast<std::size_t>(__builtin_ctz(positions.size())); }
};

class CubicalComplex {
 public:
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  const std::vector<std::string>& vertex_names() const { return names_; }
  std::size_t vertex_count() const { return names_.size(); }
  std::optional<int> vertex_id(const std::string& n) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), n);
    if (it == names_.end() || *it != n) return std::nullopt;
    return static_cast<int>(it - names_.begin());
  }

  // -1 when the complex is empty.
  int top_dim() const { return static_cast<int>(cubes_.size()) - 1; }
  std::size_t count(std::size_t k) const { return k < cubes_.size() ? cubes_[k].size() : 0; }
  const std::vector<Cube>& cubes(std::size_t k) const {
    static const std::vector<Cube> none;
    return k < cubes_.size() ? cubes_[k] : none;
  }
  const Cube& cube(const FaceRef& f) const { return cubes_.at(f.dim).at(f.index); }
  std::size_t face_total() const {
    std::size_t t = 0;
    for (const auto& c : cubes_) t += c.size();
    return t;
  }

  std::optional<FaceRef> find(const std::vector<int>& sorted_key) const {
    if (sorted_key.empty()) return std::nullopt;
    const std::size_t n = sorted_key.size();
    if (n & (n - 1)) return std::nullopt;
    const std::size_t k = static_cast<std::size_t>(__builtin_ctz(n));
    if (k >= cubes_.size()) return std::nullopt;
    const auto& level = cubes_[k];
    auto it = std::lower_bound(level.begin(), level.end(), sorted_key,
                               [](const Cube& c, const std::vector<int>& key) { return c.key < key; });
    if (it == level.end() || it->key != sorted_key) return std::nullopt;
    return FaceRef{k, static_cast<std::size_t>(it - level.begin())};
  }

  std::optional<FaceRef> find_by_names(std::vector<std::string> names) const {
    std::vector<int> key;
    for (const auto& n : names) {
      auto id = vertex_id(n);
      if (!id) return std::nullopt;
      key.push_back(*id);
    }
    std::sort(key.begin(), key.end());
    return find(key);
  }

  // The face of `f` described in f's own coordinates.
  FaceRef subface(const FaceRef& f, const SubCube& s) const {
    const Cube& c = cube(f);
    const std::size_t k = popcount(s.free);
    std::vector<int> key;
    key.reserve(std::size_t(1) << k);
    for (Mask j = 0; j < (Mask(1) << k); ++j) key.push_back(c.positions[s.ones | deposit(j, s.free)]);
    std::sort(key.begin(), key.end());
    auto r = find(key);
    if (!r) throw Error(ErrorCode::UnknownFace, "face closure is broken");
    return *r;
  }

  // Strict order of the global vertex poset (transitive closure of cube orders).
  bool less(int a, int b) const { return a != b && reach_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }

  // Cubes that are not proper faces of another cube, each as its vertex list.
  std::vector<CubeSpec> top_cubes() const {
    std::vector<CubeSpec> out;
    for (std::size_t k = 0; k < cubes_.size(); ++k)
      for (std::size_t i = 0; i < cubes_[k].size(); ++i) {
        if (!maximal_[k][i]) continue;
        CubeSpec s;
        for (int v : cubes_[k][i].positions) s.vertices.push_back(names_[static_cast<std::size_t>(v)]);
        out.push_back(std::move(s));
      }
    return out;
  }
  bool is_maximal(const FaceRef& f) const { return maximal_.at(f.dim).at(f.index); }

  std::vector<std::string> face_names(const FaceRef& f) const {
    std::vector<std::string> out;
    for (int v : cube(f).key) out.push_back(names_[static_cast<std::size_t>(v)]);
    return out;
  }

 private:
  friend CubicalComplex build_and_validate(const std::vector<CubeSpec>&, const std::string&);

  std::string name_;
  std::vector<std::string> names_;
  std::vector<std::vector<Cube>> cubes_;
  std::vector<std::vector<bool>> maximal_;
  std::vector<std::vector<bool>> reach_;
};

inline bool valid_vertex_name(const std::string& s) {
  if (s.empty()) return false;
  for (unsigned char ch : s)
    if (ch <= ' ' || ch == 0x7f) return false;
  return true;
}

namespace detail {

inline std::string describe(const CubeSpec& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.vertices.size(); ++i) out += (i ? "," : "") + s.vertices[i];
  return out + "]";
}

}  // namespace detail

inline CubicalComplex build_and_validate(const std::vector<CubeSpec>& specs, const std::string& name = "") {
  // Shape of each listed cube.
  std::set<std::string> all;
  for (const auto& s : specs) {
    const std::size_t n = s.vertices.size();
    if (n == 0 || (n & (n - 1)))
      throw Error(ErrorCode::MalformedSpec, "cube " + detail::describe(s) + " does not have 2^n vertices");
    std::set<std::string> seen;
    for (const auto& v : s.vertices) {
      if (!valid_vertex_name(v)) throw Error(ErrorCode::MalformedSpec, "bad vertex name '" + v + "'");
      if (!seen.insert(v).second)
        throw Error(ErrorCode::MalformedSpec, "cube " + detail::describe(s) + " repeats vertex " + v);
    }
    if (n > (std::size_t(1) << 20)) throw Error(ErrorCode::MalformedSpec, "cube dimension too large");
    all.insert(s.vertices.begin(), s.vertices.end());
  }

  CubicalComplex cx;
  cx.name_ = name;
  cx.names_.assign(all.begin(), all.end());
  auto id = [&](const std::string& v) { return *cx.vertex_id(v); };

  // Listed cubes must have distinct vertex sets.
  std::map<std::vector<int>, std::size_t> listed;
  std::vector<std::vector<int>> listed_positions;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    std::vector<int> pos;
    for (const auto& v : specs[i].vertices) pos.push_back(id(v));
    std::vector<int> key = pos;
    std::sort(key.begin(), key.end());
    if (!listed.emplace(key, i).second)
      throw Error(ErrorCode::DuplicateVertexSet, "cubes " + detail::describe(specs[listed[key]]) + " and " +
                                                     detail::describe(specs[i]) + " share a vertex set");
    listed_positions.push_back(std::move(pos));
  }

  // Face closure; a face reached twice must carry the same characteristic map.
  std::map<std::vector<int>, std::vector<int>> faces;
  std::set<std::vector<int>> proper;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& pos = listed_positions[i];
    const std::size_t n = static_cast<std::size_t>(__builtin_ctz(pos.size()));
    const Mask full = (Mask(1) << n) - 1;
    for (Mask freem = 0; freem <= full; ++freem) {
      const Mask rest = full & ~freem;
      for (Mask ones = rest;; ones = (ones - 1) & rest) {
        const std::size_t k = popcount(freem);
        std::vector<int> fpos;
        fpos.reserve(std::size_t(1) << k);
        for (Mask j = 0; j < (Mask(1) << k); ++j) fpos.push_back(pos[ones | deposit(j, freem)]);
        std::vector<int> key = fpos;
        std::sort(key.begin(), key.end());
        if (freem != full) proper.insert(key);
        auto [it, fresh] = faces.emplace(key, fpos);
        if (!fresh && it->second != fpos) {
          std::string msg = "face {";
          for (std::size_t t = 0; t < key.size(); ++t) msg += (t ? "," : "") + cx.names_[std::size_t(key[t])];
          throw Error(ErrorCode::IntervalClosureFailure,
                      msg + "} receives two different characteristic maps (from cube " +
                          detail::describe(specs[i]) + ")");
        }
        if (ones == 0) break;
      }
    }
  }

  // Global order: transitive closure of every edge's direction, which must be acyclic.
  const std::size_t nv = cx.names_.size();
  std::vector<std::vector<int>> succ(nv);
  std::vector<int> indeg(nv, 0);
  for (const auto& [key, pos] : faces) {
    if (pos.size() != 2) continue;
    succ[std::size_t(pos[0])].push_back(pos[1]);
    ++indeg[std::size_t(pos[1])];
  }
  std::vector<int> order;
  std::queue<int> ready;
  for (std::size_t v = 0; v < nv; ++v)
    if (indeg[v] == 0) ready.push(static_cast<int>(v));
  while (!ready.empty()) {
    int v = ready.front();
    ready.pop();
    order.push_back(v);
    for (int w : succ[std::size_t(v)])
      if (--indeg[std::size_t(w)] == 0) ready.push(w);
  }
  if (order.size() != nv) {
    std::string culprit;
    for (std::size_t v = 0; v < nv; ++v)
      if (indeg[v] > 0) {
        culprit = cx.names_[v];
        break;
      }
    throw Error(ErrorCode::PosetCycle, "cube orders are inconsistent around vertex " + culprit);
  }
  cx.reach_.assign(nv, std::vector<bool>(nv, false));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto& row = cx.reach_[std::size_t(*it)];
    for (int w : succ[std::size_t(*it)]) {
      row[std::size_t(w)] = true;
      const auto& wr = cx.reach_[std::size_t(w)];
      for (std::size_t t = 0; t < nv; ++t)
        if (wr[t]) row[t] = true;
    }
  }

  // Faces by dimension, each level sorted by vertex set.
  for (auto& [key, pos] : faces) {
    const std::size_t k = static_cast<std::size_t>(__builtin_ctz(pos.size()));
    if (cx.cubes_.size() <= k) cx.cubes_.resize(k + 1);
    cx.cubes_[k].push_back(Cube{pos, key});
  }
  cx.maximal_.resize(cx.cubes_.size());
  for (std::size_t k = 0; k < cx.cubes_.size(); ++k) {
    std::sort(cx.cubes_[k].begin(), cx.cubes_[k].end(), [](const Cube& a, const Cube& b) { return a.key < b.key; });
    for (const auto& c : cx.cubes_[k]) cx.maximal_[k].push_back(!proper.count(c.key));
  }
  return cx;
}

// Every characteristic map is order preserving for the global poset.  This
// holds by construction; the check exists so tests can confirm it.
inline bool order_preserving(const CubicalComplex& x) {
  for (int k = 0; k <= x.top_dim(); ++k)
    for (const auto& c : x.cubes(std::size_t(k))) {
      const Mask n = Mask(c.positions.size());
      for (Mask s = 0; s < n; ++s)
        for (Mask t = 0; t < n; ++t)
          if (s != t && (s & t) == s && !x.less(c.positions[s], c.positions[t])) return false;
    }
  return true;
}

// All 3^dim faces of f with their intervals [ones, ones | free].
inline std::vector<std::pair<FaceRef, SubCube>> faces(const CubicalComplex& x, const FaceRef& f) {
  if (f.dim >= std::size_t(x.top_dim() + 1) || f.index >= x.count(f.dim))
    throw Error(ErrorCode::UnknownFace, "no such face");
  std::vector<std::pair<FaceRef, SubCube>> out;
  const Mask full = (Mask(1) << f.dim) - 1;
  for (Mask freem = 0; freem <= full; ++freem) {
    const Mask rest = full & ~freem;
    for (Mask ones = rest;; ones = (ones - 1) & rest) {
      SubCube s{freem, ones};
      out.emplace_back(x.subface(f, s), s);
      if (ones == 0) break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Products

inline std::string product_vertex_name(const std::string& a, const std::string& b) {
  return "(" + a + "," + b + ")";
}

// Cube positions of sigma x tau: X coordinates first, so position kx + 2^p ky.
inline std::vector<std::string> product_positions(const std::vector<std::string>& a,
                                                  const std::vector<std::string>& b) {
  std::vector<std::string> out;
  out.reserve(a.size() * b.size());
  for (const auto& y : b)
    for (const auto& x : a) out.push_back(product_vertex_name(x, y));
  return out;
}

inline CubicalComplex product(const CubicalComplex& x, const CubicalComplex& y) {
  std::vector<CubeSpec> specs;
  for (const auto& a : x.top_cubes())
    for (const auto& b : y.top_cubes()) specs.push_back(CubeSpec{product_positions(a.vertices, b.vertices)});
  return build_and_validate(specs, x.name() + "*" + y.name());
}

// ---------------------------------------------------------------------------
// Generators

namespace gen {

inline std::string bits_name(const std::string& prefix, Mask k, std::size_t n) {
  std::string s = prefix;
  for (std::size_t i = 0; i < n; ++i) s += (k >> i & 1) ? '1' : '0';
  return s;
}

inline CubicalComplex point() { return build_and_validate({CubeSpec{{"v"}}}, "point"); }

inline CubicalComplex standard_cube(std::size_t n) {
  if (n > 8) throw Error(ErrorCode::ParamTooSmall, "standard cube dimension is limited to 8");
  CubeSpec s;
  for (Mask k = 0; k < (Mask(1) << n); ++k) s.vertices.push_back(bits_name("v", k, n));
  return build_and_validate({s}, "cube-" + std::to_string(n));
}

// The 2n facets of I^n.
inline CubicalComplex cube_boundary(std::size_t n) {
  if (n < 1) throw Error(ErrorCode::ParamTooSmall, "cube boundary needs n >= 1");
  if (n > 8) throw Error(ErrorCode::ParamTooSmall, "cube boundary dimension is limited to 8");
  std::vector<CubeSpec> specs;
  const Mask full = (Mask(1) << n) - 1;
  for (std::size_t i = 0; i < n; ++i)
    for (Mask j = 0; j < 2; ++j) {
      const Mask freem = full & ~(Mask(1) << i);
      CubeSpec s;
      for (Mask k = 0; k < (Mask(1) << (n - 1)); ++k)
        s.vertices.push_back(bits_name("v", (j << i) | deposit(k, freem), n));
      specs.push_back(std::move(s));
    }
  return build_and_validate(specs, "cube-boundary-" + std::to_string(n));
}

// k edges p0 -> p1 -> ... -> pk.
inline CubicalComplex path(std::size_t k) {
  if (k < 1) throw Error(ErrorCode::ParamTooSmall, "path needs at least one edge");
  std::vector<CubeSpec> specs;
  for (std::size_t i = 0; i < k; ++i)
    specs.push_back(CubeSpec{{"p" + std::to_string(i), "p" + std::to_string(i + 1)}});
  return build_and_validate(specs, "path-" + std::to_string(k));
}

// Edge i of a k-cycle, oriented so the seam edge starts at the poset minimum.
inline std::pair<std::size_t, std::size_t> cycle_edge(std::size_t i, std::size_t k) {
  return i + 1 < k ? std::pair{i, i + 1} : std::pair{std::size_t(0), k - 1};
}

inline CubicalComplex circle(std::size_t k) {
  if (k < 3) throw Error(ErrorCode::ParamTooSmall, "circle needs k >= 3");
  std::vector<CubeSpec> specs;
  for (std::size_t i = 0; i < k; ++i) {
    auto [a, b] = cycle_edge(i, k);
    specs.push_back(CubeSpec{{"c" + std::to_string(a), "c" + std::to_string(b)}});
  }
  return build_and_validate(specs, "circle-" + std::to_string(k));
}

// p x q wraparound grid.  With p or q equal to 2 the squares collapse onto
// shared vertex sets and validation rejects the result.
inline CubicalComplex torus_grid(std::size_t p, std::size_t q) {
  if (p < 2 || q < 2) throw Error(ErrorCode::ParamTooSmall, "torus grid needs p, q >= 2");
  auto name = [](std::size_t i, std::size_t j) { return "t" + std::to_string(i) + "_" + std::to_string(j); };
  std::vector<CubeSpec> specs;
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t i = 0; i < p; ++i) {
      auto [x0, x1] = cycle_edge(i, p);
      auto [y0, y1] = cycle_edge(j, q);
      specs.push_back(CubeSpec{{name(x0, y0), name(x1, y0), name(x0, y1), name(x1, y1)}});
    }
  return build_and_validate(specs, "torus-" + std::to_string(p) + "x" + std::to_string(q));
}

// Random subcomplex of a small grid of cubes, with shuffled vertex names so
// that basis order differs from construction order.
inline CubicalComplex fuzz(std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  const std::size_t dim = 1 + eng() % 3;
  const std::size_t side = 2 + eng() % 2;
  std::vector<std::size_t> grid(dim, side);
  std::size_t total = 1;
  for (auto s : grid) total *= s;
  std::size_t nvert = 1;
  for (std::size_t t = 0; t < dim; ++t) nvert *= side + 1;
  std::vector<std::size_t> perm(nvert);
  for (std::size_t i = 0; i < nvert; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), eng);
  auto vname = [&](const std::vector<std::size_t>& c) {
    std::size_t idx = 0;
    for (std::size_t t = dim; t-- > 0;) idx = idx * (side + 1) + c[t];
    return "z" + std::to_string(perm[idx]);
  };
  std::vector<CubeSpec> specs;
  for (std::size_t cell = 0; cell < total; ++cell) {
    if (eng() % 3 == 0) continue;
    std::vector<std::size_t> base(dim);
    std::size_t rest = cell;
    for (std::size_t t = 0; t < dim; ++t) base[t] = rest % side, rest /= side;
    // Sometimes keep only a lower-dimensional face of the cell.
    Mask freem = (Mask(1) << dim) - 1;
    if (eng() % 4 == 0) freem &= ~(Mask(1) << (eng() % dim));
    CubeSpec s;
    const std::size_t k = popcount(freem);
    for (Mask j = 0; j < (Mask(1) << k); ++j) {
      Mask bits = deposit(j, freem);
      std::vector<std::size_t> c = base;
      for (std::size_t t = 0; t < dim; ++t) c[t] += (bits >> t) & 1;
      s.vertices.push_back(vname(c));
    }
    specs.push_back(std::move(s));
  }
  if (specs.empty()) specs.push_back(CubeSpec{{"z0"}});
  // Listed faces of other listed cubes are harmless but must not repeat.
  std::vector<CubeSpec> uniq;
  std::set<std::vector<std::string>> seen;
  for (auto& s : specs) {
    auto key = s.vertices;
    std::sort(key.begin(), key.end());
    if (seen.insert(key).second) uniq.push_back(std::move(s));
  }
  return build_and_validate(uniq, "fuzz-" + std::to_string(seed));
}

}  // namespace gen

}  // namespace geocube
