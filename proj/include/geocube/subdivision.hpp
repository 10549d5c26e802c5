#pragma once

// Central subdivision.  A cell of sd(X) is a pair E <= G of faces of X; in the
// cube G it is the box whose coordinates are
//   G bound to c            -> c
//   G free, E free          -> 1/2
//   G free, E bound to 0    -> [0, 1/2]
//   G free, E bound to 1    -> [1/2, 1]
// so its free coordinates are those free in G and bound in E.  The vertices
// of the cell are the faces H with E <= H <= G (the centers of H), which makes
// sd(X) an ordered cubical complex on the faces of X.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "geocube/cubical.hpp"

namespace geocube {

struct SdCell {
  FaceRef low;   // E
  FaceRef high;  // G
  friend auto operator<=>(const SdCell&, const SdCell&) = default;
};

inline std::string sd_vertex_name(const CubicalComplex& x, const FaceRef& f) {
  std::string s = "[";
  const auto names = x.face_names(f);
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + names[i];
  return s + "]";
}

// Vertex positions of the cell (E, G), with E given in G's coordinates.
inline std::vector<FaceRef> sd_cell_positions(const CubicalComplex& x, const FaceRef& g, const SubCube& e) {
  const Mask full = (Mask(1) << g.dim) - 1;
  const Mask t = full & ~e.free;
  std::vector<FaceRef> out;
  const std::size_t k = popcount(t);
  for (Mask j = 0; j < (Mask(1) << k); ++j) {
    const Mask d = deposit(j, t);
    SubCube h;
    h.free = e.free | (t & (d ^ e.ones));
    h.ones = e.ones & ~h.free;
    out.push_back(x.subface(g, h));
  }
  return out;
}

class SubdividedComplex {
 public:
  explicit SubdividedComplex(const CubicalComplex& base) : base_(&base) {
    std::vector<std::string> vname;
    std::map<std::string, FaceRef> by_name;
    for (int k = 0; k <= base.top_dim(); ++k)
      for (std::size_t i = 0; i < base.count(std::size_t(k)); ++i) {
        FaceRef f{std::size_t(k), i};
        by_name.emplace(sd_vertex_name(base, f), f);
      }

    // The top cells are (v, G) for maximal G and each vertex v of G.
    std::vector<CubeSpec> specs;
    for (int k = 0; k <= base.top_dim(); ++k)
      for (std::size_t i = 0; i < base.count(std::size_t(k)); ++i) {
        FaceRef g{std::size_t(k), i};
        if (!base.is_maximal(g)) continue;
        for (Mask v = 0; v < (Mask(1) << k); ++v) {
          CubeSpec s;
          for (const auto& h : sd_cell_positions(base, g, SubCube{0, v})) s.vertices.push_back(sd_vertex_name(base, h));
          specs.push_back(std::move(s));
        }
      }
    complex_ = build_and_validate(specs, "sd(" + base.name() + ")");

    for (const auto& n : complex_.vertex_names()) vertex_face_.push_back(by_name.at(n));
    cells_.resize(std::size_t(complex_.top_dim() + 1));
    for (int k = 0; k <= complex_.top_dim(); ++k)
      for (std::size_t i = 0; i < complex_.count(std::size_t(k)); ++i) {
        const Cube& c = complex_.cubes(std::size_t(k))[i];
        // E and G are the smallest and largest faces among the vertices.
        SdCell cell{vertex_face_[std::size_t(c.positions.front())], vertex_face_[std::size_t(c.positions.front())]};
        for (int v : c.positions) {
          const FaceRef& h = vertex_face_[std::size_t(v)];
          if (h.dim < cell.low.dim) cell.low = h;
          if (h.dim > cell.high.dim) cell.high = h;
        }
        cells_[std::size_t(k)].push_back(cell);
        index_.emplace(cell, FaceRef{std::size_t(k), i});
      }
  }

  const CubicalComplex& base() const { return *base_; }
  const CubicalComplex& complex() const { return complex_; }
  const SdCell& cell(const FaceRef& f) const { return cells_.at(f.dim).at(f.index); }
  // The face of sd(X) for the pair (E, G); UnknownFace if E is not a face of G.
  FaceRef face_of(const FaceRef& e, const FaceRef& g) const {
    auto it = index_.find(SdCell{e, g});
    if (it == index_.end()) throw Error(ErrorCode::UnknownFace, "pair is not a cell of the subdivision");
    return it->second;
  }
  std::size_t cell_count() const { return index_.size(); }

 private:
  const CubicalComplex* base_;
  CubicalComplex complex_;
  std::vector<FaceRef> vertex_face_;
  std::vector<std::vector<SdCell>> cells_;
  std::map<SdCell, FaceRef> index_;
};

}  // namespace geocube
