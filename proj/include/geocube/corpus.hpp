#pragma once

// Named complexes shipped with the library.  The Klein bottle is a fixed
// 4x4 grid stored in data/klein.json and embedded at build time.

#include <string>
#include <vector>

#include "geocube/cubical.hpp"
#include "geocube/io.hpp"
#include "geocube/klein_data.hpp"

namespace geocube {

inline std::vector<std::string> corpus_names() { return {"klein", "torus-4"}; }

inline CubicalComplex corpus_load(const std::string& name) {
  if (name == "klein") return parse_complex(corpus_data::klein_json);
  if (name == "torus-4") {
    auto t = gen::torus_grid(4, 4);
    t.set_name("torus-4");
    return t;
  }
  throw Error(ErrorCode::UnknownCorpusEntry, "no built-in complex named '" + name + "'");
}

}  // namespace geocube
