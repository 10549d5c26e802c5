#pragma once

// JSON documents for complexes and (co)chains.
//
//   complex: {"name": "...", "cubes": [["v0","v1"], ...]}   (top cubes suffice)
//   chain:   {"degree": k, "terms": [{"face": ["v0","v1"], "coeff": 3}, ...]}
//
// Cochains use the chain layout.  Coefficients may be JSON integers or
// decimal strings for values outside 64 bits.

#include <algorithm>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "geocube/chains.hpp"

namespace geocube {

using Json = nlohmann::ordered_json;

struct ComplexDocument {
  std::string name;
  std::vector<CubeSpec> cubes;
  friend bool operator==(const ComplexDocument&, const ComplexDocument&) = default;
};

namespace detail {

inline Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // e.byte is the 1-based offset of the offending character.
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    // keep only nlohmann's description after the "parse error ...: " prefix
    if (auto p = msg.find(": "); p != std::string::npos) msg = msg.substr(p + 2);
    throw Error(ErrorCode::SyntaxError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
  }
}

inline Int parse_coeff(const Json& v, const std::string& where) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) return Int(std::to_string(v.get<std::uint64_t>()));
    return Int(std::to_string(v.get<std::int64_t>()));
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    Int out;
    if (s.empty() || out.set_str(s, 10) != 0) throw Error(ErrorCode::SemanticError, where + ": bad coefficient '" + s + "'");
    return out;
  }
  throw Error(ErrorCode::SemanticError, where + ": coefficient must be an integer");
}

inline Json coeff_json(const Int& c) {
  if (c.fits_slong_p()) return Json(c.get_si());
  return Json(c.get_str());
}

inline std::vector<std::string> name_list(const Json& v, const std::string& where) {
  if (!v.is_array()) throw Error(ErrorCode::SemanticError, where + " must be a list of vertex names");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw Error(ErrorCode::SemanticError, where + " contains a non-string vertex");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace detail

inline ComplexDocument parse_complex_document(std::string_view text) {
  const Json j = detail::parse_json(text);
  if (!j.is_object()) throw Error(ErrorCode::SemanticError, "complex document must be a JSON object");
  ComplexDocument doc;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw Error(ErrorCode::SemanticError, "\"name\" must be a string");
    doc.name = j["name"].get<std::string>();
  }
  if (!j.contains("cubes") || !j["cubes"].is_array())
    throw Error(ErrorCode::SemanticError, "complex document needs a \"cubes\" list");
  std::size_t i = 0;
  for (const auto& c : j["cubes"]) {
    doc.cubes.push_back(CubeSpec{detail::name_list(c, "cube " + std::to_string(i) + " (" + c.dump() + ")")});
    ++i;
  }
  return doc;
}

inline CubicalComplex parse_complex(std::string_view text) {
  const auto doc = parse_complex_document(text);
  return build_and_validate(doc.cubes, doc.name);
}

// Canonical document of a complex: its top cubes, sorted.
inline ComplexDocument to_document(const CubicalComplex& x) {
  ComplexDocument doc{x.name(), x.top_cubes()};
  std::sort(doc.cubes.begin(), doc.cubes.end(), [](const CubeSpec& a, const CubeSpec& b) {
    if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
    return a.vertices < b.vertices;
  });
  return doc;
}

inline std::string write_document(const ComplexDocument& doc) {
  std::ostringstream os;
  os << "{\n  \"name\": " << Json(doc.name).dump() << ",\n  \"cubes\": [";
  for (std::size_t i = 0; i < doc.cubes.size(); ++i) {
    os << (i ? ",\n    " : "\n    ") << Json(doc.cubes[i].vertices).dump();
  }
  os << (doc.cubes.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return os.str();
}

inline std::string write_complex(const CubicalComplex& x) { return write_document(to_document(x)); }

namespace detail {

inline std::pair<std::size_t, std::vector<Int>> parse_terms(const CubicalComplex& x, std::string_view text) {
  const Json j = parse_json(text);
  if (!j.is_object()) throw Error(ErrorCode::SemanticError, "chain document must be a JSON object");
  if (!j.contains("degree") || !j["degree"].is_number_integer() || j["degree"].get<std::int64_t>() < 0)
    throw Error(ErrorCode::SemanticError, "chain document needs a nonnegative integer \"degree\"");
  const std::size_t k = j["degree"].get<std::size_t>();
  std::vector<Int> coeffs(x.count(k));
  if (!j.contains("terms") || !j["terms"].is_array())
    throw Error(ErrorCode::SemanticError, "chain document needs a \"terms\" list");
  std::size_t i = 0;
  for (const auto& t : j["terms"]) {
    const std::string where = "term " + std::to_string(i++);
    if (!t.is_object() || !t.contains("face") || !t.contains("coeff"))
      throw Error(ErrorCode::SemanticError, where + " needs \"face\" and \"coeff\"");
    const auto names = name_list(t["face"], where + " face");
    auto f = x.find_by_names(names);
    if (!f) throw Error(ErrorCode::UnknownFace, where + ": " + t["face"].dump() + " is not a face of the complex");
    if (f->dim != k)
      throw Error(ErrorCode::WrongDegree, where + ": face has dimension " + std::to_string(f->dim) +
                                              ", document degree is " + std::to_string(k));
    coeffs[f->index] += parse_coeff(t["coeff"], where);
  }
  return {k, std::move(coeffs)};
}

inline std::string write_terms(const CubicalComplex& x, std::size_t degree, const std::vector<Int>& coeffs) {
  std::ostringstream os;
  os << "{\n  \"degree\": " << degree << ",\n  \"terms\": [";
  bool first = true;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    Json t;
    t["face"] = x.face_names(FaceRef{degree, i});
    t["coeff"] = coeff_json(coeffs[i]);
    os << (first ? "\n    " : ",\n    ") << t.dump();
    first = false;
  }
  os << (first ? "]\n}\n" : "\n  ]\n}\n");
  return os.str();
}

}  // namespace detail

inline Chain parse_chain(const CubicalComplex& x, std::string_view text) {
  auto [k, c] = detail::parse_terms(x, text);
  return Chain{k, std::move(c)};
}
inline Cochain parse_cochain(const CubicalComplex& x, std::string_view text) {
  auto [k, c] = detail::parse_terms(x, text);
  return Cochain{k, std::move(c)};
}
inline std::string write_chain(const CubicalComplex& x, const Chain& c) {
  return detail::write_terms(x, c.degree, c.coeffs);
}
inline std::string write_cochain(const CubicalComplex& x, const Cochain& a) {
  return detail::write_terms(x, a.degree, a.coeffs);
}

}  // namespace geocube
