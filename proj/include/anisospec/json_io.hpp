#pragma once

#include "anisospec/anisotropy.hpp"
#include "anisospec/geometry.hpp"
#include "anisospec/result.hpp"
#include "anisospec/solver.hpp"
#include "anisospec/spectra.hpp"
#include "anisospec/verify.hpp"

#include "json.hpp"

#include <string>

namespace anisospec {

// Key order is insertion order so that identical inputs give identical bytes.
using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "anisospec/1";

// Anisotropy documents:
//   {"kind":"euclidean"} | {"kind":"zero"}
//   {"kind":"directional","c":1,"theta":0.5}
//   {"kind":"quadratic","a":[[a11,a12],[a21,a22]]}
//   {"kind":"weightedlq","q":3,"wx":1,"wy":1}
//   {"kind":"scaled","alpha":2,"child":{...}}
//   {"kind":"rotated","phi":0.3,"child":{...}}
//   {"kind":"maxof","children":[...]} | {"kind":"lpsum","p":2,"children":[...]}
// Angles are radians. An optional "schema" must be "anisospec/1"; any other
// key is rejected.
Json to_json(const Anisotropy& h);
Anisotropy anisotropy_from_json(const Json& j);

// {"schema":"anisospec/1","type":"membrane","outer":[[x,y],...],
//  "holes":[[[x,y],...],...],"generator":{"name":...,"params":[...]}}
// "holes" and "generator" are optional.
Json to_json(const Membrane& m, const ShapeSpec* generator = nullptr);
Membrane membrane_from_json(const Json& j);

Json to_json(const SpectralResult& r);
Json to_json(const VerificationReport& r);

/// Parses text, turning parser failures into ParseError.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
std::string dump(const Json& j);

/// Accepts either a JSON document or a path to a file holding one.
Anisotropy parse_anisotropy(const std::string& text_or_path);
Membrane load_membrane(const std::string& path);

}  // namespace anisospec
