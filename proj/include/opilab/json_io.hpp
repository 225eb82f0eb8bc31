#pragma once

// JSON surfaces shared by the CLI and test fixtures.
//
//   matrix:   {"dim": n, "rows": [[...], ...]}   symmetry checked to 1e-12 absolute
//   function: {"kind": "Power", "params": {"r": 0.5}, "domain": [lo, hi]}
//             measures as {"nodes": [...], "weights": [...]}; a null domain
//             endpoint means infinite; "class_claim" is optional.

#include "opilab/funcrep.hpp"
#include "opilab/matcore.hpp"

#include <json.hpp>

#include <string>

namespace opilab {

inline constexpr double kMatrixSymmetryTol = 1e-12;

/// Throws ParseError on malformed input or asymmetry above 1e-12.
HermitianMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const HermitianMatrix& m);

/// Throws ParseError on malformed input; constructor errors (InvalidParams)
/// propagate unchanged.
FunctionSpec function_from_json(const nlohmann::json& j);
nlohmann::json function_to_json(const FunctionSpec& f);

nlohmann::json measure_to_json(const DiscreteMeasure& m);
DiscreteMeasure measure_from_json(const nlohmann::json& j);

/// Parses a file, or the argument itself when it starts with '{'.
nlohmann::json load_json(const std::string& path_or_literal);

}  // namespace opilab
