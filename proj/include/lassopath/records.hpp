#pragma once

#include <filesystem>

#include <json.hpp>

#include "lassopath/bounds.hpp"
#include "lassopath/homotopy.hpp"

namespace lassopath {

inline constexpr int schema_version = 1;

// Instance and path records are JSON objects whose scalar payloads are
// "binary128-hex" strings (see quad_to_hex) so Extended-precision values
// survive a round trip bit for bit:
//
//   {"schema_version": 1, "kind": "instance", "encoding": "binary128-hex",
//    "n": .., "d": .., "meta": {...}, "x": [column-major], "y": [...]}
//
//   {"schema_version": 1, "kind": "path", "encoding": "binary128-hex",
//    "d": .., "lambda_max": .., "lambda_min": .., "count": ..,
//    "diagnostics": {...},
//    "segments": [{"lambda_hi", "lambda_lo", "signs", "active",
//                  "intercept", "slope"}, ...]}

nlohmann::json instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const nlohmann::json& j);

nlohmann::json path_to_json(const RegularizationPath& path);
RegularizationPath path_from_json(const nlohmann::json& j);

nlohmann::json bound_report_to_json(const BoundReport& report);

nlohmann::json read_json_file(const std::filesystem::path& file);
void write_json_file(const std::filesystem::path& file, const nlohmann::json& j);
void write_text_file(const std::filesystem::path& file, const std::string& text);

}  // namespace lassopath
