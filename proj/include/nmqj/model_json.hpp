// model_json.hpp — model files: JSON parsing, validation, canonical dump
#pragma once

#include <string>

#include <json.hpp>

#include "nmqj/model.hpp"

namespace nmqj {

// Parses and validates a model document. Complex numbers are [re, im] pairs;
// operators are row-major arrays of dim*dim pairs. Unknown fields are
// rejected. Throws ConfigError on any structural or semantic problem.
MasterEquationModel model_from_json(const nlohmann::json& j);

// Reads and parses a model file; file-system and JSON syntax errors surface
// as ConfigError.
MasterEquationModel load_model_file(const std::string& path);

nlohmann::json model_to_json(const MasterEquationModel& model);

// Canonical text form: sorted keys, two-space indent, trailing newline, all
// defaulted fields written out. Reparsing the canonical form and dumping it
// again is byte-identical.
std::string canonical_model_json(const MasterEquationModel& model);

}  // namespace nmqj
