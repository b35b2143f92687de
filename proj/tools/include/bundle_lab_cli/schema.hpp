#pragma once

#include <string>
#include <vector>

#include "bundle_lab_cli/output.hpp"

namespace bundle_lab::cli {

/// Validates against the JSON Schema subset used by the published schemas:
/// type (string or list), properties, required, additionalProperties (bool),
/// items, enum, minimum, and local "$ref": "#/definitions/...". Returns one
/// message per violation, prefixed by its JSON pointer.
std::vector<std::string> validate(const Json& doc, const Json& schema);

/// Published schema for a command's result.json ("error" for failure
/// documents). Throws Error for unknown names.
const Json& schema_for(const std::string& name);
std::vector<std::string> schema_names();

}  // namespace bundle_lab::cli
