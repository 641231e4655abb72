#pragma once

#include <string>

#include "json.hpp"

namespace gdifs {

// Minimal TOML subset accepted as config sugar, normalized into the same
// JSON document model the JSON configs use. Supported: comments, [table]
// and [[array-of-tables]] headers, and key = string | integer | float |
// bool | single-line array. Anything else is rejected with a line number.
nlohmann::ordered_json parse_toml_lite(const std::string& text);

} // namespace gdifs
