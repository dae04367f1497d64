#pragma once

// Model documents: JSON text with a versioned, canonical layout.
//
//   {
//     "format_version": "1.0",
//     "variables": [{"name": "A", "levels": ["a0", "a1"]}, ...],
//     "cpts": [{"child": "B", "parents": ["A"], "rows": [[0.9, 0.1], [0.2, 0.8]]}, ...]
//   }
//
// Rows follow the mixed-radix convention with the first parent most significant.

#include <string>
#include <string_view>
#include <vector>

#include "tvrobust/bn_model.hpp"

namespace tvrobust {

inline constexpr const char* kFormatVersion = "1.0";

// Structure only: syntax and field types are checked (ModelError with a
// line/column or JSON-pointer location), network invariants are not.
BayesNet read_model(std::string_view text);

// read_model followed by validate(); the first violation becomes a ModelError
// located at the offending variable or table.
BayesNet parse_model(std::string_view text);

// Canonical text: fixed key order, two-space indent, one row per line and
// shortest round-trip decimals. serialize_model(read_model(s)) == s for
// canonical input.
std::string serialize_model(const BayesNet& net);

// Shortest decimal that reads back to exactly `x`.
std::string format_probability(double x);

// Models compiled into the library.
std::vector<std::string> bundled_fixture_names();
const std::string* bundled_fixture(std::string_view name);

// Text of `source`: a file path if such a file exists, otherwise a bundled
// fixture name. Throws ModelError when neither resolves.
std::string load_model_text(const std::string& source);

}  // namespace tvrobust
