#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "approxvit/adder.hpp"

namespace approxvit {

// Built-in adder spec: `exact:N`, `lower-or:N:K` (alias `loa`),
// `truncated:N:K` (alias `trunc`), each optionally suffixed `@name`.
// Throws InputError for an unknown spec.
AdderModel parse_adder_spec(std::string_view spec);

// A directory (every *.net file, sorted by name) or a comma-separated list of
// built-in specs and netlist paths.
std::vector<AdderModel> resolve_adders(std::string_view arg);

}  // namespace approxvit
