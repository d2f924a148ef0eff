#pragma once

#include <string>
#include <vector>

#include "isodisplay/json_io.hpp"

namespace isodisplay::fixtures {

// Embedded deterministic inputs: catalog graphs, metric spaces, matrix and
// permutation groups, spaces and molecules. Each carries a "_provenance"
// field naming its construction.
std::vector<std::string> names();
io::Json get(const std::string& name);

// Resolves "fixture:NAME" to the embedded object, anything else to a file.
io::Json load(const std::string& path_or_fixture);

}  // namespace isodisplay::fixtures
