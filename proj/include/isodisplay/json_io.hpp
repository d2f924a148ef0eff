#pragma once

#include <json.hpp>
#include <string>

#include "isodisplay/free_space.hpp"
#include "isodisplay/graph_norm.hpp"
#include "isodisplay/graphs.hpp"
#include "isodisplay/matrix_group.hpp"
#include "isodisplay/normed_space.hpp"
#include "isodisplay/pimple.hpp"

namespace isodisplay::io {

// Key order is part of the report contract (byte-identical output for a
// fixed seed), so everything goes through ordered_json.
using Json = nlohmann::ordered_json;

Json rat_to_json(const Rat& r);       // "p/q" string
Rat rat_from_json(const Json& j);     // accepts "p/q", "p", or an integer

Json vecq_to_json(const VecQ& v);
VecQ vecq_from_json(const Json& j);
Json vecd_to_json(const VecD& v);
VecD vecd_from_json(const Json& j);

// LinearMap: {"matrix": [[...]]}, rational strings or floats
Json matq_to_json(const MatQ& m);
MatQ matq_from_json(const Json& j);
Json matd_to_json(const MatD& m);
MatD matd_from_json(const Json& j);

// MatrixGroup: {"elements": [LinearMap...]}
Json group_to_json(const MatrixGroupQ& g);
Json group_to_json(const MatrixGroupD& g);
MatrixGroupQ groupq_from_json(const Json& j, double tol = kDefaultTolerance);
MatrixGroupD groupd_from_json(const Json& j, double tol = kDefaultTolerance);

// NormedSpace: {"dim","kind","facets","metric","base","spikes"}
Json space_to_json(const NormedSpace& s);
NormedSpace space_from_json(const Json& j);

// Graph: {"n","edges","labels"}
Json graph_to_json(const graphs::Graph& g);
graphs::Graph graph_from_json(const Json& j);

// Permutation group: {"m", "elements": [[...]]} or {"m", "generators": [[...]]}
Json perm_group_to_json(const graphs::PermGroup& g);
graphs::PermGroup perm_group_from_json(const Json& j);

// Gadget layout with explicit vertex-role tags
Json gadget_to_json(const graphs::GadgetGraph& gg);

// Finite metric space: {"points": [...], "d": [[...]]}
Json metric_to_json(const freespace::FiniteMetricSpace& m);
freespace::FiniteMetricSpace metric_from_json(const Json& j);

// Molecule: {"masses": {label: number}}
Json molecule_to_json(const freespace::Molecule& mol, const freespace::FiniteMetricSpace& m);
freespace::Molecule molecule_from_json(const Json& j, const freespace::FiniteMetricSpace& m);

// Display pipeline result, sufficient to re-run the verification side.
Json display_result_to_json(const pimple::DisplayResult& r);
pimple::DisplayResult display_result_from_json(const Json& j);

Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace isodisplay::io
