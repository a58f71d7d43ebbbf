#pragma once
// JSON forms of posets, coloured posets, bundles and the reports built from them.
//
//   poset:          {"elements":[...], "relations":[["a","b"],...]}
//   coloured poset: {"poset":..., "ring":"q", "dims":{"a":2,...}, "maps":{"a<b":[[...]]},
//                    "degrees":{"a":[...]}}            (degrees optional)
//   bundle:         {"base":..., "fibres":{"x":<coloured poset>},
//                    "morphisms":{"x<z":{"f":{"y":"y'"}, "tau":{"y":[[...]]}}}}
//
// Matrix entries are integers or strings like "-3/4".

#include <string>

#include "json.hpp"

#include "colposet/khovanov.hpp"

namespace colposet {

using Json = nlohmann::ordered_json;

/// Reads a file into a string; InputError when it cannot be opened.
std::string read_text_file(const std::string& path);
/// Parses JSON text; InputError on syntax errors.
Json parse_json_text(const std::string& text);

Poset poset_from_json(const Json& j);
Json poset_to_json(const Poset& p);

ExactMatrix matrix_from_json(const Json& j, const CoeffRing& ring, std::size_t rows, std::size_t cols);
Json matrix_to_json(const ExactMatrix& m);
Json scalar_to_json(const Scalar& s);

/// ring_override, when nonempty, replaces the "ring" field.
ColouredPoset coloured_from_json(const Json& j, const std::string& ring_override = "");
Json coloured_to_json(const ColouredPoset& cp);

Bundle bundle_from_json(const Json& j, const std::string& ring_override = "");
Json bundle_to_json(const Bundle& b);

Json homology_to_json(const HomologySummary& h);
Json page_to_json(const Page& p);
Json cells_to_json(const std::map<Cell, std::size_t>& cells);
Json bigraded_to_json(const BigradedHomology& h);
Json trigraded_to_json(const std::map<TriCell, std::size_t>& t);

} // namespace colposet
