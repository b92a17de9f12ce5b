#pragma once

#include <string>

#include "steklov/boundary.hpp"
#include "steklov/progressions.hpp"
#include "steklov/symbol.hpp"

// Single-header json lives in vendor/.
#include "json.hpp"

namespace steklov {

using json = nlohmann::json;

/// Boundary data file:
/// {"components":[{"g11":{"re":[...],"im":[...]},"h1":...,"w1":...,"q":...}],
///  "meta":{...}}
/// Coefficient arrays run over n = -N..N; the loader rejects arrays breaking
/// conjugate symmetry beyond 1e-12.
json boundary_to_json(const SurfaceBoundary& sb);
SurfaceBoundary boundary_from_json(const json& j);

json periodic_fn_to_json(const PeriodicFn& f);
PeriodicFn periodic_fn_from_json(const json& j, bool require_real = true);

/// {"m": real, "components":[{"order": r, "plus": coeffs, "minus": coeffs}]}
json graded_symbol_to_json(const GradedSymbol& s);
GradedSymbol graded_symbol_from_json(const json& j);

/// JSON list of {"a":"p/q","b":"r/s","unit":optional}; rationals as strings.
json genmultiset_to_json(const GenMultiset& R);
GenMultiset genmultiset_from_json(const json& j);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

}  // namespace steklov
