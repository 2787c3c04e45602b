#pragma once

#include <string>

#include "fglab/addops.hpp"
#include "fglab/gamma.hpp"

#include "json.hpp"

namespace fglab {

using nlohmann::json;

// Series: {"vars": [...], "cap": N, "terms": [{"exp": [...], "coef": "num/den"}]},
// terms lexicographic by exponent vector.
json series_to_json(const Series& s);
Series series_from_json(const json& j);

// FGL spec: {"p": 2, "kind": "morava", "n": 1, "a": ["1","1"]} |
// {"p":, "kind": "multiplicative", "beta": "-1"} |
// {"p":, "kind": "log", "coeffs": [["1","1"], ["2","1/2"], ...]} |
// {"p":, "kind": "additive"}
FormalGroupLaw fgl_from_json(const json& j, int cap);
json fgl_show_json(const FormalGroupLaw& F);

// lambda table: {"lead": i, "p": p, "n": n, "lambda": {"0": "num/den", ...},
// "caps": {"arity": L, "degree": N}, "leading_valuation": e}
json operation_to_json(const DiagonalOperation& op);

// Variety: {"p":2, "n":1, "cells":[{"name","codim","grading","subvariety"}],
// "products":[{"a","b","lead":{"coef","cell"},"tail":"unknown"|"none"}], "iso_flag": bool}
CellularModule module_from_json(const json& j);
json module_to_json(const CellularModule& mod);

// Report: per-degree {"free_rank": r, "torsion": ["2", ...], "generators_used": [...]}
json reports_to_json(const std::vector<DegreeReport>& reports);

json load_json_file(const std::string& path);

}  // namespace fglab
