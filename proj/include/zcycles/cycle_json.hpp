#pragma once

#include "zcycles/cycle.hpp"

#include <json.hpp>

namespace zcycles {

// {"rank": r, "terms": [{"point": [ints], "coeff": "p/q"}]}, terms in
// lexicographic point order. Coordinates outside the int64 range are written
// as decimal strings.
nlohmann::json cycle_to_json(const Cycle& c);
Cycle cycle_from_json(const nlohmann::json& j);

}  // namespace zcycles
