#pragma once

// Text format for solutions over a known model:
//
//   H <face> <bitstring of length L>
//   G <level> <face> <bitstring of length |K|>
//
// H lines come first in face order, then G lines ordered by (level, face).
// '#' comments and blank lines are ignored.

#include "ptor/model_io.hpp"
#include "ptor/solve.hpp"

#include <string>
#include <string_view>

namespace ptor {

std::string print_solution(const TwistedModel& m, const Solution& f);
/// Parses and checks that each entry is an element of the right torsor.
Solution parse_solution(const TwistedModel& m, std::string_view text);

}  // namespace ptor
