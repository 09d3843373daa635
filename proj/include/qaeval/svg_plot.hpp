#pragma once

#include <string>
#include <vector>

#include "qaeval/serialize.hpp"

namespace qaeval {

// Self-contained SVG: step curves drawn as horizontal-then-vertical segments,
// the dashed theoretical-best line max(0, E0 - x), and the constant
// starting-error line. Presentation only; deterministic within one toolkit
// version but excluded from cross-version byte-identity guarantees.
std::string render_edc_svg(const std::vector<NamedCurve>& curves, double starting_error,
                           const std::string& title);

} // namespace qaeval
