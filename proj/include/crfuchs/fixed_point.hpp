#pragma once

#include <vector>

#include "crfuchs/jet.hpp"

namespace crfuchs {

/// Solves y = G(x, y) order by order for y(x) with y(0) = 0.
///
/// The n jets of G live over a combined variable list whose last `ny`
/// variables are the unknowns. Requires I - dG/dy(0,0) invertible; the
/// residual y - G(x, y) is replayed after the solve and must vanish modulo
/// the truncation. The returned jets live over the same combined list with
/// unknown-variable degrees zero.
std::vector<Jet> solve_fixed_point(const std::vector<Jet>& G, int ny);

} // namespace crfuchs
