#pragma once

#include <array>

namespace oml {

// Real roots of a*x^3 + b*x^2 + c*x + d = 0, ascending, multiplicities summed
// into the count only once per distinct root. Degenerate leading coefficients
// fall back to the quadratic / linear case. Returns the number of distinct
// real roots written to `roots` (0..3); `mults` receives the geometric
// multiplicity of each.
int solve_cubic_real(double a, double b, double c, double d,
                     std::array<double, 3>& roots, std::array<int, 3>& mults);

} // namespace oml
