#pragma once

#include <vector>

#include "oml/params.hpp"

namespace oml {

enum class Stability { stable, unstable };
enum class Branch { lower, middle, upper };

const char* to_string(Stability s);
const char* to_string(Branch b);

// One steady-state root of the driven cavity + mirror system.
struct SteadyBranch {
    double intensity = 0.0;     // |X_s|^2
    double displacement = 0.0;  // xi_s = beta |X_s|^2
    Stability stability = Stability::stable;
    Branch branch = Branch::lower;
};

struct BistableRegion {
    bool exists = false;
    double y2_lower = 0.0;  // drive at which the upper branch is born
    double y2_upper = 0.0;  // drive at which the lower branch dies
    double intensity_at_y2_lower = 0.0;  // saddle intensity I+ (upper-branch onset)
    double intensity_at_y2_upper = 0.0;  // saddle intensity I- (lower-branch end)
};

// Intracavity response without mirror feedback:
//   4 Y^2 / T / (1 + 4 pi^2 (delta + xi)^2 / T^2).
double lorentzian_intensity(double xi, double y2, const SystemParams& p);

// All real nonnegative roots I of
//   I [1 + 4 pi^2 (delta + beta I)^2 / T^2] = 4 Y^2 / T,
// i.e. of the cubic
//   4 pi^2 beta^2 I^3 + 8 pi^2 delta beta I^2 + (T^2 + 4 pi^2 delta^2) I = 4 Y^2 T,
// sorted ascending, with stability from the slope of the drive-balance
// function (positive slope -> stable). One or three entries; the degenerate
// double root at an exact turning point is reported once, unstable.
std::vector<SteadyBranch> steady_states(double y2, const SystemParams& p);

// Exact inverse map: the unique drive Y^2 putting a steady state at intensity I.
double drive_for_intensity(double intensity, const SystemParams& p);

// Turning points of the S-curve, from the vanishing of d(Y^2)/dI.
BistableRegion bistable_region(const SystemParams& p);

// Effective mirror potential, V(0) = 0:
//   V(xi) = xi^2/2
//         - (2 beta Y^2 / pi) [atan(2 pi (delta+xi)/T) - atan(2 pi delta/T)].
// Stationary points coincide with steady-state displacements; local minima
// are the stable branches.
double effective_potential(double xi, double y2, const SystemParams& p);
double potential_gradient(double xi, double y2, const SystemParams& p);
double potential_curvature(double xi, double y2, const SystemParams& p);

struct DepthCrossing {
    double y2 = 0.0;        // drive at which the branch passes v0_crit
    double intensity = 0.0; // = v0_crit
    Branch branch = Branch::lower;
    Stability stability = Stability::stable;
};

// Drive intensities at which the S-curve crosses |X_s|^2 = v0_crit (the
// critical lattice depth in recoil units, since V0/E_r = |X|^2). Every
// intensity maps to exactly one drive; the branch label records where on the
// S-curve the crossing sits. Crossings beyond y2_max are dropped, so the
// list may be empty.
std::vector<DepthCrossing> critical_depth_marker(const SystemParams& p, double v0_crit,
                                                 double y2_max = 1e300);

} // namespace oml
