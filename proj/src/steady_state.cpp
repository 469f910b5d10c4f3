#include "oml/steady_state.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "oml/constants.hpp"
#include "oml/cubic.hpp"
#include "oml/errors.hpp"

namespace oml {

namespace {

using constants::pi;

// Drive-balance function S(I) = I (T^2 + 4 pi^2 (delta + beta I)^2) - 4 Y^2 T.
// Roots of S are the steady intensities; sign of S' decides stability.
double balance(double i, double y2, const SystemParams& p) {
    const double u = p.cavity_offset + p.radiation_coupling * i;
    return i * (p.transmittance * p.transmittance + 4.0 * pi * pi * u * u) -
           4.0 * y2 * p.transmittance;
}

double balance_slope(double i, const SystemParams& p) {
    const double u = p.cavity_offset + p.radiation_coupling * i;
    return p.transmittance * p.transmittance + 4.0 * pi * pi * u * u +
           8.0 * pi * pi * p.radiation_coupling * i * u;
}

} // namespace

const char* to_string(Stability s) {
    return s == Stability::stable ? "stable" : "unstable";
}

const char* to_string(Branch b) {
    switch (b) {
        case Branch::lower: return "lower";
        case Branch::middle: return "middle";
        default: return "upper";
    }
}

double lorentzian_intensity(double xi, double y2, const SystemParams& p) {
    const double u = 2.0 * pi * (p.cavity_offset + xi) / p.transmittance;
    return 4.0 * y2 / p.transmittance / (1.0 + u * u);
}

double drive_for_intensity(double intensity, const SystemParams& p) {
    const double u = p.cavity_offset + p.radiation_coupling * intensity;
    return intensity *
           (p.transmittance * p.transmittance + 4.0 * pi * pi * u * u) /
           (4.0 * p.transmittance);
}

std::vector<SteadyBranch> steady_states(double y2, const SystemParams& p) {
    p.validate();
    if (y2 < 0.0) throw invalid_parameter("steady_states: drive intensity must be >= 0");

    const double t = p.transmittance;
    const double beta = p.radiation_coupling;
    const double delta = p.cavity_offset;

    std::array<double, 3> roots{};
    std::array<int, 3> mults{};
    int n = 0;
    if (beta == 0.0) {
        // Rigid mirror: plain Lorentzian response, single root.
        roots[0] = 4.0 * y2 * t / (t * t + 4.0 * pi * pi * delta * delta);
        mults[0] = 1;
        n = 1;
    } else {
        n = solve_cubic_real(4.0 * pi * pi * beta * beta,
                             8.0 * pi * pi * delta * beta,
                             t * t + 4.0 * pi * pi * delta * delta,
                             -4.0 * y2 * t, roots, mults);
    }

    const BistableRegion region = bistable_region(p);

    std::vector<SteadyBranch> out;
    for (int k = 0; k < n; ++k) {
        double i = roots[k];
        if (i < 0.0) {
            if (i > -1e-12 * std::max(1.0, y2)) i = 0.0; else continue;
        }
        // One Newton polish on the balance function.
        const double slope = balance_slope(i, p);
        if (slope != 0.0) {
            const double corr = balance(i, y2, p) / slope;
            if (std::isfinite(corr)) i -= corr;
            if (i < 0.0) i = 0.0;
        }
        SteadyBranch b;
        b.intensity = i;
        b.displacement = beta * i;
        b.stability = (mults[k] == 1 && balance_slope(i, p) > 0.0)
                          ? Stability::stable
                          : Stability::unstable;  // turning points count as unstable
        out.push_back(b);
    }
    std::sort(out.begin(), out.end(),
              [](const SteadyBranch& a, const SteadyBranch& b) {
                  return a.intensity < b.intensity;
              });

    // Branch labels from the S-curve topology.
    if (out.size() == 3) {
        out[0].branch = Branch::lower;
        out[1].branch = Branch::middle;
        out[2].branch = Branch::upper;
    } else {
        for (auto& b : out) {
            if (!region.exists) {
                b.branch = Branch::lower;
            } else if (b.intensity <= region.intensity_at_y2_upper) {
                b.branch = Branch::lower;
            } else if (b.intensity >= region.intensity_at_y2_lower) {
                b.branch = Branch::upper;
            } else {
                b.branch = Branch::middle;
            }
        }
    }
    return out;
}

BistableRegion bistable_region(const SystemParams& p) {
    p.validate();
    BistableRegion r;
    const double t = p.transmittance;
    const double beta = p.radiation_coupling;
    const double delta = p.cavity_offset;
    if (beta <= 0.0 || delta >= 0.0) return r;

    // dY^2/dI = 0  <=>  12 pi^2 b^2 I^2 + 16 pi^2 d b I + T^2 + 4 pi^2 d^2 = 0;
    // a real positive pair needs 4 pi^2 d^2 > 3 T^2 (red-detuned enough).
    const double disc = 4.0 * pi * pi * delta * delta - 3.0 * t * t;
    if (disc <= 0.0) return r;

    const double s = std::sqrt(disc) / (6.0 * pi * beta);
    const double center = -2.0 * delta / (3.0 * beta);
    const double i_minus = center - s;  // end of the lower branch
    const double i_plus = center + s;   // onset of the upper branch
    if (i_minus <= 0.0) return r;

    r.exists = true;
    r.intensity_at_y2_upper = i_minus;
    r.intensity_at_y2_lower = i_plus;
    r.y2_upper = drive_for_intensity(i_minus, p);
    r.y2_lower = drive_for_intensity(i_plus, p);
    return r;
}

double effective_potential(double xi, double y2, const SystemParams& p) {
    const double t = p.transmittance;
    const double a = 2.0 * pi / t;
    const double pref = 2.0 * p.radiation_coupling * y2 / pi;
    return 0.5 * xi * xi -
           pref * (std::atan(a * (p.cavity_offset + xi)) - std::atan(a * p.cavity_offset));
}

double potential_gradient(double xi, double y2, const SystemParams& p) {
    return xi - p.radiation_coupling * lorentzian_intensity(xi, y2, p);
}

double potential_curvature(double xi, double y2, const SystemParams& p) {
    const double t = p.transmittance;
    const double u = 2.0 * pi * (p.cavity_offset + xi) / t;
    const double denom = 1.0 + u * u;
    // d/dxi of the radiation-pressure force, with the chain factor 2 pi / T.
    const double dforce = -p.radiation_coupling * 4.0 * y2 / t * 2.0 * u *
                          (2.0 * pi / t) / (denom * denom);
    return 1.0 - dforce;
}

std::vector<DepthCrossing> critical_depth_marker(const SystemParams& p, double v0_crit,
                                                 double y2_max) {
    p.validate();
    if (v0_crit < 0.0) throw invalid_parameter("critical_depth_marker: depth must be >= 0");

    DepthCrossing c;
    c.intensity = v0_crit;
    c.y2 = drive_for_intensity(v0_crit, p);

    const BistableRegion region = bistable_region(p);
    if (!region.exists || v0_crit <= region.intensity_at_y2_upper) {
        c.branch = Branch::lower;
    } else if (v0_crit >= region.intensity_at_y2_lower) {
        c.branch = Branch::upper;
    } else {
        c.branch = Branch::middle;
    }
    c.stability = balance_slope(v0_crit, p) > 0.0 ? Stability::stable : Stability::unstable;

    std::vector<DepthCrossing> out;
    if (c.y2 <= y2_max) out.push_back(c);
    return out;
}

} // namespace oml
