#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oml/constants.hpp"
#include "oml/params.hpp"
#include "oml/steady_state.hpp"

using namespace oml;

namespace {

SystemParams paper_params() {
    SystemParams p;
    p.transmittance = 0.01;
    p.cavity_offset = -0.0035;
    p.radiation_coupling = 0.0002;
    p.mirror_damping = 0.5;
    p.cavity_decay = 100.0;
    return p;
}

// Independent root finder: sign-change scan of the drive-balance function
//   S(I) = I (T^2 + 4 pi^2 (delta + beta I)^2) - 4 Y^2 T
// over I in [0, i_max], refined by bisection. No algebra shared with the
// closed-form path.
std::vector<double> scan_roots(double y2, const SystemParams& p, double i_max,
                               double step) {
    const auto s = [&](double i) {
        const double u = p.cavity_offset + p.radiation_coupling * i;
        return i * (p.transmittance * p.transmittance +
                    4.0 * constants::pi * constants::pi * u * u) -
               4.0 * y2 * p.transmittance;
    };
    std::vector<double> roots;
    if (y2 == 0.0) {
        roots.push_back(0.0);
        return roots;
    }
    double prev = s(0.0);
    for (double i = step; i <= i_max; i += step) {
        const double cur = s(i);
        if (prev == 0.0) {
            roots.push_back(i - step);
        } else if (prev < 0.0 && cur >= 0.0) {
            double lo = i - step, hi = i;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                (s(mid) < 0.0 ? lo : hi) = mid;
            }
            roots.push_back(0.5 * (lo + hi));
        } else if (prev > 0.0 && cur <= 0.0) {
            double lo = i - step, hi = i;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                (s(mid) > 0.0 ? lo : hi) = mid;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev = cur;
    }
    return roots;
}

struct Lcg {
    unsigned long long s = 424242;
    double operator()(double lo, double hi) {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        const double u = static_cast<double>((s >> 11) & 0xfffffffffffull) /
                         static_cast<double>(1ull << 44);
        return lo + (hi - lo) * u;
    }
};

} // namespace

TEST_CASE("no drive: single stable root at the origin") {
    const auto roots = steady_states(0.0, paper_params());
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].intensity == doctest::Approx(0.0));
    CHECK(roots[0].displacement == doctest::Approx(0.0));
    CHECK(roots[0].stability == Stability::stable);
}

TEST_CASE("root counts across the bistable window") {
    const SystemParams p = paper_params();
    CHECK(steady_states(0.030, p).size() == 1);
    CHECK(steady_states(0.044, p).size() == 3);
    CHECK(steady_states(0.060, p).size() == 1);
}

TEST_CASE("roots at Y2 = 0.044 match the scan oracle and frozen values") {
    const SystemParams p = paper_params();
    const auto roots = steady_states(0.044, p);
    const auto oracle = scan_roots(0.044, p, 50.0, 1e-4);
    REQUIRE(roots.size() == 3);
    REQUIRE(oracle.size() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(roots[k].intensity == doctest::Approx(oracle[k]).epsilon(1e-6));
        // xi_s = beta |X_s|^2 exactly
        CHECK(roots[k].displacement ==
              doctest::Approx(p.radiation_coupling * roots[k].intensity).epsilon(1e-14));
    }
    // Frozen from the oracle.
    CHECK(roots[0].intensity == doctest::Approx(5.18308).epsilon(1e-4));
    CHECK(roots[1].intensity == doctest::Approx(12.21957).epsilon(1e-4));
    CHECK(roots[2].intensity == doctest::Approx(17.59735).epsilon(1e-4));

    CHECK(roots[0].stability == Stability::stable);
    CHECK(roots[1].stability == Stability::unstable);  // middle branch
    CHECK(roots[2].stability == Stability::stable);
    CHECK(roots[0].branch == Branch::lower);
    CHECK(roots[1].branch == Branch::middle);
    CHECK(roots[2].branch == Branch::upper);
}

TEST_CASE("every root satisfies the steady-state relation to 1e-10") {
    const SystemParams p = paper_params();
    for (double y2 : {0.01, 0.03, 0.0412, 0.044, 0.0485, 0.06, 0.2}) {
        for (const auto& b : steady_states(y2, p)) {
            if (b.intensity == 0.0) continue;
            const double rhs = lorentzian_intensity(b.displacement, y2, p);
            CHECK(std::abs(b.intensity - rhs) / b.intensity < 1e-10);
        }
    }
}

TEST_CASE("agreement with the scan oracle over random parameter draws") {
    Lcg rng;
    int three_root_cases = 0;
    for (int trial = 0; trial < 100; ++trial) {
        SystemParams p;
        p.transmittance = rng(0.004, 0.05);
        p.cavity_offset = rng(-0.01, 0.002);
        p.radiation_coupling = rng(1e-5, 1e-3);
        const double y2 = rng(0.0, 0.1);

        const double i_max = 4.0 * y2 / p.transmittance + 1.0;
        const double step = std::min(1e-4 * i_max, 1e-3);
        const auto oracle = scan_roots(y2, p, i_max, step);
        const auto roots = steady_states(y2, p);

        REQUIRE(roots.size() == oracle.size());
        if (roots.size() == 3) ++three_root_cases;
        for (std::size_t k = 0; k < roots.size(); ++k) {
            CHECK(roots[k].intensity ==
                  doctest::Approx(oracle[k]).epsilon(1e-6).scale(1.0));
        }
        CHECK((roots.size() == 1 || roots.size() == 3));
    }
    CHECK(three_root_cases > 0);  // the draw box does reach the bistable regime
}

TEST_CASE("turning points bracket the figure-3 drives") {
    const SystemParams p = paper_params();
    const BistableRegion r = bistable_region(p);
    REQUIRE(r.exists);
    CHECK(r.y2_lower > 0.03);
    CHECK(r.y2_lower < 0.044);
    CHECK(r.y2_upper > 0.044);
    CHECK(r.y2_upper < 0.06);

    // Frozen from the dense transition scan below.
    CHECK(r.y2_lower == doctest::Approx(0.041172791).epsilon(1e-6));
    CHECK(r.y2_upper == doctest::Approx(0.048505966).epsilon(1e-6));
}

TEST_CASE("turning points agree with a dense root-count scan") {
    const SystemParams p = paper_params();
    const BistableRegion r = bistable_region(p);
    REQUIRE(r.exists);

    // Walk Y^2 and detect the 1 <-> 3 transitions.
    double first_three = 0.0, last_three = 0.0;
    const double dy = 1e-5;
    for (double y2 = 0.02; y2 <= 0.07; y2 += dy) {
        if (steady_states(y2, p).size() == 3) {
            if (first_three == 0.0) first_three = y2;
            last_three = y2;
        }
    }
    REQUIRE(first_three > 0.0);
    CHECK(std::abs(r.y2_lower - first_three) < 2.0 * dy);
    CHECK(std::abs(r.y2_upper - last_three) < 2.0 * dy);
}

TEST_CASE("rigid mirror has no bistable region") {
    SystemParams p = paper_params();
    p.radiation_coupling = 0.0;
    CHECK_FALSE(bistable_region(p).exists);
    CHECK(steady_states(0.05, p).size() == 1);

    // Positive offset cannot fold the response either.
    p = paper_params();
    p.cavity_offset = 0.0035;
    CHECK_FALSE(bistable_region(p).exists);

    // Too little detuning: 4 pi^2 delta^2 < 3 T^2.
    p = paper_params();
    p.cavity_offset = -0.002;
    CHECK_FALSE(bistable_region(p).exists);
}

TEST_CASE("effective potential: no drive is a pure parabola") {
    const SystemParams p = paper_params();
    for (double xi : {-0.002, 0.0, 0.001, 0.004}) {
        CHECK(effective_potential(xi, 0.0, p) == doctest::Approx(0.5 * xi * xi));
    }
    CHECK(effective_potential(0.0, 0.044, p) == doctest::Approx(0.0));  // V(0) = 0
}

TEST_CASE("potential stationary points coincide with steady states") {
    const SystemParams p = paper_params();
    for (double y2 : {0.03, 0.044, 0.06}) {
        const auto roots = steady_states(y2, p);
        for (const auto& b : roots) {
            CHECK(std::abs(potential_gradient(b.displacement, y2, p)) < 1e-8);
            const double curv = potential_curvature(b.displacement, y2, p);
            if (b.stability == Stability::stable) {
                CHECK(curv > 0.0);
            } else {
                CHECK(curv < 0.0);
            }
        }

        // Count the potential's own stationary points on a fine grid; they
        // must match the root set one for one (within 1e-6).
        std::vector<double> stationary;
        const double lo = -0.001, hi = 0.006, h = 1e-7;
        double prev = potential_gradient(lo, y2, p);
        for (double xi = lo + h; xi <= hi; xi += h) {
            const double cur = potential_gradient(xi, y2, p);
            if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) {
                stationary.push_back(xi - 0.5 * h);
            }
            prev = cur;
        }
        REQUIRE(stationary.size() == roots.size());
        for (std::size_t k = 0; k < roots.size(); ++k) {
            CHECK(std::abs(stationary[k] - roots[k].displacement) < 1e-6);
        }
    }
}

TEST_CASE("minima and maxima counts across figure-3 drives") {
    const SystemParams p = paper_params();
    // (minima, maxima) = (1,0), (2,1), (1,0)
    const auto count = [&](double y2) {
        int minima = 0, maxima = 0;
        for (const auto& b : steady_states(y2, p)) {
            (potential_curvature(b.displacement, y2, p) > 0.0 ? minima : maxima)++;
        }
        return std::pair<int, int>(minima, maxima);
    };
    CHECK(count(0.03) == std::pair<int, int>(1, 0));
    CHECK(count(0.044) == std::pair<int, int>(2, 1));
    CHECK(count(0.06) == std::pair<int, int>(1, 0));
}

TEST_CASE("stable-branch intensity is nondecreasing in the drive") {
    const SystemParams p = paper_params();
    double prev_lower = -1.0, prev_upper = -1.0;
    for (double y2 = 0.0; y2 <= 0.08; y2 += 2e-4) {
        for (const auto& b : steady_states(y2, p)) {
            if (b.stability != Stability::stable) continue;
            if (b.branch == Branch::lower) {
                CHECK(b.intensity >= prev_lower - 1e-12);
                prev_lower = b.intensity;
            } else if (b.branch == Branch::upper) {
                CHECK(b.intensity >= prev_upper - 1e-12);
                prev_upper = b.intensity;
            }
        }
    }
}

TEST_CASE("critical depth marker for the phase boundary") {
    const SystemParams p = paper_params();
    const BistableRegion r = bistable_region(p);

    const auto marks = critical_depth_marker(p, 10.8);
    REQUIRE(marks.size() == 1);
    // Frozen: drive at which the S-curve passes 10.8 E_r.
    CHECK(marks[0].y2 == doctest::Approx(0.046139616).epsilon(1e-6));
    // The crossing lies inside the bistable window, on the unstable middle
    // branch: every stable lower-branch state is shallower (superfluid) and
    // every stable upper-branch state deeper (Mott insulator).
    CHECK(marks[0].y2 > r.y2_lower);
    CHECK(marks[0].y2 < r.y2_upper);
    CHECK(marks[0].branch == Branch::middle);
    CHECK(marks[0].stability == Stability::unstable);
    CHECK(r.intensity_at_y2_upper < 10.8);   // lower branch tops out below
    CHECK(r.intensity_at_y2_lower > 10.8);   // upper branch starts above

    SUBCASE("zero depth crosses at zero drive") {
        const auto zero = critical_depth_marker(p, 0.0);
        REQUIRE(zero.size() == 1);
        CHECK(zero[0].y2 == doctest::Approx(0.0));
        CHECK(zero[0].branch == Branch::lower);
    }
    SUBCASE("depth beyond the scanned drive range gives an empty list") {
        CHECK(critical_depth_marker(p, 1e4, 0.07).empty());
    }
}

TEST_CASE("drive inversion is consistent with the root finder") {
    const SystemParams p = paper_params();
    for (double i : {0.5, 5.0, 10.8, 17.0, 30.0}) {
        const double y2 = drive_for_intensity(i, p);
        const auto roots = steady_states(y2, p);
        const bool found = std::any_of(roots.begin(), roots.end(), [&](const auto& b) {
            return std::abs(b.intensity - i) < 1e-8 * std::max(1.0, i);
        });
        CHECK(found);
    }
}
