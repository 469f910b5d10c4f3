#include <doctest.h>

#include <array>
#include <cmath>

#include "oml/cubic.hpp"

using oml::solve_cubic_real;

namespace {

// Deterministic uniform draws in [lo, hi].
struct Lcg {
    unsigned long long s = 987654321;
    double operator()(double lo, double hi) {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        const double u = static_cast<double>((s >> 11) & 0xfffffffffffull) /
                         static_cast<double>(1ull << 44);
        return lo + (hi - lo) * u;
    }
};

double eval(double a, double b, double c, double d, double x) {
    return ((a * x + b) * x + c) * x + d;
}

} // namespace

TEST_CASE("known factorizations") {
    std::array<double, 3> r{};
    std::array<int, 3> m{};

    SUBCASE("(x-1)(x-2)(x-3)") {
        CHECK(solve_cubic_real(1, -6, 11, -6, r, m) == 3);
        CHECK(r[0] == doctest::Approx(1.0));
        CHECK(r[1] == doctest::Approx(2.0));
        CHECK(r[2] == doctest::Approx(3.0));
    }
    SUBCASE("x^3 + x = 0 has one real root") {
        CHECK(solve_cubic_real(1, 0, 1, 0, r, m) == 1);
        CHECK(r[0] == doctest::Approx(0.0));
    }
    SUBCASE("triple root (x-2)^3") {
        CHECK(solve_cubic_real(1, -6, 12, -8, r, m) == 1);
        CHECK(r[0] == doctest::Approx(2.0));
        CHECK(m[0] == 3);
    }
    SUBCASE("double root (x-1)^2 (x-4)") {
        CHECK(solve_cubic_real(1, -6, 9, -4, r, m) == 2);
        CHECK(r[0] == doctest::Approx(1.0));
        CHECK(m[0] == 2);
        CHECK(r[1] == doctest::Approx(4.0));
        CHECK(m[1] == 1);
    }
    SUBCASE("degenerate quadratic and linear") {
        CHECK(solve_cubic_real(0, 1, -3, 2, r, m) == 2);  // (x-1)(x-2)
        CHECK(r[0] == doctest::Approx(1.0));
        CHECK(r[1] == doctest::Approx(2.0));
        CHECK(solve_cubic_real(0, 0, 2, -4, r, m) == 1);
        CHECK(r[0] == doctest::Approx(2.0));
        CHECK(solve_cubic_real(0, 0, 0, 1, r, m) == 0);
    }
}

TEST_CASE("random cubics: roots satisfy the polynomial and are complete") {
    Lcg rng;
    std::array<double, 3> r{};
    std::array<int, 3> m{};
    for (int trial = 0; trial < 500; ++trial) {
        // Build from known roots so completeness is checkable.
        const double x1 = rng(-10, 10), x2 = rng(-10, 10), x3 = rng(-10, 10);
        const double a = rng(0.1, 3.0);
        const double b = -a * (x1 + x2 + x3);
        const double c = a * (x1 * x2 + x1 * x3 + x2 * x3);
        const double d = -a * x1 * x2 * x3;

        const int n = solve_cubic_real(a, b, c, d, r, m);
        CHECK(n == 3);
        for (int k = 0; k < n; ++k) {
            // Residual scaled by the polynomial's magnitude near the root.
            const double scale = std::abs(a) * (std::abs(r[k]) + 1.0) *
                                 (std::abs(r[k]) + 1.0) * (std::abs(r[k]) + 1.0);
            CHECK(std::abs(eval(a, b, c, d, r[k])) < 1e-9 * scale);
        }
        CHECK(r[0] <= r[1]);
        CHECK(r[1] <= r[2]);
    }
}
