#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace oml::ode {

// Right-hand side of y' = f(t, y); dydt has the same length as y.
using Rhs = std::function<void(double t, const std::vector<double>& y,
                               std::vector<double>& dydt)>;

struct Options {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_init = 0.0;          // 0: choose automatically
    double h_max = 0.0;           // 0: span of the current interval
    std::size_t max_steps = 50'000'000;
};

// Advances y across t_grid with an embedded Dormand-Prince 5(4) pair,
// landing exactly on every grid time; observer(k, y) fires at t_grid[k],
// including k = 0 before the first step. Throws numerical_error with the
// offending time on step-size underflow.
void integrate_dopri5(const Rhs& f, std::vector<double>& y,
                      std::span<const double> t_grid, const Options& opts,
                      const std::function<void(std::size_t, const std::vector<double>&)>& observer);

// Convenience single-interval form.
void integrate_dopri5(const Rhs& f, std::vector<double>& y, double t0, double t1,
                      const Options& opts = {});

// Classical fixed-step RK4, used as a cross-check for the adaptive path.
void integrate_rk4(const Rhs& f, std::vector<double>& y, double t0, double t1,
                   double h);

// Uniform grid from t0 to t1 with step dt; the final point lands exactly on
// t1, and a sliver shorter than dt/2 is merged into the last interval.
std::vector<double> make_output_grid(double t0, double t1, double dt);

} // namespace oml::ode
