#include "oml/mirror_dynamics.hpp"

#include <cmath>

#include "oml/constants.hpp"
#include "oml/errors.hpp"
#include "oml/steady_state.hpp"

namespace oml {

namespace {

using constants::pi;
using ode::make_output_grid;

} // namespace

Trajectory integrate_adiabatic(double xi0, double xi_dot0, const DriveSchedule& drive,
                               const SystemParams& p, double tau0, double tau1,
                               double dt_out, const ode::Options& opts) {
    p.validate();
    drive.validate();
    const auto grid = make_output_grid(tau0, tau1, dt_out);

    const double gamma = p.mirror_damping;
    const auto rhs = [&](double tau, const std::vector<double>& y,
                         std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = -gamma * y[1] - y[0] +
                p.radiation_coupling * lorentzian_intensity(y[0], drive.at(tau), p);
    };

    Trajectory tr;
    tr.tau = grid;
    tr.xi.resize(grid.size());
    tr.xi_dot.resize(grid.size());
    tr.intensity.resize(grid.size());
    tr.drive.resize(grid.size());

    std::vector<double> y = {xi0, xi_dot0};
    ode::integrate_dopri5(rhs, y, grid, opts,
                          [&](std::size_t k, const std::vector<double>& s) {
                              tr.xi[k] = s[0];
                              tr.xi_dot[k] = s[1];
                              tr.drive[k] = drive.at(grid[k]);
                              tr.intensity[k] = lorentzian_intensity(s[0], tr.drive[k], p);
                          });
    return tr;
}

std::complex<double> steady_field(double xi, double y2, const SystemParams& p) {
    const std::complex<double> denom(
        1.0, -2.0 * pi * (p.cavity_offset + xi) / p.transmittance);
    return 2.0 * std::sqrt(y2 / p.transmittance) / denom;
}

Trajectory integrate_full(std::complex<double> field0, double xi0, double xi_dot0,
                          const DriveSchedule& drive, const SystemParams& p,
                          double tau0, double tau1, double dt_out,
                          const ode::Options& opts) {
    p.validate();
    drive.validate();
    const auto grid = make_output_grid(tau0, tau1, dt_out);

    const double kappa = p.cavity_decay;
    const double gamma = p.mirror_damping;
    const double t = p.transmittance;
    const double pump_gain = 2.0 * kappa / std::sqrt(t);

    // State: (Re X, Im X, xi, xi').
    const auto rhs = [&](double tau, const std::vector<double>& y,
                         std::vector<double>& dy) {
        const double xr = y[0], xm = y[1];
        const double detune = 2.0 * pi * (p.cavity_offset + y[2]) / t;
        const double pump = pump_gain * std::sqrt(std::max(drive.at(tau), 0.0));
        dy[0] = -kappa * (xr + detune * xm) + pump;
        dy[1] = -kappa * (xm - detune * xr);
        dy[2] = y[3];
        dy[3] = -gamma * y[3] - y[2] + p.radiation_coupling * (xr * xr + xm * xm);
    };

    Trajectory tr;
    tr.tau = grid;
    tr.xi.resize(grid.size());
    tr.xi_dot.resize(grid.size());
    tr.intensity.resize(grid.size());
    tr.drive.resize(grid.size());

    std::vector<double> y = {field0.real(), field0.imag(), xi0, xi_dot0};
    ode::integrate_dopri5(rhs, y, grid, opts,
                          [&](std::size_t k, const std::vector<double>& s) {
                              tr.xi[k] = s[2];
                              tr.xi_dot[k] = s[3];
                              tr.intensity[k] = s[0] * s[0] + s[1] * s[1];
                              tr.drive[k] = drive.at(grid[k]);
                          });
    return tr;
}

double default_switch_threshold(const SystemParams& p, double plateau_y2) {
    const BistableRegion region = bistable_region(p);
    if (!region.exists) {
        throw invalid_parameter("switching threshold needs a bistable response");
    }
    const auto roots = steady_states(plateau_y2, p);
    const double upper = roots.back().intensity;
    return std::sqrt(region.intensity_at_y2_upper * upper);
}

SwitchingResult switching_time(const DriveSchedule& drive, const SystemParams& p,
                               double threshold, double tau_end,
                               const ode::Options& opts) {
    const BistableRegion region = bistable_region(p);
    if (!region.exists || !(drive.y2_plateau > region.y2_upper)) {
        throw invalid_parameter("switching_time: plateau must sit above the bistable region");
    }
    if (!(threshold > 0.0)) {
        throw invalid_parameter("switching_time: threshold must be positive");
    }

    // Start at rest on the lower branch of the baseline drive, well before
    // the rise edge.
    const double tau0 = drive.tau_rise - 6.0 * drive.edge_width;
    const double xi0 = steady_states(drive.y2_baseline, p).front().displacement;
    const Trajectory tr =
        integrate_adiabatic(xi0, 0.0, drive, p, tau0, tau_end, 0.01, opts);

    for (std::size_t k = 0; k < tr.tau.size(); ++k) {
        if (tr.tau[k] >= drive.tau_rise && tr.intensity[k] >= threshold) {
            return {true, tr.tau[k] - drive.tau_rise};
        }
    }
    return {false, 0.0};
}

} // namespace oml
