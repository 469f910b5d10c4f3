#pragma once

#include <complex>
#include <vector>

#include "oml/drive.hpp"
#include "oml/ode.hpp"
#include "oml/params.hpp"

namespace oml {

// Time series of the driven mirror (and cavity field) in dimensionless units.
struct Trajectory {
    std::vector<double> tau;
    std::vector<double> xi;
    std::vector<double> xi_dot;
    std::vector<double> intensity;  // |X(tau)|^2
    std::vector<double> drive;      // Y^2(tau)
};

// Adiabatically eliminated cavity: integrates
//   xi'' + gamma xi' + xi = beta * 4 Y^2(tau)/T / (1 + 4 pi^2 (delta+xi)^2/T^2)
// and records |X|^2 from the instantaneous Lorentzian response.
Trajectory integrate_adiabatic(double xi0, double xi_dot0, const DriveSchedule& drive,
                               const SystemParams& p, double tau0, double tau1,
                               double dt_out, const ode::Options& opts = {});

// Full field + mirror system:
//   dX/dtau = -kappa [1 - i (2 pi / T)(delta + xi)] X + (2 kappa / sqrt(T)) Y(tau)
//   xi''    = -gamma xi' - xi + beta |X|^2
Trajectory integrate_full(std::complex<double> field0, double xi0, double xi_dot0,
                          const DriveSchedule& drive, const SystemParams& p,
                          double tau0, double tau1, double dt_out,
                          const ode::Options& opts = {});

// Steady intracavity field at fixed displacement (full-model initial condition).
std::complex<double> steady_field(double xi, double y2, const SystemParams& p);

struct SwitchingResult {
    bool switched = false;
    double tau_switch = 0.0;  // measured from the plateau onset (tau_rise)
};

// Default threshold between the branches at the plateau drive: the geometric
// mean of the saddle intensity where the lower branch vanished and the
// upper-branch steady intensity.
double default_switch_threshold(const SystemParams& p, double plateau_y2);

// First time after the plateau onset at which |X|^2 crosses `threshold`
// upward. Requires the plateau to sit above the bistable region.
SwitchingResult switching_time(const DriveSchedule& drive, const SystemParams& p,
                               double threshold, double tau_end,
                               const ode::Options& opts = {});

} // namespace oml
