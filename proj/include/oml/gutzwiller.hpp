#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "oml/ode.hpp"

namespace oml {

// Per-site Fock amplitudes of the product ansatz. The lattice is uniform, so
// one representative site carries the whole state.
struct GutzwillerState {
    std::vector<std::complex<double>> f;  // f[0..n_max]

    int n_max() const { return static_cast<int>(f.size()) - 1; }
    double norm2() const;
    double filling() const;                        // <n>
    std::complex<double> order_parameter() const;  // sum sqrt(n+1) f_n* f_{n+1}
};

// Mean-field energy per site: -2 J |<a>|^2 + (U/2) sum n(n-1) |f_n|^2.
double mean_field_energy(const GutzwillerState& s, double j, double u);

// Single-site mean-field critical 2J/U at unit filling, 3 - 2 sqrt(2).
inline constexpr double mean_field_critical_ratio = 0.17157287525380990398;

struct GroundStateOptions {
    double tol = 1e-12;        // order-parameter convergence
    long max_iter = 200;       // bracket-scan cap
    double seed = 0.1;         // first probe away from the <a> = 0 fixed point
    double filling_tol = 1e-10;
};

// Self-consistent ground state of h = -2J(<a>* a + <a> a+) + (U/2) n(n-1) - mu n,
// with mu bisected until <n> hits the requested filling. Global phase fixed so
// <a> is real and >= 0. Throws numerical_error when the filling is unreachable
// at the given cutoff. mu_out, when given, receives the chemical potential.
GutzwillerState ground_state(double j, double u, double filling = 1.0, int n_max = 10,
                             const GroundStateOptions& opts = {},
                             double* mu_out = nullptr);

// 2J/U at which the static order parameter turns on at fixed filling,
// located by bisection between ratio_lo and ratio_hi.
double critical_ratio_sweep(double filling = 1.0, int n_max = 10,
                            double ratio_lo = 0.10, double ratio_hi = 0.30,
                            double tol = 1e-4);

enum class LatticePhase { superfluid, mott };

struct OrderParameterTrace {
    std::vector<double> tau;
    std::vector<std::complex<double>> a;
    std::vector<double> abs_a;
    std::vector<double> ratio;    // 2 J(tau) / U(tau)
    std::vector<double> filling;
    std::vector<double> norm2;
    std::vector<LatticePhase> phase;  // ratio compared with the critical value
};

using Schedule = std::function<double(double)>;

// Integrates the self-consistent amplitude equations
//   i df_n/dtau = rate_scale [ -2 J(tau) (sqrt(n) <a> f_{n-1}
//                 + <a>* sqrt(n+1) f_{n+1}) + (U(tau)/2) n(n-1) f_n ],
// J and U in recoil units. rate_scale is the phase accumulated per unit tau
// and unit E_r: omega_r / Omega when tau is mirror-scaled time, 1 when tau is
// measured in 1/omega_r. The state is advanced in place; samples land on the
// dt_out grid.
OrderParameterTrace propagate(GutzwillerState& state, const Schedule& j_of_tau,
                              const Schedule& u_of_tau, double tau0, double tau1,
                              double dt_out, double rate_scale,
                              const ode::Options& opts = {});

struct AdiabaticityReport {
    double max_rate = 0.0;    // max |d(V0/E_r)/dtau| = |d(V0/E_r)/dt| / Omega
    double tau_at_max = 0.0;
    double ratio_16wr = 0.0;  // Omega * max_rate / (16 omega_r)
    bool pass = false;        // ratio < 0.1, the factor-of-ten reading of "<<"
};

// Differentiates a sampled V0(tau) (recoil units) and compares the fastest
// transient against the interband threshold 16 omega_r.
AdiabaticityReport adiabaticity_monitor(std::span<const double> tau,
                                        std::span<const double> v0,
                                        double omega_ratio);

} // namespace oml
