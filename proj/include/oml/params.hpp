#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace oml {

// Laboratory-frame description of the cavity + mirror + atom system.
// All quantities in SI units.
struct PhysicalParams {
    double atom_mass = 0.0;          // kg
    double pump_wavelength = 0.0;    // m
    double mirror_mass = 0.0;        // kg
    double mirror_omega = 0.0;       // rad/s, spring frequency of the end mirror
    double mirror_damping = 0.0;     // 1/s
    double mirror_reflectivity = 0.0;
    double atomic_linewidth = 0.0;   // rad/s
    double atomic_omega = 0.0;       // rad/s, atomic transition frequency
    std::optional<double> atom_detuning;  // rad/s, pump - atom
    std::optional<double> beam_area;      // m^2
    std::optional<double> cavity_decay;   // 1/s

    // Mirror transmittance; absorption-free mirrors, so R + T = 1.
    double transmittance() const { return 1.0 - mirror_reflectivity; }

    void validate() const;
};

struct RecoilScales {
    double energy = 0.0;  // J
    double omega = 0.0;   // rad/s, energy / hbar
};

// Photon recoil energy E_r = hbar^2 k_p^2 / (2 m) with k_p = 2 pi / lambda_p.
RecoilScales recoil_energy(const PhysicalParams& phys);

// Polarizability prefactor alpha = 3 pi c^2 gamma_a / (2 omega_a^3 Delta_a).
double polarizability(const PhysicalParams& phys);

// Radiation-pressure coefficient beta = A E_r / (lambda_p M Omega^2 c alpha).
// Requires beam_area and atom_detuning; throws unavailable_parameter otherwise.
double beta_coefficient(const PhysicalParams& phys);

struct WeakCouplingResult {
    bool ok = false;
    double margin = 0.0;  // (N g0^2 / |Delta_a|) / kappa_c
};

// "Much less than" read as a factor-of-ten margin: ok iff margin < 0.1.
WeakCouplingResult weak_coupling_check(double n_atoms, double g0,
                                       double atom_detuning, double cavity_decay);

// Dimensionless working parameters: times in 1/Omega, lengths in lambda_p/2,
// intensities in recoil units. Everything downstream consumes only these.
struct SystemParams {
    double transmittance = 0.0;       // T
    double cavity_offset = 0.0;       // delta, cavity offset in units lambda_p/2
    double radiation_coupling = 0.0;  // beta
    double mirror_damping = 0.0;      // gamma, units of Omega
    double cavity_decay = 100.0;      // kappa, units of Omega
    double omega_ratio = 0.0;         // omega_r / Omega; 0 means unset
    double recoil_energy = 0.0;       // J; 0 means unset
    double recoil_omega = 0.0;        // rad/s; 0 means unset
    double mirror_omega = 0.0;        // rad/s; 0 means unset

    void validate() const;

    // Non-fatal consistency flags, e.g. kappa < 10 in full-model mode.
    std::vector<std::string> consistency_warnings(bool full_model) const;

    // Dimensionless overrides applied on top of physically derived values.
    static SystemParams from_physical(const PhysicalParams& phys);
};

// Time conversions (tau = Omega * t).
double tau_to_seconds(double tau, double mirror_omega);
double seconds_to_tau(double seconds, double mirror_omega);

// JSON loading with explicit unit suffixes in key names. Unknown keys are a
// hard error. Layout:
//   { "physical":      { "atom_mass_kg": ..., "mirror_freq_hz": ..., ... },
//     "dimensionless": { "transmittance": ..., "cavity_offset": ..., ... } }
// Either block may be omitted; dimensionless values override derived ones.
PhysicalParams physical_params_from_json(const nlohmann::json& j);
SystemParams system_params_from_json(const nlohmann::json& j);

// The parameter set used throughout: sodium atoms at 985 nm, a 0.078 g mirror
// sprung at 2 pi x 10 Hz (or 0.031 g at 2 pi x 50 Hz for the fast variant),
// R = 0.99, with the dimensionless operating point (T, delta, beta, gamma)
// = (0.01, -0.0035, 0.0002, 0.5).
SystemParams baseline_system_params(bool fast_mirror = false);

} // namespace oml
