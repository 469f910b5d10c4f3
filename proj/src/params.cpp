#include "oml/params.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "oml/constants.hpp"
#include "oml/errors.hpp"

namespace oml {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw invalid_parameter(std::string(name) + " must be positive and finite");
    }
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw invalid_parameter(std::string(name) + " must be finite");
    }
}

} // namespace

void PhysicalParams::validate() const {
    require_positive(atom_mass, "atom_mass");
    require_positive(pump_wavelength, "pump_wavelength");
    require_positive(mirror_mass, "mirror_mass");
    require_positive(mirror_omega, "mirror_omega");
    require_finite(mirror_damping, "mirror_damping");
    if (mirror_damping < 0.0) throw invalid_parameter("mirror_damping must be >= 0");
    if (!(mirror_reflectivity >= 0.0 && mirror_reflectivity < 1.0)) {
        throw invalid_parameter("mirror_reflectivity must lie in [0, 1)");
    }
    require_positive(atomic_linewidth, "atomic_linewidth");
    require_positive(atomic_omega, "atomic_omega");
    if (atom_detuning && (*atom_detuning == 0.0 || !std::isfinite(*atom_detuning))) {
        throw invalid_parameter("atom_detuning must be nonzero and finite");
    }
    if (beam_area && !(*beam_area > 0.0)) {
        throw invalid_parameter("beam_area must be positive");
    }
    if (cavity_decay && !(*cavity_decay > 0.0)) {
        throw invalid_parameter("cavity_decay must be positive");
    }
}

RecoilScales recoil_energy(const PhysicalParams& phys) {
    require_positive(phys.atom_mass, "atom_mass");
    require_positive(phys.pump_wavelength, "pump_wavelength");
    const double k_p = 2.0 * constants::pi / phys.pump_wavelength;
    RecoilScales s;
    s.energy = constants::hbar * constants::hbar * k_p * k_p / (2.0 * phys.atom_mass);
    s.omega = s.energy / constants::hbar;
    return s;
}

double polarizability(const PhysicalParams& phys) {
    if (!phys.atom_detuning) {
        throw unavailable_parameter("polarizability requires atom_detuning");
    }
    require_positive(phys.atomic_linewidth, "atomic_linewidth");
    require_positive(phys.atomic_omega, "atomic_omega");
    const double c = constants::speed_of_light;
    const double wa = phys.atomic_omega;
    return 3.0 * constants::pi * c * c * phys.atomic_linewidth /
           (2.0 * wa * wa * wa * *phys.atom_detuning);
}

double beta_coefficient(const PhysicalParams& phys) {
    if (!phys.beam_area) {
        throw unavailable_parameter("beta_coefficient requires beam_area");
    }
    if (!phys.atom_detuning) {
        throw unavailable_parameter("beta_coefficient requires atom_detuning");
    }
    const double alpha = polarizability(phys);
    if (alpha == 0.0 || !std::isfinite(alpha)) {
        throw invalid_parameter("polarizability must be finite and nonzero");
    }
    const double e_r = recoil_energy(phys).energy;
    return *phys.beam_area * e_r /
           (phys.pump_wavelength * phys.mirror_mass * phys.mirror_omega *
            phys.mirror_omega * constants::speed_of_light * alpha);
}

WeakCouplingResult weak_coupling_check(double n_atoms, double g0,
                                       double atom_detuning, double cavity_decay) {
    require_finite(n_atoms, "n_atoms");
    require_finite(g0, "g0");
    require_finite(atom_detuning, "atom_detuning");
    require_positive(cavity_decay, "cavity_decay");
    if (atom_detuning == 0.0) {
        throw invalid_parameter("weak_coupling_check: atom_detuning must be nonzero");
    }
    WeakCouplingResult r;
    r.margin = n_atoms * g0 * g0 / std::abs(atom_detuning) / cavity_decay;
    r.ok = r.margin < 0.1;
    return r;
}

void SystemParams::validate() const {
    if (!(transmittance > 0.0 && transmittance <= 1.0)) {
        throw invalid_parameter("transmittance must lie in (0, 1]");
    }
    require_finite(cavity_offset, "cavity_offset");
    require_finite(radiation_coupling, "radiation_coupling");
    if (radiation_coupling < 0.0) {
        throw invalid_parameter("radiation_coupling must be >= 0");
    }
    if (!(mirror_damping >= 0.0) || !std::isfinite(mirror_damping)) {
        throw invalid_parameter("mirror_damping must be >= 0 and finite");
    }
    require_positive(cavity_decay, "cavity_decay");
}

std::vector<std::string> SystemParams::consistency_warnings(bool full_model) const {
    std::vector<std::string> w;
    if (full_model && cavity_decay < 10.0) {
        w.push_back("cavity_decay (kappa) = " + std::to_string(cavity_decay) +
                    " is not in the bad-cavity regime; the full model assumes kappa >> 1");
    }
    return w;
}

SystemParams SystemParams::from_physical(const PhysicalParams& phys) {
    phys.validate();
    SystemParams p;
    p.transmittance = phys.transmittance();
    p.mirror_damping = phys.mirror_damping / phys.mirror_omega;
    if (phys.cavity_decay) p.cavity_decay = *phys.cavity_decay / phys.mirror_omega;
    const RecoilScales rs = oml::recoil_energy(phys);
    p.recoil_energy = rs.energy;
    p.recoil_omega = rs.omega;
    p.mirror_omega = phys.mirror_omega;
    p.omega_ratio = rs.omega / phys.mirror_omega;
    if (phys.beam_area && phys.atom_detuning) {
        p.radiation_coupling = beta_coefficient(phys);
    }
    return p;
}

double tau_to_seconds(double tau, double mirror_omega) {
    require_positive(mirror_omega, "mirror_omega");
    return tau / mirror_omega;
}

double seconds_to_tau(double seconds, double mirror_omega) {
    require_positive(mirror_omega, "mirror_omega");
    return seconds * mirror_omega;
}

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw invalid_parameter(std::string("unknown key \"") + it.key() +
                                    "\" in " + where);
        }
    }
}

double get_num(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number()) {
        throw invalid_parameter(std::string("key \"") + key + "\" must be a number");
    }
    return v.get<double>();
}

} // namespace

PhysicalParams physical_params_from_json(const json& j) {
    static const std::set<std::string> keys = {
        "atom_mass_kg",      "pump_wavelength_m",      "mirror_mass_kg",
        "mirror_freq_hz",    "mirror_damping_per_s",   "mirror_reflectivity",
        "atomic_linewidth_rad_per_s", "atomic_freq_rad_per_s",
        "atom_detuning_rad_per_s",    "beam_area_m2",  "cavity_decay_per_s"};
    if (!j.is_object()) throw invalid_parameter("\"physical\" must be an object");
    check_keys(j, keys, "\"physical\"");

    PhysicalParams p;
    p.atom_mass = get_num(j, "atom_mass_kg");
    p.pump_wavelength = get_num(j, "pump_wavelength_m");
    p.mirror_mass = get_num(j, "mirror_mass_kg");
    p.mirror_omega = 2.0 * constants::pi * get_num(j, "mirror_freq_hz");
    if (j.contains("mirror_damping_per_s")) p.mirror_damping = get_num(j, "mirror_damping_per_s");
    p.mirror_reflectivity = get_num(j, "mirror_reflectivity");
    p.atomic_linewidth = get_num(j, "atomic_linewidth_rad_per_s");
    p.atomic_omega = get_num(j, "atomic_freq_rad_per_s");
    if (j.contains("atom_detuning_rad_per_s")) p.atom_detuning = get_num(j, "atom_detuning_rad_per_s");
    if (j.contains("beam_area_m2")) p.beam_area = get_num(j, "beam_area_m2");
    if (j.contains("cavity_decay_per_s")) p.cavity_decay = get_num(j, "cavity_decay_per_s");
    p.validate();
    return p;
}

SystemParams system_params_from_json(const json& j) {
    static const std::set<std::string> blocks = {"physical", "dimensionless"};
    if (!j.is_object()) throw invalid_parameter("system parameters must be an object");
    check_keys(j, blocks, "system parameters");

    SystemParams p;
    bool have_physical = false;
    if (j.contains("physical")) {
        p = SystemParams::from_physical(physical_params_from_json(j.at("physical")));
        have_physical = true;
    }
    if (j.contains("dimensionless")) {
        const json& d = j.at("dimensionless");
        static const std::set<std::string> keys = {
            "transmittance", "cavity_offset", "radiation_coupling",
            "mirror_damping", "cavity_decay", "omega_ratio"};
        if (!d.is_object()) throw invalid_parameter("\"dimensionless\" must be an object");
        check_keys(d, keys, "\"dimensionless\"");
        if (d.contains("transmittance")) p.transmittance = get_num(d, "transmittance");
        if (d.contains("cavity_offset")) p.cavity_offset = get_num(d, "cavity_offset");
        if (d.contains("radiation_coupling")) p.radiation_coupling = get_num(d, "radiation_coupling");
        if (d.contains("mirror_damping")) p.mirror_damping = get_num(d, "mirror_damping");
        if (d.contains("cavity_decay")) p.cavity_decay = get_num(d, "cavity_decay");
        if (d.contains("omega_ratio")) p.omega_ratio = get_num(d, "omega_ratio");
    } else if (!have_physical) {
        throw invalid_parameter("system parameters need a \"physical\" or \"dimensionless\" block");
    }
    p.validate();
    return p;
}

SystemParams baseline_system_params(bool fast_mirror) {
    PhysicalParams phys;
    phys.atom_mass = constants::sodium23_mass;
    phys.pump_wavelength = 985e-9;
    phys.mirror_mass = fast_mirror ? 0.031e-3 : 0.078e-3;
    phys.mirror_omega = 2.0 * constants::pi * (fast_mirror ? 50.0 : 10.0);
    phys.mirror_reflectivity = 0.99;
    phys.mirror_damping = 0.5 * phys.mirror_omega;
    // Sodium D-line scale; only the recoil quantities enter downstream.
    phys.atomic_linewidth = 2.0 * constants::pi * 9.79e6;
    phys.atomic_omega = 2.0 * constants::pi * constants::speed_of_light / 589e-9;

    SystemParams p = SystemParams::from_physical(phys);
    p.cavity_offset = -0.0035;
    p.radiation_coupling = 0.0002;
    p.mirror_damping = 0.5;
    p.cavity_decay = 100.0;
    return p;
}

} // namespace oml
