#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "oml/drive.hpp"
#include "oml/gutzwiller.hpp"
#include "oml/lattice.hpp"
#include "oml/mirror_dynamics.hpp"
#include "oml/params.hpp"

namespace oml {

struct MirrorSpec {
    enum class Mode { adiabatic, full };
    Mode mode = Mode::adiabatic;
    double tau_start = 0.0;
    double tau_end = 0.0;
    double dt_out = 0.02;
    // Default initial condition: at rest on the lower-branch steady state of
    // the baseline drive.
    std::optional<double> xi0;
    std::optional<double> xi_dot0;
};

struct GutzwillerSpec {
    int n_max = 10;
    double filling = 1.0;
};

// Everything needed to drive one experiment end to end.
struct Scenario {
    SystemParams system;
    DriveSchedule drive;
    MirrorSpec mirror;
    HubbardCurveSpec hubbard;
    GutzwillerSpec gutzwiller;

    void validate() const;
};

Scenario scenario_from_json(const nlohmann::json& j);

// The bistable-loop experiment: a flat-top pulse whose plateau sits 2% above
// the upper turning point and whose baseline sits at half the lower turning
// point, cycled over 2.5 s (slow mirror) or 0.5 s (fast mirror) of real time.
Scenario paper_loop_scenario(bool fast_mirror = false);

// Merged time series of one run, all on the mirror output grid.
struct ExperimentRecord {
    std::vector<double> tau;
    std::vector<double> drive;      // Y^2
    std::vector<double> xi, xi_dot;
    std::vector<double> intensity;  // |X|^2 = V0 / E_r
    std::vector<double> j, u;       // E_r
    std::vector<double> ratio;      // 2J/U
    std::vector<double> re_a, im_a, abs_a;
    std::vector<double> filling, norm2;

    AdiabaticityReport adiabaticity;
    std::vector<double> phase_crossings;  // tau where 2J/U crosses the critical ratio
    double g_eff = 0.0;
    double critical_ratio = mean_field_critical_ratio;
    double initial_abs_a = 0.0;
};

// Pipeline: mirror dynamics -> V0(tau) -> (J, U)(tau) -> Gutzwiller
// propagation from the ground state at the initial depth. The atoms do not
// act back on the field in the weak-coupling regime, so the stages run
// sequentially. Throws numerical_error naming the offending tau when V0
// leaves the Hubbard table.
ExperimentRecord run(const Scenario& scenario, const HubbardCurve& curve);
ExperimentRecord run(const Scenario& scenario);  // builds the curve first

// CSV emitters. 17 significant digits, fixed column order, deterministic.
void write_record_csv(const ExperimentRecord& record, std::ostream& out);

// S-curve over a drive grid, plus the critical-depth marker row.
void figure2_csv(const SystemParams& p, double y2_min, double y2_max,
                 std::size_t n_points, double v0_crit, std::ostream& out);

// Effective potential V(xi), one column per drive value.
void figure3_csv(const SystemParams& p, const std::vector<double>& y2_list,
                 double xi_min, double xi_max, std::size_t n_points,
                 std::ostream& out);

// Intracavity intensity under the pulse, with the turning-point marker rows.
void figure4_csv(const Scenario& scenario, std::ostream& out);

// Order-parameter dynamics of a finished run, with critical-crossing markers.
void figure5_csv(const ExperimentRecord& record, std::ostream& out);

// Hubbard table (V0, J, U, 2J/U).
void bands_csv(const HubbardCurve& curve, std::ostream& out);

std::string format_g17(double v);

} // namespace oml
