#include "oml/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

#include "oml/errors.hpp"
#include "oml/interp.hpp"
#include "oml/steady_state.hpp"

namespace oml {

void Scenario::validate() const {
    system.validate();
    drive.validate();
    if (!(mirror.tau_end > mirror.tau_start)) {
        throw invalid_parameter("scenario: tau_end must exceed tau_start");
    }
    if (!(mirror.dt_out > 0.0)) {
        throw invalid_parameter("scenario: dt_out must be positive");
    }
    if (gutzwiller.n_max < 6) {
        throw invalid_parameter("scenario: n_max must be >= 6");
    }
    if (!(gutzwiller.filling > 0.0)) {
        throw invalid_parameter("scenario: filling must be positive");
    }
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

double num(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number()) {
        throw invalid_parameter(std::string("key \"") + key + "\" must be a number");
    }
    return v.get<double>();
}

} // namespace

Scenario scenario_from_json(const json& j) {
    static const std::set<std::string> blocks = {"system", "drive", "mirror",
                                                 "hubbard", "gutzwiller"};
    if (!j.is_object()) throw invalid_parameter("scenario must be a JSON object");
    check_keys(j, blocks, "scenario");

    Scenario s;
    s.system = system_params_from_json(j.at("system"));

    {
        const json& d = j.at("drive");
        static const std::set<std::string> keys = {"y2_baseline", "y2_plateau",
                                                   "tau_rise",    "tau_fall",
                                                   "edge_width",  "order"};
        check_keys(d, keys, "\"drive\"");
        s.drive.y2_baseline = num(d, "y2_baseline");
        s.drive.y2_plateau = num(d, "y2_plateau");
        s.drive.tau_rise = num(d, "tau_rise");
        s.drive.tau_fall = num(d, "tau_fall");
        s.drive.edge_width = num(d, "edge_width");
        if (d.contains("order")) s.drive.order = d.at("order").get<int>();
        s.drive.validate();
    }

    {
        const json& m = j.at("mirror");
        static const std::set<std::string> keys = {"mode",   "tau_start", "tau_end",
                                                   "dt_out", "xi0",       "xi_dot0"};
        check_keys(m, keys, "\"mirror\"");
        if (m.contains("mode")) {
            const std::string mode = m.at("mode").get<std::string>();
            if (mode == "adiabatic") {
                s.mirror.mode = MirrorSpec::Mode::adiabatic;
            } else if (mode == "full") {
                s.mirror.mode = MirrorSpec::Mode::full;
            } else {
                throw invalid_parameter("mirror mode must be \"adiabatic\" or \"full\"");
            }
        }
        s.mirror.tau_start = m.contains("tau_start") ? num(m, "tau_start") : 0.0;
        s.mirror.tau_end = num(m, "tau_end");
        if (m.contains("dt_out")) s.mirror.dt_out = num(m, "dt_out");
        if (m.contains("xi0")) s.mirror.xi0 = num(m, "xi0");
        if (m.contains("xi_dot0")) s.mirror.xi_dot0 = num(m, "xi_dot0");
    }

    if (j.contains("hubbard")) {
        const json& h = j.at("hubbard");
        static const std::set<std::string> keys = {
            "v0_min", "v0_max",      "dv0",         "cutoff",     "n_q",
            "points_per_site", "half_sites", "g_eff", "calib_depth", "calib_ratio"};
        check_keys(h, keys, "\"hubbard\"");
        if (h.contains("v0_min")) s.hubbard.v0_min = num(h, "v0_min");
        if (h.contains("v0_max")) s.hubbard.v0_max = num(h, "v0_max");
        if (h.contains("dv0")) s.hubbard.dv0 = num(h, "dv0");
        if (h.contains("cutoff")) s.hubbard.cutoff = h.at("cutoff").get<int>();
        if (h.contains("n_q")) s.hubbard.n_q = h.at("n_q").get<int>();
        if (h.contains("points_per_site")) s.hubbard.points_per_site = h.at("points_per_site").get<int>();
        if (h.contains("half_sites")) s.hubbard.half_sites = h.at("half_sites").get<int>();
        if (h.contains("g_eff")) s.hubbard.g_eff = num(h, "g_eff");
        if (h.contains("calib_depth")) s.hubbard.calib_depth = num(h, "calib_depth");
        if (h.contains("calib_ratio")) s.hubbard.calib_ratio = num(h, "calib_ratio");
    }

    if (j.contains("gutzwiller")) {
        const json& g = j.at("gutzwiller");
        static const std::set<std::string> keys = {"n_max", "filling"};
        check_keys(g, keys, "\"gutzwiller\"");
        if (g.contains("n_max")) s.gutzwiller.n_max = g.at("n_max").get<int>();
        if (g.contains("filling")) s.gutzwiller.filling = num(g, "filling");
    }

    s.validate();
    return s;
}

Scenario paper_loop_scenario(bool fast_mirror) {
    Scenario s;
    s.system = baseline_system_params(fast_mirror);

    const BistableRegion region = bistable_region(s.system);
    const double cycle_seconds = fast_mirror ? 0.5 : 2.5;
    const double tau_cycle = seconds_to_tau(cycle_seconds, s.system.mirror_omega);

    s.drive.y2_baseline = 0.5 * region.y2_lower;
    s.drive.y2_plateau = 1.02 * region.y2_upper;
    s.drive.tau_rise = 0.15 * tau_cycle;
    s.drive.tau_fall = 0.60 * tau_cycle;
    s.drive.edge_width = 0.08 * tau_cycle;
    s.drive.order = 3;

    s.mirror.mode = MirrorSpec::Mode::adiabatic;
    s.mirror.tau_start = 0.0;
    s.mirror.tau_end = tau_cycle;
    s.mirror.dt_out = 0.02;
    return s;
}

ExperimentRecord run(const Scenario& scenario, const HubbardCurve& curve) {
    scenario.validate();
    const SystemParams& p = scenario.system;
    if (!(p.omega_ratio > 0.0)) {
        throw invalid_parameter("scenario: omega_ratio (omega_r / Omega) must be set");
    }

    // Stage 1: mirror dynamics.
    const double xi0 =
        scenario.mirror.xi0.value_or(
            steady_states(scenario.drive.y2_baseline, p).front().displacement);
    const double xi_dot0 = scenario.mirror.xi_dot0.value_or(0.0);

    Trajectory tr;
    if (scenario.mirror.mode == MirrorSpec::Mode::adiabatic) {
        tr = integrate_adiabatic(xi0, xi_dot0, scenario.drive, p,
                                 scenario.mirror.tau_start, scenario.mirror.tau_end,
                                 scenario.mirror.dt_out);
    } else {
        tr = integrate_full(steady_field(xi0, scenario.drive.y2_baseline, p), xi0,
                            xi_dot0, scenario.drive, p, scenario.mirror.tau_start,
                            scenario.mirror.tau_end, scenario.mirror.dt_out);
    }

    // Stage 2: V0(tau) = |X|^2 in recoil units; check it stays on the table.
    for (std::size_t k = 0; k < tr.tau.size(); ++k) {
        if (tr.intensity[k] < curve.v0_min() || tr.intensity[k] > curve.v0_max()) {
            throw numerical_error("V0 = " + std::to_string(tr.intensity[k]) +
                                  " E_r leaves the Hubbard table at tau = " +
                                  std::to_string(tr.tau[k]));
        }
    }

    // Stage 3: J(tau), U(tau) by monotone interpolation of the sampled depth.
    const MonotoneCubic v0_of_tau(tr.tau, tr.intensity);
    const Schedule j_of_tau = [&](double tau) { return curve.j(v0_of_tau(tau)); };
    const Schedule u_of_tau = [&](double tau) { return curve.u(v0_of_tau(tau)); };

    // Stage 4: ground state at the initial depth.
    GutzwillerState state =
        ground_state(j_of_tau(tr.tau.front()), u_of_tau(tr.tau.front()),
                     scenario.gutzwiller.filling, scenario.gutzwiller.n_max);

    // Stage 5: propagate. Tolerances sit two decades under the mirror stage:
    // norm and filling must hold to 1e-8 / 1e-6 across ~1e6 steps.
    ode::Options gutzwiller_opts;
    gutzwiller_opts.rtol = 1e-11;
    gutzwiller_opts.atol = 1e-14;
    OrderParameterTrace trace =
        propagate(state, j_of_tau, u_of_tau, tr.tau.front(), tr.tau.back(),
                  scenario.mirror.dt_out, p.omega_ratio, gutzwiller_opts);
    if (trace.tau.size() != tr.tau.size()) {
        throw numerical_error("pipeline grids diverged");
    }

    // Stage 6: assemble.
    ExperimentRecord rec;
    rec.tau = tr.tau;
    rec.drive = tr.drive;
    rec.xi = tr.xi;
    rec.xi_dot = tr.xi_dot;
    rec.intensity = tr.intensity;
    const std::size_t n = tr.tau.size();
    rec.j.resize(n);
    rec.u.resize(n);
    rec.ratio.resize(n);
    rec.re_a.resize(n);
    rec.im_a.resize(n);
    rec.abs_a.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        rec.j[k] = curve.j(tr.intensity[k]);
        rec.u[k] = curve.u(tr.intensity[k]);
        rec.ratio[k] = 2.0 * rec.j[k] / rec.u[k];
        rec.re_a[k] = trace.a[k].real();
        rec.im_a[k] = trace.a[k].imag();
        rec.abs_a[k] = trace.abs_a[k];
    }
    rec.filling = std::move(trace.filling);
    rec.norm2 = std::move(trace.norm2);
    rec.adiabaticity = adiabaticity_monitor(rec.tau, rec.intensity, p.omega_ratio);
    rec.g_eff = curve.g_eff();
    rec.initial_abs_a = rec.abs_a.front();
    for (std::size_t k = 1; k < n; ++k) {
        const bool below = rec.ratio[k - 1] > mean_field_critical_ratio &&
                           rec.ratio[k] <= mean_field_critical_ratio;
        const bool above = rec.ratio[k - 1] <= mean_field_critical_ratio &&
                           rec.ratio[k] > mean_field_critical_ratio;
        if (below || above) rec.phase_crossings.push_back(rec.tau[k]);
    }
    return rec;
}

ExperimentRecord run(const Scenario& scenario) {
    return run(scenario, HubbardCurve::build(scenario.hubbard));
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_record_csv(const ExperimentRecord& r, std::ostream& out) {
    out << "tau,Y2,xi,xi_dot,X2,J,U,ratio2JU,re_a,im_a,abs_a,filling,norm\n";
    for (std::size_t k = 0; k < r.tau.size(); ++k) {
        out << format_g17(r.tau[k]) << ',' << format_g17(r.drive[k]) << ','
            << format_g17(r.xi[k]) << ',' << format_g17(r.xi_dot[k]) << ','
            << format_g17(r.intensity[k]) << ',' << format_g17(r.j[k]) << ','
            << format_g17(r.u[k]) << ',' << format_g17(r.ratio[k]) << ','
            << format_g17(r.re_a[k]) << ',' << format_g17(r.im_a[k]) << ','
            << format_g17(r.abs_a[k]) << ',' << format_g17(r.filling[k]) << ','
            << format_g17(r.norm2[k]) << '\n';
    }
}

void figure2_csv(const SystemParams& p, double y2_min, double y2_max,
                 std::size_t n_points, double v0_crit, std::ostream& out) {
    if (!(y2_max > y2_min) || y2_min < 0.0 || n_points < 2) {
        throw invalid_parameter("figure2: bad drive grid");
    }
    out << "kind,Y2,root_index,X2,xi,branch,stability\n";
    for (std::size_t k = 0; k < n_points; ++k) {
        const double y2 = y2_min + (y2_max - y2_min) * static_cast<double>(k) /
                                       static_cast<double>(n_points - 1);
        const auto roots = steady_states(y2, p);
        for (std::size_t i = 0; i < roots.size(); ++i) {
            out << "root," << format_g17(y2) << ',' << i << ','
                << format_g17(roots[i].intensity) << ','
                << format_g17(roots[i].displacement) << ','
                << to_string(roots[i].branch) << ',' << to_string(roots[i].stability)
                << '\n';
        }
    }
    for (const auto& c : critical_depth_marker(p, v0_crit)) {
        out << "critical_depth," << format_g17(c.y2) << ",-1,"
            << format_g17(c.intensity) << ','
            << format_g17(p.radiation_coupling * c.intensity) << ','
            << to_string(c.branch) << ',' << to_string(c.stability) << '\n';
    }
}

void figure3_csv(const SystemParams& p, const std::vector<double>& y2_list,
                 double xi_min, double xi_max, std::size_t n_points,
                 std::ostream& out) {
    if (y2_list.empty() || !(xi_max > xi_min) || n_points < 2) {
        throw invalid_parameter("figure3: bad grid");
    }
    out << "xi";
    for (double y2 : y2_list) out << ",V_y2_" << format_g17(y2);
    out << '\n';
    for (std::size_t k = 0; k < n_points; ++k) {
        const double xi = xi_min + (xi_max - xi_min) * static_cast<double>(k) /
                                       static_cast<double>(n_points - 1);
        out << format_g17(xi);
        for (double y2 : y2_list) out << ',' << format_g17(effective_potential(xi, y2, p));
        out << '\n';
    }
}

void figure4_csv(const Scenario& scenario, std::ostream& out) {
    scenario.validate();
    const SystemParams& p = scenario.system;
    const double xi0 =
        scenario.mirror.xi0.value_or(
            steady_states(scenario.drive.y2_baseline, p).front().displacement);
    const double xi_dot0 = scenario.mirror.xi_dot0.value_or(0.0);

    Trajectory tr;
    if (scenario.mirror.mode == MirrorSpec::Mode::adiabatic) {
        tr = integrate_adiabatic(xi0, xi_dot0, scenario.drive, p,
                                 scenario.mirror.tau_start, scenario.mirror.tau_end,
                                 scenario.mirror.dt_out);
    } else {
        tr = integrate_full(steady_field(xi0, scenario.drive.y2_baseline, p), xi0,
                            xi_dot0, scenario.drive, p, scenario.mirror.tau_start,
                            scenario.mirror.tau_end, scenario.mirror.dt_out);
    }

    out << "kind,tau,Y2,X2\n";
    const BistableRegion region = bistable_region(p);
    if (region.exists) {
        out << "critical_y2_lower,0," << format_g17(region.y2_lower) << ','
            << format_g17(region.intensity_at_y2_lower) << '\n';
        out << "critical_y2_upper,0," << format_g17(region.y2_upper) << ','
            << format_g17(region.intensity_at_y2_upper) << '\n';
    }
    for (std::size_t k = 0; k < tr.tau.size(); ++k) {
        out << "sample," << format_g17(tr.tau[k]) << ',' << format_g17(tr.drive[k])
            << ',' << format_g17(tr.intensity[k]) << '\n';
    }
}

void figure5_csv(const ExperimentRecord& r, std::ostream& out) {
    out << "kind,tau,ratio2JU,abs_a\n";
    for (double tau : r.phase_crossings) {
        out << "critical_crossing," << format_g17(tau) << ','
            << format_g17(r.critical_ratio) << ",0\n";
    }
    for (std::size_t k = 0; k < r.tau.size(); ++k) {
        out << "sample," << format_g17(r.tau[k]) << ',' << format_g17(r.ratio[k])
            << ',' << format_g17(r.abs_a[k]) << '\n';
    }
}

void bands_csv(const HubbardCurve& curve, std::ostream& out) {
    out << "V0,J,U,ratio2JU\n";
    const auto& v0 = curve.depths();
    const auto& j = curve.j_nodes();
    const auto& u = curve.u_nodes();
    for (std::size_t k = 0; k < v0.size(); ++k) {
        out << format_g17(v0[k]) << ',' << format_g17(j[k]) << ',' << format_g17(u[k])
            << ',' << format_g17(2.0 * j[k] / u[k]) << '\n';
    }
}

} // namespace oml
