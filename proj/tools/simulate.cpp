// Command-line driver: steady-state curves, pulse dynamics, Hubbard tables,
// and the full drive -> mirror -> lattice -> Gutzwiller experiment.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oml/errors.hpp"
#include "oml/pipeline.hpp"
#include "oml/steady_state.hpp"

namespace {

using nlohmann::json;

oml::SystemParams load_params(const std::string& path) {
    if (path.empty()) return oml::baseline_system_params();
    std::ifstream in(path);
    if (!in) throw oml::invalid_parameter("cannot open parameter file: " + path);
    return oml::system_params_from_json(json::parse(in));
}

oml::Scenario load_scenario(const std::string& path, const std::string& paper_loop) {
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw oml::invalid_parameter("cannot open scenario file: " + path);
        return oml::scenario_from_json(json::parse(in));
    }
    if (paper_loop == "slow") return oml::paper_loop_scenario(false);
    if (paper_loop == "fast") return oml::paper_loop_scenario(true);
    throw oml::invalid_parameter("need --scenario FILE or --paper-loop slow|fast");
}

std::string cache_file_for(const std::string& cache_dir, const oml::HubbardCurveSpec& spec) {
    if (cache_dir.empty()) return {};
    std::ostringstream name;
    name << cache_dir << "/hubbard_" << std::hex << spec.key() << ".bin";
    return name.str();
}

oml::HubbardCurve obtain_curve(const oml::HubbardCurveSpec& spec,
                               const std::string& cache_dir, bool verbose) {
    const std::string path = cache_file_for(cache_dir, spec);
    if (!path.empty()) {
        if (auto cached = oml::HubbardCurve::load(path, spec)) {
            if (verbose) std::cerr << "loaded Hubbard table from " << path << "\n";
            return std::move(*cached);
        }
    }
    if (verbose) std::cerr << "building Hubbard table...\n";
    oml::HubbardCurve curve = oml::HubbardCurve::build(spec);
    if (!path.empty()) {
        curve.save(path);
        if (verbose) std::cerr << "cached Hubbard table at " << path << "\n";
    }
    return curve;
}

struct OutStream {
    explicit OutStream(const std::string& path) {
        if (!path.empty()) {
            file.emplace(path);
            if (!*file) throw oml::invalid_parameter("cannot open output file: " + path);
        }
    }
    std::ostream& get() { return file ? *file : std::cout; }
    std::optional<std::ofstream> file;
};

json report_json(const oml::ExperimentRecord& rec) {
    json rep;
    rep["adiabaticity"] = {{"max_rate_per_omega", rec.adiabaticity.max_rate},
                           {"tau_at_max", rec.adiabaticity.tau_at_max},
                           {"ratio_vs_16_omega_r", rec.adiabaticity.ratio_16wr},
                           {"pass", rec.adiabaticity.pass}};
    rep["phase_crossings_tau"] = rec.phase_crossings;
    rep["critical_ratio"] = rec.critical_ratio;
    rep["g_eff"] = rec.g_eff;
    rep["initial_abs_a"] = rec.initial_abs_a;
    return rep;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bistable optomechanical lattice simulator"};
    app.require_subcommand(1);

    std::string cache_dir;
    if (const char* env = std::getenv("OML_CACHE_DIR")) cache_dir = env;
    app.add_option("--cache-dir", cache_dir,
                   "directory for Hubbard-table caches (env OML_CACHE_DIR)");
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "progress notes on stderr");

    // fig2
    auto* fig2 = app.add_subcommand("fig2", "steady-state S-curve CSV");
    std::string fig2_params, fig2_out;
    double fig2_min = 0.02, fig2_max = 0.07, fig2_crit = 10.8;
    std::size_t fig2_n = 251;
    fig2->add_option("--params", fig2_params, "system parameter JSON (default: builtin)");
    fig2->add_option("--y2-min", fig2_min);
    fig2->add_option("--y2-max", fig2_max);
    fig2->add_option("--n", fig2_n);
    fig2->add_option("--v0-crit", fig2_crit, "critical depth marker (E_r)");
    fig2->add_option("-o,--out", fig2_out);

    // fig3
    auto* fig3 = app.add_subcommand("fig3", "effective mirror potential CSV");
    std::string fig3_params, fig3_out;
    std::vector<double> fig3_y2 = {0.03, 0.044, 0.06};
    double fig3_lo = 0.0, fig3_hi = 0.0;
    std::size_t fig3_n = 801;
    fig3->add_option("--params", fig3_params);
    fig3->add_option("--y2", fig3_y2, "drive intensities, one potential column each");
    fig3->add_option("--xi-min", fig3_lo);
    fig3->add_option("--xi-max", fig3_hi);
    fig3->add_option("--n", fig3_n);
    fig3->add_option("-o,--out", fig3_out);

    // fig4
    auto* fig4 = app.add_subcommand("fig4", "intracavity intensity under the pulse");
    std::string fig4_scenario, fig4_loop, fig4_out, fig4_mode;
    fig4->add_option("--scenario", fig4_scenario, "scenario JSON");
    fig4->add_option("--paper-loop", fig4_loop, "slow|fast builtin loop");
    fig4->add_option("--mode", fig4_mode, "override integrator: full|adiabatic");
    fig4->add_option("-o,--out", fig4_out);

    // fig5
    auto* fig5 = app.add_subcommand("fig5", "order-parameter dynamics of the loop");
    std::string fig5_scenario, fig5_loop, fig5_out;
    fig5->add_option("--scenario", fig5_scenario);
    fig5->add_option("--paper-loop", fig5_loop);
    fig5->add_option("-o,--out", fig5_out);

    // run
    auto* runc = app.add_subcommand("run", "full experiment; CSV record plus JSON report");
    std::string run_scenario, run_loop, run_out, run_report;
    runc->add_option("--scenario", run_scenario);
    runc->add_option("--paper-loop", run_loop);
    runc->add_option("-o,--out", run_out, "record CSV path");
    runc->add_option("--report", run_report, "report JSON path");

    // bands
    auto* bands = app.add_subcommand("bands", "Hubbard J/U table CSV");
    std::string bands_out;
    double b_lo = 0.5, b_hi = 40.0, b_dv = 0.1, b_g = 0.0, b_cd = 10.8, b_cr = 0.17;
    bands->add_option("--v0-min", b_lo);
    bands->add_option("--v0-max", b_hi);
    bands->add_option("--dv0", b_dv);
    bands->add_option("--g-eff", b_g, "interaction coefficient; 0 = calibrate");
    bands->add_option("--calib-depth", b_cd);
    bands->add_option("--calib-ratio", b_cr);
    bands->add_option("-o,--out", bands_out);

    // calibrate-g
    auto* calib = app.add_subcommand("calibrate-g", "pin g_eff to the critical point");
    double cg_depth = 10.8, cg_ratio = 0.17;
    calib->add_option("--v0-crit", cg_depth);
    calib->add_option("--target-ratio", cg_ratio);

    CLI11_PARSE(app, argc, argv);

    try {
        if (fig2->parsed()) {
            OutStream out(fig2_out);
            oml::figure2_csv(load_params(fig2_params), fig2_min, fig2_max, fig2_n,
                             fig2_crit, out.get());
        } else if (fig3->parsed()) {
            const oml::SystemParams p = load_params(fig3_params);
            double lo = fig3_lo, hi = fig3_hi;
            if (lo == 0.0 && hi == 0.0) {
                // Span every stationary point of the requested drives.
                double max_disp = 0.0;
                for (double y2 : fig3_y2) {
                    for (const auto& b : oml::steady_states(y2, p)) {
                        max_disp = std::max(max_disp, b.displacement);
                    }
                }
                lo = -0.4 * max_disp;
                hi = 1.5 * max_disp;
            }
            OutStream out(fig3_out);
            oml::figure3_csv(p, fig3_y2, lo, hi, fig3_n, out.get());
        } else if (fig4->parsed()) {
            oml::Scenario s = load_scenario(fig4_scenario, fig4_loop);
            if (fig4_mode == "full") s.mirror.mode = oml::MirrorSpec::Mode::full;
            else if (fig4_mode == "adiabatic") s.mirror.mode = oml::MirrorSpec::Mode::adiabatic;
            else if (!fig4_mode.empty()) throw oml::invalid_parameter("bad --mode");
            for (const auto& w : s.system.consistency_warnings(
                     s.mirror.mode == oml::MirrorSpec::Mode::full)) {
                std::cerr << "warning: " << w << "\n";
            }
            OutStream out(fig4_out);
            oml::figure4_csv(s, out.get());
        } else if (fig5->parsed() || runc->parsed()) {
            const bool is_run = runc->parsed();
            oml::Scenario s = is_run ? load_scenario(run_scenario, run_loop)
                                     : load_scenario(fig5_scenario, fig5_loop);
            const oml::HubbardCurve curve = obtain_curve(s.hubbard, cache_dir, verbose);
            const oml::ExperimentRecord rec = oml::run(s, curve);
            if (is_run) {
                OutStream out(run_out);
                oml::write_record_csv(rec, out.get());
                if (!run_report.empty()) {
                    std::ofstream rep(run_report);
                    if (!rep) throw oml::invalid_parameter("cannot open " + run_report);
                    rep << report_json(rec).dump(2) << "\n";
                }
            } else {
                OutStream out(fig5_out);
                oml::figure5_csv(rec, out.get());
            }
        } else if (bands->parsed()) {
            oml::HubbardCurveSpec spec;
            spec.v0_min = b_lo;
            spec.v0_max = b_hi;
            spec.dv0 = b_dv;
            spec.g_eff = b_g;
            spec.calib_depth = b_cd;
            spec.calib_ratio = b_cr;
            const oml::HubbardCurve curve = obtain_curve(spec, cache_dir, verbose);
            OutStream out(bands_out);
            oml::bands_csv(curve, out.get());
        } else if (calib->parsed()) {
            std::cout << "g_eff = " << oml::format_g17(oml::calibrate_g(cg_depth, cg_ratio))
                      << " (E_r per lattice unit, 2J/U = " << cg_ratio << " at "
                      << cg_depth << " E_r)\n";
        }
    } catch (const oml::invalid_parameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const oml::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
