#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oml/interp.hpp"

namespace oml {

// Units: energies in E_r, lengths in lambda_p/2 (one lattice constant),
// quasimomentum in k_p over the first Brillouin zone [-1, 1].

// Bloch bands of V0 sin^2(k_p x) from the plane-wave Hamiltonian
//   H(q)_{mn} = (q + 2m)^2 d_{mn} + (V0/4)(2 d_{mn} - d_{m,n+1} - d_{m,n-1}).
struct BandStructure {
    double depth = 0.0;  // V0
    int cutoff = 0;
    std::vector<double> q;                    // n_q points spanning [-1, 1]
    std::vector<std::vector<double>> energy;  // [band][iq]
};

BandStructure band_structure(double v0, int n_bands, int n_q, int cutoff = 15);

// Quarter-bandwidth of the lowest band: exact hopping of the nearest-neighbor
// dispersion -2 J cos(pi q).
double tunneling_j(double v0, int n_q = 101, int cutoff = 15);

// Lowest-band Wannier function at site 0, real and symmetric (Bloch phases
// fixed so u_q(0) > 0), normalized to unit L2 norm on its grid.
struct WannierFunction {
    std::vector<double> x;  // sites at integers, dx = 1 / points_per_site
    std::vector<double> w;
    double dx = 0.0;
};

WannierFunction wannier_lowest(double v0, int n_q = 101, int points_per_site = 512,
                               int half_sites = 5, int cutoff = 15);

// Integral of |w|^4 over the grid; U = g_eff * this.
double wannier_quartic_integral(const WannierFunction& w);
double wannier_quartic_integral(double v0, int n_q = 101, int points_per_site = 512,
                                int half_sites = 5, int cutoff = 15);

double onsite_u(double v0, double g_eff, int n_q = 101, int points_per_site = 512,
                int half_sites = 5, int cutoff = 15);

// Interaction coefficient pinned so that 2J/U = target_ratio exactly at
// depth v0_crit.
double calibrate_g(double v0_crit = 10.8, double target_ratio = 0.17,
                   int n_q = 101, int points_per_site = 512, int half_sites = 5,
                   int cutoff = 15);

// Tabulated J(V0), U(V0) with monotone cubic interpolation between nodes.
struct HubbardCurveSpec {
    double v0_min = 0.5;
    double v0_max = 40.0;
    double dv0 = 0.1;
    int cutoff = 15;
    int n_q = 101;
    int points_per_site = 512;
    int half_sites = 5;
    double g_eff = 0.0;        // used directly when > 0
    double calib_depth = 10.8; // otherwise calibrated here
    double calib_ratio = 0.17;

    std::uint64_t key() const;  // cache identity
};

class HubbardCurve {
public:
    static HubbardCurve build(const HubbardCurveSpec& spec);

    double j(double v0) const { return j_interp_(v0); }
    double u(double v0) const { return u_interp_(v0); }
    double ratio(double v0) const { return 2.0 * j(v0) / u(v0); }  // 2J/U

    double g_eff() const { return g_eff_; }
    double v0_min() const { return spec_.v0_min; }
    double v0_max() const { return spec_.v0_max; }
    const HubbardCurveSpec& spec() const { return spec_; }
    const std::vector<double>& depths() const { return v0_; }
    const std::vector<double>& j_nodes() const { return j_; }
    const std::vector<double>& u_nodes() const { return u_; }

    // Depth at which 2J/U falls through `target` (bisection on the tabulated
    // curve); empty when the curve never crosses it.
    std::optional<double> crossing_depth(double target) const;

    void save(const std::string& path) const;
    static std::optional<HubbardCurve> load(const std::string& path,
                                            const HubbardCurveSpec& expected);

private:
    HubbardCurve() = default;

    HubbardCurveSpec spec_;
    double g_eff_ = 0.0;
    std::vector<double> v0_, j_, u_;
    MonotoneCubic j_interp_, u_interp_;
};

} // namespace oml
