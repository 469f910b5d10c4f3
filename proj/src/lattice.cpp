#include "oml/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>

#include <Eigen/Dense>

#include "oml/constants.hpp"
#include "oml/errors.hpp"

namespace oml {

namespace {

using constants::pi;

Eigen::MatrixXd plane_wave_hamiltonian(double v0, double q, int cutoff) {
    const int dim = 2 * cutoff + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double m = static_cast<double>(i - cutoff);
        h(i, i) = (q + 2.0 * m) * (q + 2.0 * m) + 0.5 * v0;
        if (i + 1 < dim) {
            h(i, i + 1) = -0.25 * v0;
            h(i + 1, i) = -0.25 * v0;
        }
    }
    return h;
}

std::vector<double> q_grid(int n_q) {
    if (n_q < 2) throw invalid_parameter("band structure needs >= 2 quasimomenta");
    std::vector<double> q(n_q);
    for (int j = 0; j < n_q; ++j) {
        q[j] = -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(n_q - 1);
    }
    return q;
}

struct BlochSolve {
    std::vector<double> q;
    std::vector<double> energy0;             // lowest band
    std::vector<Eigen::VectorXd> coeff0;     // lowest-band eigenvectors, u_q(0) > 0
};

BlochSolve solve_lowest_band(double v0, int n_q, int cutoff) {
    if (v0 < 0.0) throw invalid_parameter("lattice depth must be >= 0");
    if (cutoff < 8) throw invalid_parameter("plane-wave cutoff must be >= 8");

    BlochSolve out;
    out.q = q_grid(n_q);
    out.energy0.resize(out.q.size());
    out.coeff0.resize(out.q.size());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    for (std::size_t j = 0; j < out.q.size(); ++j) {
        solver.compute(plane_wave_hamiltonian(v0, out.q[j], cutoff));
        if (solver.info() != Eigen::Success) {
            throw numerical_error("plane-wave eigensolve failed at q = " +
                                  std::to_string(out.q[j]));
        }
        out.energy0[j] = solver.eigenvalues()(0);
        Eigen::VectorXd c = solver.eigenvectors().col(0);
        if (c.sum() < 0.0) c = -c;  // u_q(0) = sum_m c_m > 0
        out.coeff0[j] = std::move(c);
    }
    return out;
}

} // namespace

BandStructure band_structure(double v0, int n_bands, int n_q, int cutoff) {
    if (v0 < 0.0) throw invalid_parameter("lattice depth must be >= 0");
    if (cutoff < 8) throw invalid_parameter("plane-wave cutoff must be >= 8");
    const int dim = 2 * cutoff + 1;
    if (n_bands < 1 || n_bands > dim) throw invalid_parameter("bad band count");

    BandStructure bs;
    bs.depth = v0;
    bs.cutoff = cutoff;
    bs.q = q_grid(n_q);
    bs.energy.assign(n_bands, std::vector<double>(bs.q.size()));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    for (std::size_t j = 0; j < bs.q.size(); ++j) {
        solver.compute(plane_wave_hamiltonian(v0, bs.q[j], cutoff),
                       Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) {
            throw numerical_error("plane-wave eigensolve failed at q = " +
                                  std::to_string(bs.q[j]));
        }
        for (int b = 0; b < n_bands; ++b) bs.energy[b][j] = solver.eigenvalues()(b);
    }
    return bs;
}

double tunneling_j(double v0, int n_q, int cutoff) {
    if (!(v0 > 0.0)) throw invalid_parameter("tunneling_j needs a positive depth");
    const BandStructure bs = band_structure(v0, 1, n_q, cutoff);
    const auto [lo, hi] = std::minmax_element(bs.energy[0].begin(), bs.energy[0].end());
    return (*hi - *lo) / 4.0;
}

namespace {

struct WannierAccumulator {
    // Evaluates w on x >= 0 only (the construction is symmetric) and mirrors.
    static WannierFunction build(const BlochSolve& bloch, int cutoff,
                                 int points_per_site, int half_sites) {
        if (points_per_site < 32) throw invalid_parameter("points_per_site too coarse");
        if (half_sites < 1) throw invalid_parameter("half_sites must be >= 1");

        const int nq = static_cast<int>(bloch.q.size());
        if (nq < 3) throw invalid_parameter("wannier construction needs n_q >= 3");
        const int dim = 2 * cutoff + 1;

        const double half_window = half_sites + 0.5;
        const int n_half = static_cast<int>(std::lround(half_window * points_per_site));
        const double dx = half_window / n_half;

        // Zone-edge points q = +-1 are the same Bloch state: half weight.
        std::vector<double> weight(nq, 1.0);
        weight.front() = 0.5;
        weight.back() = 0.5;

        // Drop plane-wave components that cannot matter.
        int m_hi = 1;
        for (int i = 0; i < dim; ++i) {
            double cmax = 0.0;
            for (const auto& c : bloch.coeff0) cmax = std::max(cmax, std::abs(c(i)));
            if (cmax > 1e-15) m_hi = std::max(m_hi, std::abs(i - cutoff));
        }

        std::vector<double> w_half(n_half + 1, 0.0);
        using cplx = std::complex<double>;
        for (int ix = 0; ix <= n_half; ++ix) {
            const double x = ix * dx;
            // e^{i pi q_j x} via recurrence over the uniform q grid.
            const cplx dq_phase = std::exp(cplx(0.0, 2.0 * pi * x / (nq - 1)));
            cplx q_phase = std::exp(cplx(0.0, -pi * x));
            const cplx base = std::exp(cplx(0.0, 2.0 * pi * x));
            cplx acc(0.0, 0.0);
            for (int j = 0; j < nq; ++j) {
                const auto& c = bloch.coeff0[j];
                // u_q(x) = sum_m c_m e^{i 2 pi m x}
                cplx mono = std::exp(cplx(0.0, -2.0 * pi * m_hi * x));
                cplx u(0.0, 0.0);
                for (int m = -m_hi; m <= m_hi; ++m) {
                    u += c(m + cutoff) * mono;
                    mono *= base;
                }
                acc += weight[j] * q_phase * u;
                q_phase *= dq_phase;
            }
            w_half[ix] = acc.real();
        }

        WannierFunction wf;
        wf.dx = dx;
        const int n_total = 2 * n_half + 1;
        wf.x.resize(n_total);
        wf.w.resize(n_total);
        for (int k = 0; k < n_total; ++k) {
            const int off = k - n_half;
            wf.x[k] = off * dx;
            wf.w[k] = w_half[std::abs(off)];
        }

        // Unit L2 norm on the grid (trapezoid).
        double norm2 = 0.0;
        for (int k = 0; k < n_total; ++k) {
            const double wgt = (k == 0 || k == n_total - 1) ? 0.5 : 1.0;
            norm2 += wgt * wf.w[k] * wf.w[k];
        }
        norm2 *= dx;
        const double scale = 1.0 / std::sqrt(norm2);
        for (auto& v : wf.w) v *= scale;
        return wf;
    }
};

// One Bloch sweep yields both Hubbard ingredients for a depth.
struct DepthPoint {
    double j = 0.0;
    double w4 = 0.0;
};

DepthPoint depth_point(double v0, int n_q, int points_per_site, int half_sites,
                       int cutoff) {
    const BlochSolve bloch = solve_lowest_band(v0, n_q, cutoff);
    const auto [lo, hi] = std::minmax_element(bloch.energy0.begin(), bloch.energy0.end());
    DepthPoint d;
    d.j = (*hi - *lo) / 4.0;
    d.w4 = wannier_quartic_integral(
        WannierAccumulator::build(bloch, cutoff, points_per_site, half_sites));
    return d;
}

} // namespace

WannierFunction wannier_lowest(double v0, int n_q, int points_per_site,
                               int half_sites, int cutoff) {
    if (!(v0 > 0.0)) throw invalid_parameter("wannier_lowest needs a positive depth");
    return WannierAccumulator::build(solve_lowest_band(v0, n_q, cutoff), cutoff,
                                     points_per_site, half_sites);
}

double wannier_quartic_integral(const WannierFunction& wf) {
    double q4 = 0.0;
    const std::size_t n = wf.w.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double wgt = (k == 0 || k == n - 1) ? 0.5 : 1.0;
        const double w2 = wf.w[k] * wf.w[k];
        q4 += wgt * w2 * w2;
    }
    return q4 * wf.dx;
}

double wannier_quartic_integral(double v0, int n_q, int points_per_site,
                                int half_sites, int cutoff) {
    return wannier_quartic_integral(
        wannier_lowest(v0, n_q, points_per_site, half_sites, cutoff));
}

double onsite_u(double v0, double g_eff, int n_q, int points_per_site,
                int half_sites, int cutoff) {
    if (!(g_eff > 0.0)) throw invalid_parameter("onsite_u needs g_eff > 0");
    return g_eff * wannier_quartic_integral(v0, n_q, points_per_site, half_sites, cutoff);
}

double calibrate_g(double v0_crit, double target_ratio, int n_q, int points_per_site,
                   int half_sites, int cutoff) {
    if (!(target_ratio > 0.0)) throw invalid_parameter("target_ratio must be positive");
    if (!(v0_crit > 0.0)) throw invalid_parameter("calibration depth must be positive");
    const DepthPoint d = depth_point(v0_crit, n_q, points_per_site, half_sites, cutoff);
    return 2.0 * d.j / (target_ratio * d.w4);
}

std::uint64_t HubbardCurveSpec::key() const {
    // FNV-1a over the field bit patterns.
    auto mix = [](std::uint64_t h, std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xffu;
            h *= 1099511628211ull;
        }
        return h;
    };
    auto bits = [](double d) {
        std::uint64_t u;
        std::memcpy(&u, &d, sizeof u);
        return u;
    };
    std::uint64_t h = 14695981039346656037ull;
    h = mix(h, bits(v0_min));
    h = mix(h, bits(v0_max));
    h = mix(h, bits(dv0));
    h = mix(h, static_cast<std::uint64_t>(cutoff));
    h = mix(h, static_cast<std::uint64_t>(n_q));
    h = mix(h, static_cast<std::uint64_t>(points_per_site));
    h = mix(h, static_cast<std::uint64_t>(half_sites));
    h = mix(h, bits(g_eff));
    h = mix(h, bits(calib_depth));
    h = mix(h, bits(calib_ratio));
    return h;
}

HubbardCurve HubbardCurve::build(const HubbardCurveSpec& spec) {
    if (!(spec.v0_min > 0.0) || !(spec.v0_max > spec.v0_min) || !(spec.dv0 > 0.0)) {
        throw invalid_parameter("bad Hubbard curve grid");
    }
    HubbardCurve c;
    c.spec_ = spec;
    c.g_eff_ = spec.g_eff > 0.0
                   ? spec.g_eff
                   : calibrate_g(spec.calib_depth, spec.calib_ratio, spec.n_q,
                                 spec.points_per_site, spec.half_sites, spec.cutoff);

    const auto n = static_cast<std::size_t>(
                       std::floor((spec.v0_max - spec.v0_min) / spec.dv0 + 1e-9)) + 1;
    c.v0_.resize(n);
    c.j_.resize(n);
    c.u_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v0 = (i + 1 == n) ? spec.v0_max : spec.v0_min + spec.dv0 * i;
        const DepthPoint d = depth_point(v0, spec.n_q, spec.points_per_site,
                                         spec.half_sites, spec.cutoff);
        c.v0_[i] = v0;
        c.j_[i] = d.j;
        c.u_[i] = c.g_eff_ * d.w4;
    }
    c.j_interp_ = MonotoneCubic(c.v0_, c.j_);
    c.u_interp_ = MonotoneCubic(c.v0_, c.u_);
    return c;
}

std::optional<double> HubbardCurve::crossing_depth(double target) const {
    if (!(target > 0.0)) return std::nullopt;
    double lo = v0_.front(), hi = v0_.back();
    if (ratio(lo) < target || ratio(hi) > target) return std::nullopt;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ratio(mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {
constexpr char kCacheMagic[8] = {'O', 'M', 'L', 'H', 'U', 'B', '0', '1'};
}

void HubbardCurve::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw numerical_error("cannot write Hubbard cache: " + path);
    out.write(kCacheMagic, sizeof kCacheMagic);
    const std::uint64_t key = spec_.key();
    const std::uint64_t n = v0_.size();
    out.write(reinterpret_cast<const char*>(&key), sizeof key);
    out.write(reinterpret_cast<const char*>(&g_eff_), sizeof g_eff_);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    auto dump = [&](const std::vector<double>& v) {
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(v.size() * sizeof(double)));
    };
    dump(v0_);
    dump(j_);
    dump(u_);
    if (!out) throw numerical_error("short write on Hubbard cache: " + path);
}

std::optional<HubbardCurve> HubbardCurve::load(const std::string& path,
                                               const HubbardCurveSpec& expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kCacheMagic, sizeof magic) != 0) return std::nullopt;
    std::uint64_t key = 0, n = 0;
    double g = 0.0;
    in.read(reinterpret_cast<char*>(&key), sizeof key);
    in.read(reinterpret_cast<char*>(&g), sizeof g);
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!in || key != expected.key() || n == 0 || n > 100'000'000) return std::nullopt;

    HubbardCurve c;
    c.spec_ = expected;
    c.g_eff_ = g;
    auto slurp = [&](std::vector<double>& v) {
        v.resize(n);
        in.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(n * sizeof(double)));
    };
    slurp(c.v0_);
    slurp(c.j_);
    slurp(c.u_);
    if (!in) return std::nullopt;
    c.j_interp_ = MonotoneCubic(c.v0_, c.j_);
    c.u_interp_ = MonotoneCubic(c.v0_, c.u_);
    return c;
}

} // namespace oml
