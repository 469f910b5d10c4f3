#include "oml/gutzwiller.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "oml/errors.hpp"

namespace oml {

double GutzwillerState::norm2() const {
    double s = 0.0;
    for (const auto& c : f) s += std::norm(c);
    return s;
}

double GutzwillerState::filling() const {
    double s = 0.0;
    for (std::size_t n = 1; n < f.size(); ++n) s += static_cast<double>(n) * std::norm(f[n]);
    return s;
}

std::complex<double> GutzwillerState::order_parameter() const {
    std::complex<double> a(0.0, 0.0);
    for (std::size_t n = 0; n + 1 < f.size(); ++n) {
        a += std::sqrt(static_cast<double>(n + 1)) * std::conj(f[n]) * f[n + 1];
    }
    return a;
}

double mean_field_energy(const GutzwillerState& s, double j, double u) {
    double eint = 0.0;
    for (std::size_t n = 2; n < s.f.size(); ++n) {
        eint += 0.5 * static_cast<double>(n) * static_cast<double>(n - 1) * std::norm(s.f[n]);
    }
    return -2.0 * j * std::norm(s.order_parameter()) + u * eint;
}

namespace {

struct SelfConsistentResult {
    Eigen::VectorXd f;  // real ground eigenvector
    double phi = 0.0;   // converged <a>
};

// Ground eigenvector of h(phi) at fixed mu, sign-fixed so <a> >= 0.
class MeanFieldSolver {
public:
    MeanFieldSolver(double j, double u, double mu, int n_max)
        : j_(j), u_(u), mu_(mu), dim_(n_max + 1),
          h_(Eigen::MatrixXd::Zero(dim_, dim_)) {}

    // <a> evaluated in the ground state of h(phi).
    double map(double phi, Eigen::VectorXd* f_out = nullptr) {
        for (int n = 0; n < dim_; ++n) {
            h_(n, n) = 0.5 * u_ * n * (n - 1.0) - mu_ * n;
            if (n + 1 < dim_) {
                const double c = -2.0 * j_ * std::sqrt(n + 1.0) * phi;
                h_(n, n + 1) = c;
                h_(n + 1, n) = c;
            }
        }
        solver_.compute(h_);
        if (solver_.info() != Eigen::Success) {
            throw numerical_error("gutzwiller eigensolve failed");
        }
        Eigen::VectorXd f = solver_.eigenvectors().col(0);
        double a = 0.0;
        for (int n = 0; n + 1 < dim_; ++n) a += std::sqrt(n + 1.0) * f(n) * f(n + 1);
        if (a < 0.0) {
            f = -f;
            a = -a;
        }
        if (f_out) *f_out = std::move(f);
        return a;
    }

private:
    double j_, u_, mu_;
    int dim_;
    Eigen::MatrixXd h_;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver_;
};

// Self-consistent order parameter at fixed mu: the nontrivial fixed point of
// phi -> <a>(phi) when the phi = 0 point is unstable, else 0. Located by
// bracketing the sign change of <a>(phi) - phi, which stays fast arbitrarily
// close to the transition where damped iteration critically slows down.
SelfConsistentResult solve_phi(double j, double u, double mu, int n_max,
                               const GroundStateOptions& opts) {
    MeanFieldSolver mf(j, u, mu, n_max);
    SelfConsistentResult res;

    const double phi_probe = 1e-7;
    const bool unstable_origin = mf.map(phi_probe) > phi_probe;
    if (!unstable_origin) {
        res.phi = 0.0;
        mf.map(0.0, &res.f);
        return res;
    }

    // Scan geometrically for the first sign change of map(phi) - phi; the
    // Cauchy-Schwarz bound <a> <= sqrt(<n>(<n>+1)) guarantees one below n_max+1.
    double lo = phi_probe;
    double hi = 0.0;
    double phi = std::max(opts.seed, 2.0 * phi_probe);
    const double phi_cap = n_max + 1.0;
    for (long it = 0; it < opts.max_iter && phi <= phi_cap; ++it) {
        if (mf.map(phi) < phi) {
            hi = phi;
            break;
        }
        lo = phi;
        phi *= 1.5;
    }
    if (hi == 0.0) {
        throw numerical_error("gutzwiller self-consistency failed to bracket");
    }
    for (int it = 0; it < 200 && hi - lo > opts.tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mf.map(mid) > mid ? lo : hi) = mid;
    }
    res.phi = 0.5 * (lo + hi);
    // Re-diagonalize at the converged phi so state and phi agree exactly.
    res.phi = mf.map(res.phi, &res.f);
    return res;
}

double filling_of(const Eigen::VectorXd& f) {
    double s = 0.0;
    for (int n = 1; n < f.size(); ++n) s += n * f(n) * f(n);
    return s;
}

} // namespace

GutzwillerState ground_state(double j, double u, double filling, int n_max,
                             const GroundStateOptions& opts, double* mu_out) {
    if (j < 0.0) throw invalid_parameter("ground_state: J must be >= 0");
    if (!(u > 0.0)) throw invalid_parameter("ground_state: U must be > 0");
    if (n_max < 6) throw invalid_parameter("ground_state: n_max must be >= 6");
    if (!(filling > 0.0) || filling > n_max - 1.0) {
        throw invalid_parameter("ground_state: filling unreachable at this cutoff");
    }

    // <n>(mu) is nondecreasing; bracket and bisect.
    double mu_lo = -(4.0 * j + u) - 1.0;
    double mu_hi = u * (std::ceil(filling) + 1.0) + 4.0 * j + 1.0;

    SelfConsistentResult res;
    double mu = 0.0;
    for (int it = 0; it < 200; ++it) {
        mu = 0.5 * (mu_lo + mu_hi);
        res = solve_phi(j, u, mu, n_max, opts);
        const double n_avg = filling_of(res.f);
        if (std::abs(n_avg - filling) < opts.filling_tol) break;
        (n_avg < filling ? mu_lo : mu_hi) = mu;
        if (mu_hi - mu_lo < 1e-14 * std::max(1.0, std::abs(mu))) break;
    }

    if (std::abs(filling_of(res.f) - filling) > 1e-6) {
        throw numerical_error("ground_state: mu bisection cannot reach filling " +
                              std::to_string(filling) + " at n_max " +
                              std::to_string(n_max));
    }
    if (mu_out) *mu_out = mu;

    GutzwillerState s;
    s.f.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) s.f[n] = std::complex<double>(res.f(n), 0.0);
    return s;
}

double critical_ratio_sweep(double filling, int n_max, double ratio_lo,
                            double ratio_hi, double tol) {
    if (!(ratio_lo > 0.0) || !(ratio_hi > ratio_lo)) {
        throw invalid_parameter("critical_ratio_sweep: bad bracket");
    }
    const double u = 1.0;  // only the ratio matters at fixed filling

    const auto superfluid = [&](double ratio) {
        const GutzwillerState s = ground_state(0.5 * ratio * u, u, filling, n_max);
        return std::abs(s.order_parameter()) > 1e-6;
    };

    if (superfluid(ratio_lo) || !superfluid(ratio_hi)) {
        throw numerical_error("critical_ratio_sweep: bracket does not straddle the transition");
    }
    double lo = ratio_lo, hi = ratio_hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (superfluid(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

OrderParameterTrace propagate(GutzwillerState& state, const Schedule& j_of_tau,
                              const Schedule& u_of_tau, double tau0, double tau1,
                              double dt_out, double rate_scale,
                              const ode::Options& opts) {
    if (!(tau1 > tau0)) throw invalid_parameter("propagate: empty time span");
    if (!(dt_out > 0.0)) throw invalid_parameter("propagate: output step must be positive");
    if (!(rate_scale > 0.0)) throw invalid_parameter("propagate: rate_scale must be positive");
    const int dim = state.n_max() + 1;
    if (dim < 2) throw invalid_parameter("propagate: state too small");

    const auto grid = ode::make_output_grid(tau0, tau1, dt_out);

    // State layout: y[2n] = Re f_n, y[2n+1] = Im f_n.
    std::vector<double> y(2 * dim);
    for (int n = 0; n < dim; ++n) {
        y[2 * n] = state.f[n].real();
        y[2 * n + 1] = state.f[n].imag();
    }

    std::vector<double> root(dim);  // sqrt(n+1) table
    for (int n = 0; n < dim; ++n) root[n] = std::sqrt(n + 1.0);

    const auto rhs = [&](double tau, const std::vector<double>& s,
                         std::vector<double>& ds) {
        const double jt = j_of_tau(tau);
        const double ut = u_of_tau(tau);

        double ar = 0.0, ai = 0.0;  // <a> = sum sqrt(n+1) f_n* f_{n+1}
        for (int n = 0; n + 1 < dim; ++n) {
            const double fr = s[2 * n], fi = s[2 * n + 1];
            const double gr = s[2 * n + 2], gi = s[2 * n + 3];
            ar += root[n] * (fr * gr + fi * gi);
            ai += root[n] * (fr * gi - fi * gr);
        }

        for (int n = 0; n < dim; ++n) {
            const double fr = s[2 * n], fi = s[2 * n + 1];
            // hop = sqrt(n) <a> f_{n-1} + <a>* sqrt(n+1) f_{n+1}
            double hr = 0.0, hi = 0.0;
            if (n > 0) {
                const double pr = s[2 * n - 2], pi_ = s[2 * n - 1];
                hr += root[n - 1] * (ar * pr - ai * pi_);
                hi += root[n - 1] * (ar * pi_ + ai * pr);
            }
            if (n + 1 < dim) {
                const double qr = s[2 * n + 2], qi = s[2 * n + 3];
                hr += root[n] * (ar * qr + ai * qi);
                hi += root[n] * (ar * qi - ai * qr);
            }
            const double diag = 0.5 * ut * n * (n - 1.0);
            const double rhs_r = -2.0 * jt * hr + diag * fr;  // Re H
            const double rhs_i = -2.0 * jt * hi + diag * fi;  // Im H
            // i f' = H  =>  f' = -i H
            ds[2 * n] = rate_scale * rhs_i;
            ds[2 * n + 1] = -rate_scale * rhs_r;
        }
    };

    OrderParameterTrace trace;
    const std::size_t m = grid.size();
    trace.tau = grid;
    trace.a.resize(m);
    trace.abs_a.resize(m);
    trace.ratio.resize(m);
    trace.filling.resize(m);
    trace.norm2.resize(m);
    trace.phase.resize(m);

    GutzwillerState snap;
    snap.f.resize(dim);
    ode::integrate_dopri5(rhs, y, grid, opts,
                          [&](std::size_t k, const std::vector<double>& s) {
                              for (int n = 0; n < dim; ++n) {
                                  snap.f[n] = std::complex<double>(s[2 * n], s[2 * n + 1]);
                              }
                              const auto a = snap.order_parameter();
                              trace.a[k] = a;
                              trace.abs_a[k] = std::abs(a);
                              const double jt = j_of_tau(grid[k]);
                              const double ut = u_of_tau(grid[k]);
                              trace.ratio[k] = 2.0 * jt / ut;
                              trace.filling[k] = snap.filling();
                              trace.norm2[k] = snap.norm2();
                              trace.phase[k] = trace.ratio[k] > mean_field_critical_ratio
                                                   ? LatticePhase::superfluid
                                                   : LatticePhase::mott;
                          });

    for (int n = 0; n < dim; ++n) {
        state.f[n] = std::complex<double>(y[2 * n], y[2 * n + 1]);
    }
    return trace;
}

AdiabaticityReport adiabaticity_monitor(std::span<const double> tau,
                                        std::span<const double> v0,
                                        double omega_ratio) {
    if (tau.size() != v0.size() || tau.size() < 2) {
        throw invalid_parameter("adiabaticity_monitor: need matching series with >= 2 samples");
    }
    if (!(omega_ratio > 0.0)) {
        throw invalid_parameter("adiabaticity_monitor: omega_ratio must be positive");
    }
    AdiabaticityReport r;
    const std::size_t n = tau.size();
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t a = k == 0 ? 0 : k - 1;
        const std::size_t b = k + 1 == n ? k : k + 1;
        const double rate = std::abs((v0[b] - v0[a]) / (tau[b] - tau[a]));
        if (rate > r.max_rate) {
            r.max_rate = rate;
            r.tau_at_max = tau[k];
        }
    }
    r.ratio_16wr = r.max_rate / (16.0 * omega_ratio);
    r.pass = r.ratio_16wr < 0.1;
    return r;
}

} // namespace oml
