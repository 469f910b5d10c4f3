#include "oml/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oml/errors.hpp"

namespace oml::ode {

namespace {

// Dormand-Prince 5(4) tableau (Hairer-Norsett-Wanner DOPRI5).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;

// b - b_hat, for the embedded 4th-order error estimate.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

class Dopri5 {
public:
    Dopri5(const Rhs& f, std::size_t n, const Options& opts)
        : f_(f), opts_(opts), n_(n) {
        for (auto* k : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_})
            k->resize(n_);
        ytmp_.resize(n_);
        ynew_.resize(n_);
        have_k1_ = false;
    }

    // Advances y in place from t0 to t1. The step-size proposal persists
    // across calls, so walking an output grid does not reset the controller.
    void advance(std::vector<double>& y, double t0, double t1) {
        if (t1 <= t0) return;
        double t = t0;
        if (proposed_h_ <= 0.0) {
            proposed_h_ = opts_.h_init > 0.0 ? opts_.h_init : initial_step(t0, t1, y);
        }
        const double h_cap = opts_.h_max > 0.0 ? opts_.h_max
                                               : std::numeric_limits<double>::infinity();

        while (t < t1) {
            if (++nsteps_ > opts_.max_steps) {
                throw numerical_error("integrator exceeded max step count at t = " +
                                      std::to_string(t));
            }
            const double h = std::min({proposed_h_, t1 - t, h_cap});
            const double h_floor = 1e-14 * std::max(1.0, std::abs(t));
            if (h < h_floor) {
                throw numerical_error("integrator step-size underflow at t = " +
                                      std::to_string(t));
            }
            const bool clipped = h < proposed_h_;

            const double err = try_step(y, t, h);
            if (err <= 1.0) {
                t += h;
                y.swap(ynew_);
                k1_.swap(k7_);  // FSAL
                have_k1_ = true;
                const double grow = err == 0.0 ? 5.0
                                               : std::min(5.0, 0.9 * std::pow(err, -0.2));
                const double next = h * std::max(grow, 0.2);
                proposed_h_ = clipped ? std::max(proposed_h_, next) : next;
            } else {
                proposed_h_ = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
                have_k1_ = true;  // k1 still valid at unchanged (t, y)
            }
        }
    }

private:
    double initial_step(double t0, double t1, const std::vector<double>& y) {
        // Crude but safe: a small fraction of the interval, shrunk if the
        // first derivative is large on the solution scale.
        f_(t0, y, k1_);
        have_k1_ = true;
        double ny = 0.0, nd = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            ny = std::max(ny, std::abs(y[i]));
            nd = std::max(nd, std::abs(k1_[i]));
        }
        double h = (t1 - t0) * 1e-3;
        if (nd > 0.0) h = std::min(h, 0.01 * std::max(ny, 1e-6) / nd);
        return std::max(h, 1e-12 * (t1 - t0));
    }

    // One trial step of size h; returns the scaled error norm. ynew_/k7_ hold
    // the candidate state and its derivative.
    double try_step(const std::vector<double>& y, double t, double h) {
        if (!have_k1_) f_(t, y, k1_);

        for (std::size_t i = 0; i < n_; ++i)
            ytmp_[i] = y[i] + h * a21 * k1_[i];
        f_(t + c2 * h, ytmp_, k2_);

        for (std::size_t i = 0; i < n_; ++i)
            ytmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        f_(t + c3 * h, ytmp_, k3_);

        for (std::size_t i = 0; i < n_; ++i)
            ytmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        f_(t + c4 * h, ytmp_, k4_);

        for (std::size_t i = 0; i < n_; ++i)
            ytmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] +
                                   a54 * k4_[i]);
        f_(t + c5 * h, ytmp_, k5_);

        for (std::size_t i = 0; i < n_; ++i)
            ytmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] +
                                   a64 * k4_[i] + a65 * k5_[i]);
        f_(t + h, ytmp_, k6_);

        for (std::size_t i = 0; i < n_; ++i)
            ynew_[i] = y[i] + h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] +
                                   b5 * k5_[i] + b6 * k6_[i]);
        f_(t + h, ynew_, k7_);

        double err2 = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] +
                                  e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
            const double sc = opts_.atol +
                              opts_.rtol * std::max(std::abs(y[i]), std::abs(ynew_[i]));
            err2 += (e / sc) * (e / sc);
        }
        have_k1_ = false;
        return std::sqrt(err2 / static_cast<double>(n_));
    }

    const Rhs& f_;
    Options opts_;
    std::size_t n_;
    std::size_t nsteps_ = 0;
    double proposed_h_ = 0.0;
    bool have_k1_ = false;
    std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, ynew_;
};

} // namespace

void integrate_dopri5(const Rhs& f, std::vector<double>& y,
                      std::span<const double> t_grid, const Options& opts,
                      const std::function<void(std::size_t, const std::vector<double>&)>& observer) {
    if (t_grid.empty()) return;
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        if (!(t_grid[k] > t_grid[k - 1])) {
            throw invalid_parameter("integration grid must be strictly increasing");
        }
    }
    Dopri5 stepper(f, y.size(), opts);
    if (observer) observer(0, y);
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        stepper.advance(y, t_grid[k - 1], t_grid[k]);
        if (observer) observer(k, y);
    }
}

void integrate_dopri5(const Rhs& f, std::vector<double>& y, double t0, double t1,
                      const Options& opts) {
    const double grid[2] = {t0, t1};
    integrate_dopri5(f, y, std::span<const double>(grid, 2), opts, nullptr);
}

std::vector<double> make_output_grid(double t0, double t1, double dt) {
    if (!(t1 > t0)) throw invalid_parameter("empty integration span");
    if (!(dt > 0.0)) throw invalid_parameter("output step must be positive");
    const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / dt));
    std::vector<double> grid(n + 1);
    for (std::size_t k = 0; k < n; ++k) grid[k] = t0 + dt * static_cast<double>(k);
    grid[n] = t1;
    if (n >= 2 && grid[n] - grid[n - 1] < 0.5 * dt) {
        grid.erase(grid.end() - 2);
    }
    return grid;
}

void integrate_rk4(const Rhs& f, std::vector<double>& y, double t0, double t1,
                   double h) {
    if (!(h > 0.0)) throw invalid_parameter("integrate_rk4: step must be positive");
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    double t = t0;
    while (t < t1) {
        const double step = std::min(h, t1 - t);
        f(t, y, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * step * k1[i];
        f(t + 0.5 * step, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * step * k2[i];
        f(t + 0.5 * step, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + step * k3[i];
        f(t + step, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            y[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += step;
    }
}

} // namespace oml::ode
