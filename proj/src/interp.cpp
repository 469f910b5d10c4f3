#include "oml/interp.hpp"

#include <algorithm>
#include <cmath>

#include "oml/errors.hpp"

namespace oml {

MonotoneCubic::MonotoneCubic(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw invalid_parameter("interpolation needs >= 2 matching nodes");
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) {
            throw invalid_parameter("interpolation nodes must be strictly increasing");
        }
    }
    x_.assign(x.begin(), x.end());
    y_.assign(y.begin(), y.end());

    const std::size_t n = x_.size();
    std::vector<double> d(n - 1);  // secant slopes
    for (std::size_t i = 0; i + 1 < n; ++i) {
        d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    }

    m_.resize(n);
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        m_[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
    }
    // Fritsch-Carlson limiter.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) {
            m_[i] = 0.0;
            m_[i + 1] = 0.0;
            continue;
        }
        const double a = m_[i] / d[i];
        const double b = m_[i + 1] / d[i];
        const double s = a * a + b * b;
        if (s > 9.0) {
            const double t = 3.0 / std::sqrt(s);
            m_[i] = t * a * d[i];
            m_[i + 1] = t * b * d[i];
        }
    }
}

std::size_t MonotoneCubic::segment(double x) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    if (it == x_.begin()) return 0;
    std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
}

double MonotoneCubic::operator()(double x) const {
    if (x < x_.front() || x > x_.back()) {
        throw numerical_error("interpolation query " + std::to_string(x) +
                              " outside table [" + std::to_string(x_.front()) + ", " +
                              std::to_string(x_.back()) + "]");
    }
    const std::size_t i = segment(x);
    if (x == x_[i]) return y_[i];          // node-exact
    if (x == x_[i + 1]) return y_[i + 1];
    const double h = x_[i + 1] - x_[i];
    const double s = (x - x_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
    if (x < x_.front() || x > x_.back()) {
        throw numerical_error("interpolation query outside table");
    }
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double s = (x - x_[i]) / h;
    const double dh00 = (6.0 * s * s - 6.0 * s) / h;
    const double dh10 = 3.0 * s * s - 4.0 * s + 1.0;
    const double dh01 = -dh00;
    const double dh11 = 3.0 * s * s - 2.0 * s;
    return dh00 * y_[i] + dh10 * m_[i] + dh01 * y_[i + 1] + dh11 * m_[i + 1];
}

} // namespace oml
