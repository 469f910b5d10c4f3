#pragma once

#include <span>
#include <vector>

namespace oml {

// Monotone piecewise-cubic interpolation (Fritsch-Carlson slopes). Preserves
// the monotonicity of the data on each segment and reproduces node values
// exactly, bit for bit.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::span<const double> x, std::span<const double> y);

    double operator()(double x) const;
    double derivative(double x) const;

    double x_min() const { return x_.empty() ? 0.0 : x_.front(); }
    double x_max() const { return x_.empty() ? 0.0 : x_.back(); }
    bool empty() const { return x_.empty(); }

private:
    std::size_t segment(double x) const;

    std::vector<double> x_, y_, m_;  // nodes, values, node slopes
};

} // namespace oml
