#pragma once

#include <cmath>

#include "oml/errors.hpp"

namespace oml {

// Flat-top drive pulse with super-Gaussian edges:
//   Y^2(tau) = y2_baseline + (y2_plateau - y2_baseline) * g(tau)
// where g = exp(-((tau-tau_rise)/sigma)^(2p)) before the rise center, 1 on
// the plateau, and exp(-((tau-tau_fall)/sigma)^(2p)) after the fall center.
// Smooth enough for the adiabaticity monitor to differentiate.
struct DriveSchedule {
    double y2_baseline = 0.0;
    double y2_plateau = 0.0;
    double tau_rise = 0.0;   // rise edge center (plateau begins here)
    double tau_fall = 0.0;   // fall edge center (plateau ends here)
    double edge_width = 1.0; // sigma
    int order = 3;           // p

    void validate() const {
        if (y2_baseline < 0.0 || y2_plateau < 0.0) {
            throw invalid_parameter("drive intensities must be >= 0");
        }
        if (!(tau_rise < tau_fall)) {
            throw invalid_parameter("drive rise center must precede fall center");
        }
        if (!(edge_width > 0.0)) {
            throw invalid_parameter("drive edge width must be positive");
        }
        if (order < 1) {
            throw invalid_parameter("super-Gaussian order must be >= 1");
        }
    }

    double window(double tau) const {
        double x = 0.0;
        if (tau < tau_rise) {
            x = (tau - tau_rise) / edge_width;
        } else if (tau > tau_fall) {
            x = (tau - tau_fall) / edge_width;
        } else {
            return 1.0;
        }
        return std::exp(-std::pow(x * x, order));
    }

    double at(double tau) const {
        return y2_baseline + (y2_plateau - y2_baseline) * window(tau);
    }
};

} // namespace oml
