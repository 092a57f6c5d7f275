#pragma once

#include <span>

namespace hsd {

struct PowerLawFit {
    double slope = 0.0;
    double intercept = 0.0;     // log-space intercept
    double residual_rms = 0.0;  // RMS residual in log space
};

/// Ordinary least squares on (log x, log y). Requires >= 2 positive samples
/// (>= 5 for the public fitting paths; callers enforce their own minimum).
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

} // namespace hsd
