#pragma once

#include <complex>
#include <vector>

namespace hsd {

/// Uniform n-dimensional grid on [-extent, extent)^n, row-major samples.
struct GridFunction {
    int n = 2;
    long points_per_axis = 0;
    double extent = 0.0;
    std::vector<std::complex<double>> samples;

    double dx() const { return 2.0 * extent / points_per_axis; }
    double coord(long i) const { return -extent + i * dx(); }
    long size() const { return static_cast<long>(samples.size()); }
    std::complex<double>& at(long i, long j) { return samples[i * points_per_axis + j]; }
    const std::complex<double>& at(long i, long j) const {
        return samples[i * points_per_axis + j];
    }
};

} // namespace hsd
