#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "hsd/gridfn.hpp"
#include "hsd/symbol.hpp"

namespace hsd {

/// Monotone quintic ramp: psi(s) = 0 for s <= a1, 1 for s >= 2*a1, C^2 overall.
struct Cutoff {
    double a1 = 1.0;
    double psi(double s) const;
};

/// Frequency-box plan for the windowed damped transform
/// chi(|xi|) e^{-eps P + i t P}: a smooth C-infinity window (1 inside the
/// plateau radius, 0 at the box edge) truncates the integrand, and a small
/// damping eps regularizes it, extrapolated to eps -> 0.
struct FftGrid {
    int n = 2;
    long points_per_axis = 0;
    double extent = 0.0;  // half-width R of the frequency box
    double plateau = 0.0; // window is identically 1 for |xi| <= plateau
    double eps = 0.0;     // base damping level

    double dxi() const { return 2.0 * extent / points_per_axis; }
    double x_extent() const;   // half-width of the conjugate spatial grid
    double window(double rho) const; // chi(|xi|)
};

struct KernelOpts {
    double samples_per_period = 4.0; // oscillation resolution at the box edge
    double boundary_factor = 1.3;    // extent / plateau (window transition width)
    int eps_levels = 3;              // damping levels eps/2^l, extrapolated
    long max_points_per_axis = 1l << 14;
};

/// Choose extent and damping for a given t, requested |x| range, and grid size.
FftGrid plan_fft_grid(const Symbol& sym, double t, double x_max, long points_per_axis,
                      const KernelOpts& opts = {});

struct GridKernel {
    FftGrid grid;
    GridFunction values;    // I(t, x) on the conjugate x-grid
    double error_estimate;  // max pointwise change at the last extrapolation order
};

/// Damped-FFT evaluation of I(t, x) = F^{-1}(e^{itP})(x) on the full grid,
/// Richardson-extrapolated over damping levels. Convention:
/// F^{-1} g(x) = (2 pi)^{-n} int e^{i<x, xi>} g(xi) d xi.
/// A non-null `weight` multiplies the integrand by xi^weight (derivative kernels).
GridKernel kernel_fft(const Symbol& sym, double t, const FftGrid& grid,
                      int eps_levels = 3, const MultiIndex* weight = nullptr);

struct KernelValue {
    double t = 0.0;
    std::vector<double> x;
    std::complex<double> value;
    std::string method;
    double error_estimate = 0.0;
};

/// Direct damped sums over the same frequency grid at arbitrary (off-grid) x.
std::vector<KernelValue> kernel_points(const Symbol& sym, double t,
                                       std::span<const std::vector<double>> points,
                                       const FftGrid& grid, int eps_levels = 3,
                                       bool parallel = true);

/// Low-frequency piece: int e^{i(<x,xi> + tP)} (1 - psi(P)) dxi / (2 pi)^n
/// over the compact region {P <= 2 a1}.
KernelValue kernel_compact(const Symbol& sym, double t, std::span<const double> x,
                           const Cutoff& cutoff, double periods_per_panel = 2.0,
                           bool estimate_error = true);

struct RadialOpts {
    double tail_tol = 1e-8;         // e^{-eps s} truncation of the s-integral
    double periods_per_panel = 2.0;
    double sphere_nodes_per_period = 8.0;
    bool estimate_error = true;     // re-integrate at doubled panel density
    bool parallel = true;
};

/// High-frequency piece via the polar pipeline:
/// (2 pi)^{-n} int_0^inf e^{-eps s + i t s} s^{n/m - 1} psi(s) Phi(r s^{1/m}, s) ds,
/// with a two-level damping extrapolation (eps, eps/2).
KernelValue kernel_radial(const Symbol& sym, double t, std::span<const double> x,
                          double eps, const Cutoff& cutoff,
                          const RadialOpts& opts = {});

enum class KernelStrategy { automatic, fft, split };

/// Dispatch: FFT for moderate t and |x| within the grid budget, radial + compact
/// otherwise; negative t by conjugation symmetry.
KernelValue kernel_eval(const Symbol& sym, double t, std::span<const double> x,
                        KernelStrategy strategy = KernelStrategy::automatic,
                        const KernelOpts& opts = {});

/// Exact fundamental solution for P = |xi|^2 under the convention above:
/// (4 pi |t|)^{-n/2} e^{i n sgn(t) pi/4} e^{-i |x|^2 / (4t)}.
std::complex<double> closed_form_gaussian(double t, std::span<const double> x);

} // namespace hsd
